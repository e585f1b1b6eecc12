"""
    This file is part of Sharp Front Toolkit.

    Copyright (C) 2024-2026 The Sharp Front Toolkit developers

    Sharp Front Toolkit is free software; you can redistribute it and/or modify it under the terms of the GNU General
    Public License as published by the Free Software Foundation; either version 3 of the License, or (at your option)
    any later version.

    Sharp Front Toolkit is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY; without even the
    implied warranty of MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the GNU General Public License for
    more details.

    You should have received a copy of the GNU General Public License along with Sharp Front Toolkit. If not, see
    <http://www.gnu.org/licenses/>.
"""

import numpy as np
import pytest

from solver.errors import InvalidParams, UndeterminedOutcome
from solver.kinetics import make_kinetics
from solver.shooting import Outcome, Thresholds, WaveParams, classify_regularity, profile_ordering, shoot
from solver.speed_finder import ORDERING_BAND, SweepRow, bracket, classification_sequence, classify_speed, \
    critical_speed, decreasing_in_r, delay_sweep, is_trichotomy_ordered


def test_bracket_contains_exact_speed(fisher):
    c_lo, c_hi = bracket(fisher, 2.0, 1.0, 0.0)
    assert c_lo < c_hi
    assert c_lo <= 1.0 <= c_hi


def test_exact_fisher_speed(fisher):
    result = critical_speed(fisher, 2.0, 1.0, 0.0, tol=1e-6)
    assert result.c_star == pytest.approx(1.0, abs=1e-4)
    assert result.c_hi - result.c_lo <= 1e-6
    assert result.t_max_heuristic
    assert result.as_dict()["bracket"] == [result.c_lo, result.c_hi]


def test_tight_bisection_around_exact_speed(fisher):
    # The first halving of the search lands on the exact speed 1
    result = critical_speed(fisher, 2.0, 1.0, 0.0, tol=1e-8)
    assert result.c_lo < result.c_star <= result.c_hi
    assert result.c_hi - result.c_lo <= 1e-8
    assert result.c_star == pytest.approx(1.0, abs=1e-4)


def test_converged_shot_keeps_certified_bracket(fisher):
    thresholds = Thresholds(eps_zero=1e-9, eps_k=1e-2, eps_flat=1e-2)
    result = critical_speed(fisher, 2.0, 1.0, 0.0, tol=1e-6, t_max=12.0, thresholds=thresholds)
    assert result.converged
    assert result.c_lo < result.c_star <= result.c_hi
    assert result.c_star == pytest.approx(1.0, abs=1e-2)
    assert result.closing_profile is None
    lower = classify_speed(fisher, WaveParams(2.0, 1.0, 0.0, result.c_lo), 12.0, thresholds)
    upper = classify_speed(fisher, WaveParams(2.0, 1.0, 0.0, result.c_hi), 12.0, thresholds)
    assert lower.outcome.tag == Outcome.DECAYED_TO_ZERO
    assert upper.outcome.tag == Outcome.GREW_PAST_K


def test_speed_scales_with_diffusivity(fisher):
    result = critical_speed(fisher, 2.0, 4.0, 0.0, tol=1e-6)
    assert result.c_star == pytest.approx(2.0, abs=2e-4)


def test_loose_tolerance_needs_no_bisection(fisher):
    result = critical_speed(fisher, 2.0, 1.0, 0.0, tol=10.0)
    assert result.iterations == 0
    assert result.c_star == 0.5 * (result.c_lo + result.c_hi)
    assert result.c_lo <= 1.0 <= result.c_hi


def test_tolerance_must_be_positive(fisher):
    with pytest.raises(InvalidParams):
        critical_speed(fisher, 2.0, 1.0, 0.0, tol=0.0)


def test_slow_kinetics_stay_undetermined():
    kinetics = make_kinetics("fisher", {"p": 0.01})
    with pytest.raises(UndeterminedOutcome):
        classify_speed(kinetics, WaveParams(2.0, 1.0, 0.0, 0.1), t_max=10.0)


def test_trichotomy_is_ordered(fisher):
    speeds = np.linspace(0.3, 3.1, 15)
    tags = classification_sequence(fisher, 2.0, 1.0, 0.5, speeds)
    assert is_trichotomy_ordered(tags)
    assert tags[0] == Outcome.DECAYED_TO_ZERO
    assert tags[-1] == Outcome.GREW_PAST_K


def test_speeds_must_increase(fisher):
    with pytest.raises(InvalidParams):
        classification_sequence(fisher, 2.0, 1.0, 0.0, [1.0, 0.5])


def test_trichotomy_check():
    decayed, converged, grew = Outcome.DECAYED_TO_ZERO, Outcome.CONVERGED_NEAR_K, Outcome.GREW_PAST_K
    assert is_trichotomy_ordered([decayed, decayed, converged, grew])
    assert is_trichotomy_ordered([decayed, grew])
    assert not is_trichotomy_ordered([decayed, grew, decayed])
    assert not is_trichotomy_ordered([decayed, converged, converged, grew])
    assert not is_trichotomy_ordered([decayed, Outcome.UNDETERMINED, grew])


def test_decrease_in_delay_check():
    rows = [SweepRow(0.5, 0.8, 0.79, 0.81, 10), SweepRow(0.0, 1.0, 0.99, 1.01, 10), SweepRow(1.0, 0.7, 0.69, 0.71, 9)]
    assert decreasing_in_r(rows)
    assert not decreasing_in_r(rows + [SweepRow(2.0, 0.75, 0.74, 0.76, 9)])
    assert rows[0].as_row() == (0.5, 0.8, 0.79, 0.81, 10)


@pytest.mark.parametrize("r_list", [[0.25, 0.5], [0.0, -0.5]])
def test_sweep_needs_nonnegative_delays_with_zero(fisher, r_list):
    with pytest.raises(InvalidParams):
        delay_sweep(fisher, 2.0, 1.0, r_list)


@pytest.mark.slow
def test_delay_slows_the_wave(fisher):
    baseline = critical_speed(fisher, 2.0, 1.0, 0.0, tol=1e-4)
    delayed = critical_speed(fisher, 2.0, 1.0, 0.5, tol=1e-4)
    assert delayed.c_star < baseline.c_star - 1e-3


@pytest.mark.slow
def test_delay_sweep(fisher):
    rows, results = delay_sweep(fisher, 2.0, 1.0, [0.0, 0.25, 0.5], tol=1e-3)
    assert [row.r for row in rows] == [0.0, 0.25, 0.5]
    assert decreasing_in_r(rows)
    assert all(row.c_lo <= row.c_star <= row.c_hi for row in rows)
    assert len(results) == 3


@pytest.mark.slow
def test_parallel_sweep_matches_serial(nicholson):
    serial, _ = delay_sweep(nicholson, 2.0, 1.0, [0.0, 0.5], tol=1e-3)
    parallel, _ = delay_sweep(nicholson, 2.0, 1.0, [0.0, 0.5], tol=1e-3, workers=2)
    assert [row.c_star for row in serial] == [row.c_star for row in parallel]
    assert parallel[1].c_star < parallel[0].c_star


@pytest.mark.parametrize("m, label", [(1.5, "C1"), (2.0, "NonC1"), (3.0, "NonC1")])
def test_edge_exponent_at_sharp_speed(fisher, m, label):
    result = critical_speed(fisher, m, 1.0, 0.0, tol=1e-5)
    fit = classify_regularity(result.profile, m)
    assert fit.label == label
    assert abs(fit.exponent - 1.0 / (m - 1.0)) < 0.05 / (m - 1.0)


@pytest.mark.slow
def test_nicholson_front_slowed_by_delay():
    kinetics = make_kinetics("nicholson_linear_death", {"p": 2.0, "a": 1.0, "q": 1.0, "delta": 1.0})
    baseline = critical_speed(kinetics, 1.5, 1.0, 0.0, tol=1e-5)
    delayed = critical_speed(kinetics, 1.5, 1.0, 1.0, tol=1e-5)
    assert delayed.c_hi < baseline.c_lo
    assert delayed.c_lo < delayed.c_star <= delayed.c_hi


def random_instance(generator):
    """
    Draw kinetics and wave parameters satisfying the standing hypotheses.
    """
    if generator.uniform() < 0.5:
        kinetics = make_kinetics("fisher", {"p": generator.uniform(0.5, 2.0), "capacity": generator.uniform(0.5, 2.0)})
    else:
        kinetics = make_kinetics("nicholson_linear_death", {"p": generator.uniform(1.5, 2.5),
                                                            "a": generator.uniform(0.5, 1.5), "q": 1.0, "delta": 1.0})
    return kinetics, generator.uniform(1.5, 3.0), generator.uniform(0.5, 2.0), generator.uniform(0.0, 1.0)


@pytest.mark.slow
@pytest.mark.parametrize("seed", [3, 11, 29])
def test_random_instances_are_monotone_in_speed(seed):
    kinetics, m, D, r = random_instance(np.random.default_rng(seed))
    scale = np.sqrt(D * kinetics.linear_rate()) * kinetics.K ** (0.5 * (m - 1.0))
    speeds = np.geomspace(0.05, 4.0, 16) * scale
    tags = classification_sequence(kinetics, m, D, r, speeds)
    assert is_trichotomy_ordered(tags)
    ceiling = (1.0 - ORDERING_BAND) * kinetics.K
    profiles = [shoot(kinetics, WaveParams(m, D, r, c))[0] for c in speeds[::5]]
    for lower, upper in zip(profiles, profiles[1:]):
        assert profile_ordering(lower, upper, ceiling=ceiling) > 0.0
