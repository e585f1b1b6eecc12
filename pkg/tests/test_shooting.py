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

import math

import numpy as np
import pytest

from solver.errors import InsufficientEdgeSamples, InvalidParams, SeedTooLarge
from solver.shooting import Outcome, Profile, Thresholds, WaveParams, classify_regularity, default_t_max, \
    profile_distance, profile_ordering, residual, seed_expansion, shoot


def test_seed_expansion_linear_edge():
    phi, psi = seed_expansion(WaveParams(2.0, 1.0, 0.0, 1.0), 0.01)
    assert phi == pytest.approx(0.005, rel=1e-12)
    assert psi == pytest.approx(0.005, rel=1e-12)


def test_seed_expansion_square_root_edge():
    phi, psi = seed_expansion(WaveParams(3.0, 1.0, 0.0, 1.0), 1e-4)
    assert phi == pytest.approx(8.16496580927726e-3, rel=1e-9)
    assert psi == pytest.approx(phi, rel=1e-12)


@pytest.mark.parametrize("m", [1.5, 2.0, 3.0])
def test_seed_expansion_scaling(m):
    params = WaveParams(m, 1.0, 0.0, 1.0)
    ratio = seed_expansion(params, 5e-5)[0] / seed_expansion(params, 1e-4)[0]
    assert ratio == pytest.approx(2.0 ** (-1.0 / (m - 1.0)), rel=1e-12)


def test_seed_must_precede_delay():
    with pytest.raises(SeedTooLarge):
        seed_expansion(WaveParams(2.0, 1.0, 0.1, 1.0), 0.2)


@pytest.mark.parametrize("m, D, r, c", [(1.0, 1.0, 0.0, 1.0), (2.0, 0.0, 0.0, 1.0), (2.0, 1.0, -0.1, 1.0),
                                        (2.0, 1.0, 0.0, 0.0)])
def test_wave_parameters_validated(m, D, r, c):
    with pytest.raises(InvalidParams):
        WaveParams(m, D, r, c)


def test_short_window_rejected(fisher):
    with pytest.raises(InvalidParams):
        shoot(fisher, WaveParams(2.0, 1.0, 0.0, 1.0), t_max=5.0)


def test_default_window(fisher):
    assert default_t_max(fisher, WaveParams(2.0, 1.0, 0.0, 1.0)) == 60.0
    assert default_t_max(fisher, WaveParams(2.0, 1.0, 2.0, 1.0)) == 100.0


@pytest.mark.parametrize("r", [0.0, 0.2])
def test_slow_shot_decays(fisher, r):
    profile, outcome = shoot(fisher, WaveParams(2.0, 1.0, r, 0.05))
    assert outcome.tag == Outcome.DECAYED_TO_ZERO
    assert outcome.phi < fisher.K
    assert profile.t_star == outcome.time


@pytest.mark.parametrize("r", [0.0, 0.2])
def test_fast_shot_grows(fisher, r):
    profile, outcome = shoot(fisher, WaveParams(2.0, 1.0, r, 5.0))
    assert outcome.tag == Outcome.GREW_PAST_K
    assert outcome.phi >= fisher.K
    assert profile.t_star <= outcome.time


def test_profile_starts_at_support_edge(fisher):
    profile, _ = shoot(fisher, WaveParams(2.0, 1.0, 0.5, 0.7))
    assert profile.t[0] == 0.0 and profile.phi[0] == 0.0 and profile.psi[0] == 0.0
    assert np.all(np.diff(profile.t) > 0.0)
    assert np.all(profile.phi >= 0.0)
    _, phi, psi = profile.increasing_part()
    assert np.all(np.diff(phi) > 0.0)
    assert np.all(psi[1:] > 0.0)
    assert profile.phi_at(-1.0) == 0.0
    assert len(profile.rows()) == len(profile.t)


def test_segments_follow_the_delay(fisher):
    profile, _ = shoot(fisher, WaveParams(2.0, 1.0, 0.5, 0.7))
    assert profile.shift == pytest.approx(0.35)
    assert np.allclose(profile.segment_boundaries, 0.35 * np.arange(1, len(profile.segment_boundaries) + 1))
    assert profile.segment[0] == 0
    assert np.all(np.diff(profile.segment) >= 0)


def test_exact_speed_converges(fisher):
    thresholds = Thresholds(eps_k=2e-3, eps_flat=2e-3)
    profile, outcome = shoot(fisher, WaveParams(2.0, 1.0, 0.0, 1.0), t_max=14.0, thresholds=thresholds)
    assert outcome.tag == Outcome.CONVERGED_NEAR_K
    assert outcome.time == 14.0
    early = profile.t <= 10.0
    exact = 1.0 - np.exp(-profile.t[early] / 2.0)
    assert np.max(np.abs(profile.phi[early] - exact)) < 1e-5


@pytest.mark.parametrize("r", [0.0, 0.2])
def test_residual_small(fisher, r):
    params = WaveParams(2.0, 1.0, r, 1.0)
    profile, _ = shoot(fisher, params)
    values, dpsi = residual(profile, fisher, params)
    assert np.max(np.abs(values) / (1.0 + np.abs(dpsi))) < 1e-2


@pytest.mark.parametrize("kinetics_name", ["fisher", "nicholson"])
def test_profiles_ordered_in_speed(kinetics_name, request):
    kinetics = request.getfixturevalue(kinetics_name)
    lower, _ = shoot(kinetics, WaveParams(2.0, 1.0, 0.5, 0.6))
    upper, _ = shoot(kinetics, WaveParams(2.0, 1.0, 0.5, 0.7))
    assert profile_ordering(lower, upper) > 0.0


def test_ordering_ignores_band_below_equilibrium():
    t = np.linspace(0.0, 20.0, 2001)
    lower_phi = 1.0 - np.exp(-0.5 * t)
    upper_phi = np.where(lower_phi > 0.9999, lower_phi - 2e-6, lower_phi + 1e-3 * lower_phi)
    segments, boundaries = np.zeros(len(t), dtype=int), np.zeros(0)
    lower = Profile(t, lower_phi, lower_phi * (1.0 - lower_phi), segments, boundaries, math.inf, 1.0, 0.0)
    upper = Profile(t, upper_phi, upper_phi * (1.0 - upper_phi), segments, boundaries, math.inf, 1.0, 0.0)
    assert profile_ordering(lower, upper) == pytest.approx(-2e-6, rel=1e-6)
    assert profile_ordering(lower, upper, ceiling=0.999) > 0.0


def test_continuous_dependence_on_speed(fisher):
    reference, _ = shoot(fisher, WaveParams(2.0, 1.0, 0.0, 0.9))
    distances = []
    for delta in (0.08, 0.04, 0.02, 0.01):
        other, _ = shoot(fisher, WaveParams(2.0, 1.0, 0.0, 0.9 + delta))
        distances.append(profile_distance(reference, other, (0.0, 5.0)))
    assert all(later < earlier for earlier, later in zip(distances, distances[1:]))
    assert distances[-1] < distances[0] / 4.0


def test_early_exit_is_sound(fisher):
    params = WaveParams(2.0, 1.0, 0.0, 0.3)
    thresholds = Thresholds(eps_zero=1e-3)
    _, early = shoot(fisher, params, thresholds=thresholds)
    profile, late = shoot(fisher, params, thresholds=thresholds, diagnostic=True)
    assert early.tag == Outcome.DECAYED_TO_ZERO
    assert late.tag == Outcome.DECAYED_TO_ZERO
    assert late.time > early.time
    assert np.max(profile.phi) < fisher.K
    assert np.min(profile.psi) < 0.0


@pytest.mark.parametrize("m, label", [(1.5, "C1"), (2.0, "NonC1"), (3.0, "NonC1")])
def test_edge_regularity(fisher, m, label):
    profile, _ = shoot(fisher, WaveParams(m, 1.0, 0.0, 1.0))
    fit = classify_regularity(profile, m)
    assert fit.label == label
    assert fit.expected_exponent == pytest.approx(1.0 / (m - 1.0))
    assert abs(fit.exponent - fit.expected_exponent) < 0.05 * fit.expected_exponent
    assert fit.samples >= 8


def test_regularity_needs_edge_samples():
    t = np.linspace(0.0, 1.0, 5)
    profile = Profile(t, t / 2.0, np.full(5, 0.5), np.zeros(5, dtype=int), np.zeros(0), math.inf, 1.0, 0.0)
    with pytest.raises(InsufficientEdgeSamples):
        classify_regularity(profile, 2.0)
