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

from solver.errors import InadmissibleTrialFunction, InvalidParams, NegativeRadicand, TrajectoryNotSharp
from solver.kinetics import make_kinetics
from solver.phase_plane import PhaseTrajectory, integrate_phase_ode, sharp_trajectory
from solver.shooting import WaveParams
from solver.speed_finder import critical_speed
from solver.variational import Representation, TrialFunction, c_star_no_delay, delay_gap, identity_terms, \
    j_functional, optimal_g


class IncreasingDensity:
    """
    Duck-typed trial function g(s) = 2 s on [0, 1], which is not admissible.
    """
    K = 1.0

    @staticmethod
    def value(s):
        return 2.0 * np.asarray(s)

    @staticmethod
    def derivative(s):
        return 2.0 * np.ones_like(np.asarray(s, dtype=float))


@pytest.fixture(scope="module")
def delayed_front():
    """
    Fisher kinetics with the sharp trajectory for m = 2, D = 1, r = 0.5.
    """
    kinetics = make_kinetics("fisher", {})
    result = critical_speed(kinetics, 2.0, 1.0, 0.5, tol=1e-7)
    params = WaveParams(2.0, 1.0, 0.5, result.c_star)
    return kinetics, sharp_trajectory(result.profile, result.closing_profile, params, kinetics)


def exact_fisher_trajectory():
    """
    Exact sharp trajectory psi_tilde = phi (1 - phi) of Fisher kinetics with m = 2, D = 1, c = 1.
    """
    phi = np.concatenate((np.geomspace(1e-6, 1e-2, 200), np.linspace(1e-2, 1.0, 2001)[1:]))
    return PhaseTrajectory(phi, phi * (1.0 - phi), phi.copy(), WaveParams(2.0, 1.0, 0.0, 1.0), 1.0)


def test_power_family_value(fisher):
    g = TrialFunction.power(1.0, 1.0)
    assert j_functional(g, fisher, 1.0, 1.0) == pytest.approx(16.0 / 15.0, rel=1e-9)
    assert j_functional(g, fisher, 1.0, 4.0) == pytest.approx(32.0 / 15.0, rel=1e-9)


def test_power_family_maximum(fisher):
    assert j_functional(TrialFunction.power(1.0, 2.0), fisher, 2.0, 1.0) == pytest.approx(1.0, rel=1e-9)
    assert j_functional(TrialFunction.power(1.0, 1.0), fisher, 2.0, 1.0) == pytest.approx(2.0 * np.sqrt(2.0) / 3.0,
                                                                                          rel=1e-9)


def test_negative_radicand(fisher):
    with pytest.raises(NegativeRadicand):
        j_functional(IncreasingDensity(), fisher, 2.0, 1.0)


def test_knot_spline_is_normalized():
    g = TrialFunction.knot_spline([0.0, 0.5, 1.0], [2.0, 1.0, 5.0])
    assert g.representation == Representation.KNOT_SPLINE
    assert g.integral() == pytest.approx(1.0, abs=1e-12)
    assert g.value(1.0) == pytest.approx(0.0, abs=1e-12)
    assert np.all(g.derivative(np.linspace(0.05, 0.95, 19)) < 0.0)
    rows = g.rows(11)
    assert len(rows) == 11 and rows[-1][:2] == (1.0, 0.0)


@pytest.mark.parametrize("knots, values", [([0.0, 0.5, 1.0], [1.0, 2.0, 0.0]), ([0.1, 0.5, 1.0], [2.0, 1.0, 0.0]),
                                           ([0.0, 1.0], [1.0, 0.0])])
def test_inadmissible_knot_splines(knots, values):
    with pytest.raises(InadmissibleTrialFunction):
        TrialFunction.knot_spline(knots, values)


def test_inadmissible_power():
    with pytest.raises(InadmissibleTrialFunction):
        TrialFunction.power(1.0, 0.0)


def test_linear_diffusion_estimate(fisher):
    estimate = c_star_no_delay(fisher, 1.0, 1.0)
    assert estimate.value == pytest.approx(2.0, abs=1e-3)
    assert estimate.linear_value == 2.0
    assert estimate.sup_estimate <= 2.0 + 1e-9


@pytest.mark.parametrize("D, expected", [(1.0, 1.0), (4.0, 2.0)])
def test_degenerate_estimate(fisher, D, expected):
    estimate = c_star_no_delay(fisher, 2.0, D)
    assert estimate.value == pytest.approx(expected, rel=1e-6)
    assert estimate.best.alpha == pytest.approx(2.0, rel=1e-3)
    assert estimate.linear_value is None
    assert estimate.evaluations == len(estimate.trace)


def test_knot_family_does_not_exceed_speed(fisher):
    estimate = c_star_no_delay(fisher, 2.0, 1.0, family="knot_spline", budget=200)
    assert 1.0 - 1e-6 <= estimate.value <= 1.0 + 1e-6


def test_estimate_rejects_bad_exponent(fisher):
    with pytest.raises(InvalidParams):
        c_star_no_delay(fisher, 0.5, 1.0)


def test_optimal_g_of_exact_trajectory(fisher):
    trajectory = exact_fisher_trajectory()
    g = optimal_g(trajectory, fisher)
    assert g.integral() == pytest.approx(1.0, abs=1e-12)
    assert g.value(0.0) == pytest.approx(3.0, rel=1e-3)
    assert g.value(0.5) == pytest.approx(0.75, rel=1e-3)
    assert np.all(g.derivative(np.linspace(0.1, 0.9, 9)) < 0.0)
    assert j_functional(g, fisher, 2.0, 1.0) == pytest.approx(1.0, abs=1e-4)
    assert delay_gap(trajectory, g, fisher) == 0.0


def test_optimal_g_ignores_anchor(fisher):
    trajectory = exact_fisher_trajectory()
    first, second = optimal_g(trajectory, fisher), optimal_g(trajectory, fisher, anchor=0.25)
    assert np.allclose(first.values, second.values, rtol=1e-9, atol=1e-15)


def test_optimal_g_needs_sharp_edge(fisher):
    smooth = integrate_phase_ode(fisher, WaveParams(2.0, 1.0, 0.0, 1.5), seed="smooth")
    with pytest.raises(TrajectoryNotSharp):
        optimal_g(smooth, fisher)


def test_identity_without_delay(fisher):
    terms = identity_terms(exact_fisher_trajectory(), fisher)
    assert terms["delay_gap"] == 0.0
    assert abs(terms["residual"]) < 1e-4


@pytest.mark.slow
def test_identity_with_delay(delayed_front):
    kinetics, trajectory = delayed_front
    terms = identity_terms(trajectory, kinetics)
    assert abs(terms["residual"]) < 1e-3
    assert terms["delay_gap"] > 1e-2
    assert terms["c_star"] < 1.0


@pytest.mark.slow
def test_speed_bounds_every_trial_function(delayed_front):
    kinetics, trajectory = delayed_front
    c = trajectory.params.c
    generator = np.random.default_rng(7)
    candidates = [TrialFunction.power(kinetics.K, alpha) for alpha in (0.5, 1.0, 2.0, 4.0)]
    knots = np.linspace(0.0, kinetics.K, 7)
    for _ in range(4):
        values = np.concatenate((np.cumsum(generator.uniform(0.1, 1.0, 6))[::-1], [0.0]))
        candidates.append(TrialFunction.knot_spline(knots, values))
    for g in candidates:
        lower_bound = j_functional(g, kinetics, 2.0, 1.0) - delay_gap(trajectory, g, kinetics)
        assert c >= lower_bound - 1e-4


def admissible_candidates(K, generator, count=6):
    """
    Power densities and random decreasing knot splines on [0, K].
    """
    candidates = [TrialFunction.power(K, alpha) for alpha in (0.5, 1.0, 2.0, 3.0, 6.0)]
    knots = np.linspace(0.0, K, 9)
    for _ in range(count):
        values = np.concatenate((np.cumsum(generator.uniform(0.05, 1.0, 8))[::-1], [0.0]))
        candidates.append(TrialFunction.knot_spline(knots, values))
    return candidates


def test_no_trial_function_exceeds_exact_speed(fisher):
    for g in admissible_candidates(fisher.K, np.random.default_rng(5)):
        assert j_functional(g, fisher, 2.0, 1.0) <= 1.0 + 1e-6


@pytest.mark.parametrize("kinetics_name, m", [("fisher", 1.5), ("fisher", 3.0), ("nicholson", 2.0)])
def test_no_trial_function_exceeds_sharp_speed(kinetics_name, m, request):
    kinetics = request.getfixturevalue(kinetics_name)
    result = critical_speed(kinetics, m, 1.0, 0.0, tol=1e-5)
    for g in admissible_candidates(kinetics.K, np.random.default_rng(13)):
        assert j_functional(g, kinetics, m, 1.0) <= result.c_hi + 1e-6


@pytest.mark.slow
def test_nicholson_delay_gap(nicholson):
    result = critical_speed(nicholson, 1.5, 1.0, 1.0, tol=1e-6)
    params = WaveParams(1.5, 1.0, 1.0, result.c_star)
    terms = identity_terms(sharp_trajectory(result.profile, result.closing_profile, params, nicholson), nicholson)
    assert terms["delay_gap"] > 0.0
    assert terms["c_star"] < critical_speed(nicholson, 1.5, 1.0, 0.0, tol=1e-5).c_lo
