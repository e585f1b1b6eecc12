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

import logging
import math
import os
import sys

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from scipy.integrate import DOP853, solve_ivp
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from solver.errors import AmbiguousExponent, IntegralDiverged, InvalidParams, NonMonotoneProfile, \
    TrajectoryHitZero
from solver.kinetics import KineticsSpec, lambda_root
from solver.shooting import Profile, WaveParams

# Define the logger
LOG = logging.getLogger(os.path.basename(__file__).split('.')[0])

# Floor of psi_tilde in denominators
PSI_FLOOR = 1e-14

# Largest elapsed-time integral accepted before it counts as divergent (unit: wave coordinate)
ELAPSED_CEILING = 1e12

# Relative tolerance of the exponent labels of the edge fit
EXPONENT_TOLERANCE = 0.1


@dataclass(frozen=True)
class PhaseTrajectory:
    """
    Phase-plane trajectory psi_tilde(phi) with the delayed argument phi_tilde(phi) = phi(t(phi) - c r).
    """
    phi: np.ndarray
    psi_tilde: np.ndarray
    phi_delayed: np.ndarray
    params: WaveParams
    K: float
    branch: str = "sharp"
    # Slope of the linear closure onto (K, 0), if the trajectory was closed
    kappa: float = math.nan

    def rows(self, kinetics: KineticsSpec) -> List[Tuple[float, float, float, float]]:
        """
        Get the CSV rows (phi, psi_tilde, phi_delayed, psi_bar).
        :param kinetics: Kinetics of the barrier.
        :return: List of rows.
        """
        barrier_values = psi_bar(kinetics, self.params, self.phi)
        return [(float(phi), float(psi), float(delayed), float(bar))
                for phi, psi, delayed, bar in zip(self.phi, self.psi_tilde, self.phi_delayed, barrier_values)]

    def as_dict(self) -> Dict[str, object]:
        """
        Get a JSON friendly summary of the trajectory.
        :return: Dictionary representation.
        """
        return {"branch": self.branch, "samples": int(len(self.phi)), "phi_min": float(self.phi[0]),
                "phi_max": float(self.phi[-1]), "psi_tilde_max": float(np.max(self.psi_tilde)),
                "kappa_fit": None if math.isnan(self.kappa) else self.kappa, "c": self.params.c, "r": self.params.r}


@dataclass(frozen=True)
class BarrierCurve:
    """
    Barrier psi_bar(phi) = D m phi^(m-1) (b(phi) - d(phi)) / c sampled on [0, K].
    """
    phi: np.ndarray
    psi_bar: np.ndarray


@dataclass(frozen=True)
class EdgeFit:
    """
    Power-law fit psi_tilde ~ A phi^gamma at phi = 0.
    """
    kind: str
    exponent: float
    coefficient: float
    expected_coefficient: float
    samples: int

    def as_dict(self) -> Dict[str, object]:
        """
        Get a JSON friendly representation of the fit.
        :return: Dictionary representation.
        """
        return {"kind": self.kind, "exponent": self.exponent, "fitted_coefficient": self.coefficient,
                "expected_coefficient": self.expected_coefficient, "samples": self.samples}


class ElapsedTime:
    """
    Elapsed wave time along a trajectory, F(phi) = integral over (0, phi) of D m s^(m-1) / psi_tilde(s).
    Below the first sample the sharp edge asymptotic psi_tilde ~ c phi is used.
    """

    def __init__(self, trajectory: PhaseTrajectory) -> None:
        params = trajectory.params
        mask = trajectory.psi_tilde > 0.0
        self.__phi = trajectory.phi[mask]
        if len(self.__phi) < 2:
            raise IntegralDiverged("trajectory has fewer than two samples with positive psi_tilde", "delayed_argument")
        self.__m, self.__weight, self.__c = params.m, params.D * params.m, params.c
        integrand = self.__weight * self.__phi ** (self.__m - 1.0) / np.maximum(trajectory.psi_tilde[mask], PSI_FLOOR)
        self.__head = self.__power_law(self.__phi[0])
        self.__antiderivative = PchipInterpolator(self.__phi, integrand).antiderivative()

    def __power_law(self, phi: float) -> float:
        return self.__weight * phi ** (self.__m - 1.0) / ((self.__m - 1.0) * self.__c)

    @property
    def phi_max(self) -> float:
        """
        Get the largest phi covered.
        :return: Last sample with positive psi_tilde.
        """
        return float(self.__phi[-1])

    def __call__(self, phi: float) -> float:
        if phi <= self.__phi[0]:
            return self.__power_law(max(phi, 0.0))
        return self.__head + float(self.__antiderivative(min(phi, self.__phi[-1])))

    def invert(self, elapsed: float) -> float:
        """
        Get the phi reached after a given elapsed time.
        :param elapsed: Elapsed time (nonnegative).
        :return: phi with F(phi) = elapsed.
        """
        if elapsed <= 0.0:
            return 0.0
        if elapsed <= self.__head:
            return (elapsed / self.__weight * (self.__m - 1.0) * self.__c) ** (1.0 / (self.__m - 1.0))
        return brentq(lambda phi: self(phi) - elapsed, self.__phi[0], self.__phi[-1], xtol=1e-15, rtol=1e-13)


def elapsed_time(trajectory: PhaseTrajectory) -> ElapsedTime:
    """
    Build the elapsed-time integral of a trajectory.
    :param trajectory: Phase trajectory.
    :return: Callable elapsed time with its inverse.
    """
    return ElapsedTime(trajectory)


def delayed_argument(trajectory: PhaseTrajectory, phi: float, elapsed: Optional[ElapsedTime] = None) -> float:
    """
    Invert the elapsed-time integral: the smallest theta >= 0 whose elapsed time to phi does not exceed c r.
    :param trajectory: Phase trajectory.
    :param phi: Current level.
    :param elapsed: Precomputed elapsed time of the trajectory (built on demand if None).
    :return: Delayed argument theta, 0 when the whole traverse from 0 takes at most c r.
    """
    shift = trajectory.params.shift
    if shift == 0.0:
        return phi
    elapsed = elapsed_time(trajectory) if elapsed is None else elapsed
    if phi > elapsed.phi_max * (1.0 + 1e-12):
        raise InvalidParams(f"phi = {phi} beyond the trajectory range {elapsed.phi_max}", "delayed_argument",
                            "phase_plane")
    total = elapsed(phi)
    if not math.isfinite(total) or total > ELAPSED_CEILING:
        raise IntegralDiverged(f"elapsed time up to phi = {phi:.6g} does not converge", "delayed_argument")
    if total <= shift:
        return 0.0
    return elapsed.invert(total - shift)


def from_profile(profile: Profile, params: WaveParams) -> PhaseTrajectory:
    """
    Change the independent variable of a profile from t to phi on its increase interval.
    :param profile: Sampled profile.
    :param params: Wave parameters of the profile.
    :return: Phase trajectory with psi_tilde(phi) = psi(t(phi)) and phi_tilde(phi) = phi(t(phi) - c r).
    """
    t, phi, psi = profile.increasing_part()
    if len(t) < 3 or np.any(np.diff(phi) <= 0.0):
        raise NonMonotoneProfile("profile is not strictly increasing on its increase interval", "from_profile")
    t, phi, psi = t[1:], phi[1:], psi[1:]
    delayed = phi.copy() if params.r == 0.0 else profile.phi_at(t - params.shift)
    return PhaseTrajectory(phi, np.maximum(psi, 0.0), delayed, params, profile.K)


def psi_bar(kinetics: KineticsSpec, params: WaveParams, phi: np.ndarray) -> np.ndarray:
    """
    Evaluate the barrier D m phi^(m-1) (b(phi) - d(phi)) / c.
    :param kinetics: Kinetics.
    :param params: Wave parameters.
    :param phi: Levels.
    :return: Barrier values.
    """
    phi = np.asarray(phi, dtype=float)
    return params.D * params.m * phi ** (params.m - 1.0) * kinetics.net(phi) / params.c


def barrier(kinetics: KineticsSpec, params: WaveParams, n: int = 256) -> BarrierCurve:
    """
    Sample the barrier on a uniform grid of [0, K].
    :param kinetics: Kinetics.
    :param params: Wave parameters.
    :param n: Grid size.
    :return: Barrier curve.
    """
    if n < 16:
        raise InvalidParams(f"barrier grid needs at least 16 points, got {n}", "barrier", "phase_plane")
    phi = np.linspace(0.0, kinetics.K, n)
    values = psi_bar(kinetics, params, phi)
    values[-1] = 0.0
    return BarrierCurve(phi, values)


def stable_slope(kinetics: KineticsSpec, params: WaveParams) -> float:
    """
    Slope kappa of the stable direction psi_tilde ~ kappa (K - phi) at the saddle (K, 0) without delay.
    :param kinetics: Kinetics.
    :param params: Wave parameters (r = 0).
    :return: Positive root of kappa^2 + c kappa - D m K^(m-1) (d'(K) - b'(K)) = 0.
    """
    if params.r != 0.0:
        raise InvalidParams("the closed-form saddle slope needs r = 0", "stable_slope", "phase_plane")
    K = kinetics.K
    stiffness = params.D * params.m * K ** (params.m - 1.0) * float(kinetics.dd(K) - kinetics.db(K))
    return 0.5 * (-params.c + math.sqrt(params.c ** 2 + 4.0 * stiffness))


class _History:
    """
    Committed (T, phi) pairs of a trajectory under construction.
    """

    def __init__(self) -> None:
        self.time = np.zeros(64)
        self.phi = np.zeros(64)
        self.size = 1

    def append(self, time: float, phi: float) -> None:
        if self.size == len(self.time):
            self.time = np.concatenate((self.time, np.zeros(self.size)))
            self.phi = np.concatenate((self.phi, np.zeros(self.size)))
        self.time[self.size] = time
        self.phi[self.size] = phi
        self.size += 1

    def at(self, time: float) -> float:
        return float(np.interp(time, self.time[:self.size], self.phi[:self.size]))


def _phase_grid(phi_start: float, phi_max: float, K: float, n_grid: int) -> np.ndarray:
    """
    Log-spaced grid up to 0.01 K, uniform above.
    """
    knee = min(0.01 * K, phi_max)
    grid = np.geomspace(phi_start, knee, max(n_grid // 4, 8))
    if phi_max > knee:
        grid = np.union1d(grid, np.linspace(knee, phi_max, n_grid))
    return grid


def integrate_phase_ode(kinetics: KineticsSpec, params: WaveParams, phi_max: Optional[float] = None,
                        seed: str = "sharp", n_grid: int = 400, phi_start: Optional[float] = None,
                        rtol: float = 1e-10, atol: float = 1e-14) -> PhaseTrajectory:
    """
    Integrate dpsi/dphi = c - D m phi^(m-1) (b(phi_tilde) - d(phi)) / psi in phi, with the delayed argument
    evaluated from the trajectory built so far.
    :param kinetics: Kinetics.
    :param params: Wave parameters.
    :param phi_max: Right end (at most K, default K).
    :param seed: "sharp" to start from psi ~ c phi, "smooth" for the phi^m branch (r = 0 only).
    :param n_grid: Number of uniform output samples.
    :param phi_start: First level (default 1e-6 K for the sharp seed, 1e-3 K for the smooth one).
    :param rtol: Relative tolerance.
    :param atol: Absolute tolerance.
    :return: Phase trajectory.
    """
    K = kinetics.K
    phi_max = K if phi_max is None else phi_max
    if not 0.0 < phi_max <= K:
        raise InvalidParams(f"phi_max must lie in (0, K], got {phi_max}", "integrate_phase_ode", "phase_plane")
    if seed == "smooth":
        return _smooth_branch(kinetics, params, phi_max, n_grid, 1e-3 * K if phi_start is None else phi_start)
    if seed != "sharp":
        raise InvalidParams(f"unknown seed '{seed}'", "integrate_phase_ode", "phase_plane")

    m, c, shift = params.m, params.c, params.shift
    weight = params.D * m
    phi_start = 1e-6 * K if phi_start is None else phi_start
    history = _History()

    def delayed(time: float, phi: float) -> float:
        if shift == 0.0:
            return phi
        lag = time - shift
        if lag <= 0.0:
            return 0.0
        if history.size < 2 or lag <= history.time[1]:
            return ((m - 1.0) * c * lag / weight) ** (1.0 / (m - 1.0))
        return history.at(lag)

    def rhs(phi: float, y: np.ndarray) -> np.ndarray:
        psi = max(y[0], PSI_FLOOR)
        mobility = weight * phi ** (m - 1.0)
        source = float(kinetics.b(delayed(y[1], phi))) - float(kinetics.d(phi))
        return np.array([c - mobility * source / psi, mobility / psi])

    grid = _phase_grid(phi_start, phi_max, K, n_grid)
    values = np.zeros((2, len(grid)))
    values[:, 0] = [c * phi_start, weight * phi_start ** (m - 1.0) / ((m - 1.0) * c)]
    history.append(values[1, 0], phi_start)
    filled = 1

    stepper = DOP853(rhs, phi_start, values[:, 0], phi_max, rtol=rtol, atol=atol)
    while stepper.status == "running":
        stepper.step()
        if stepper.status == "failed" or stepper.y[0] <= PSI_FLOOR:
            partial = _trajectory(grid[:filled], values[:, :filled], params, K, history, delayed)
            raise TrajectoryHitZero(f"psi_tilde reached zero at phi = {stepper.t:.6g} (c = {c:.10g})", stepper.t,
                                    partial, "integrate_phase_ode")
        history.append(stepper.y[1], stepper.t)
        dense = stepper.dense_output()
        upto = int(np.searchsorted(grid, stepper.t, side="right"))
        if upto > filled:
            values[:, filled:upto] = dense(grid[filled:upto])
            filled = upto

    if filled < len(grid):
        values[:, filled:] = stepper.y[:, None]
    LOG.debug("Phase trajectory c = %.10g, r = %g integrated to phi = %.6g.", c, params.r, phi_max)
    return _trajectory(grid, values, params, K, history, delayed)


def _trajectory(grid: np.ndarray, values: np.ndarray, params: WaveParams, K: float, history: _History,
                delayed) -> PhaseTrajectory:
    """
    Assemble a trajectory from sampled (psi_tilde, T) values.
    """
    phi_delayed = np.array([delayed(time, phi) for time, phi in zip(values[1], grid)])
    return PhaseTrajectory(grid.copy(), np.maximum(values[0], 0.0), np.minimum(phi_delayed, grid), params, K)


def _smooth_branch(kinetics: KineticsSpec, params: WaveParams, phi_max: float, n_grid: int,
                   phi_start: float) -> PhaseTrajectory:
    """
    Trajectory entering the saddle (K, 0), integrated backward in phi from the stable direction.
    """
    if params.r != 0.0:
        raise InvalidParams("the smooth seed is only available for r = 0", "integrate_phase_ode", "phase_plane")
    K = kinetics.K
    m, c = params.m, params.c
    weight = params.D * m
    kappa = stable_slope(kinetics, params)
    phi_entry = min(phi_max, K * (1.0 - 1e-4))

    def rhs(phi: float, y: np.ndarray) -> List[float]:
        return [c - weight * phi ** (m - 1.0) * float(kinetics.net(phi)) / max(y[0], PSI_FLOOR)]

    def vanished(_: float, y: np.ndarray) -> float:
        return y[0] - PSI_FLOOR

    vanished.terminal, vanished.direction = True, -1.0
    solution = solve_ivp(rhs, (phi_entry, phi_start), [kappa * (K - phi_entry)], method="Radau", rtol=1e-10,
                         atol=1e-20, events=vanished, dense_output=True)
    if solution.status == 1:
        raise TrajectoryHitZero(f"smooth branch reached psi_tilde = 0 at phi = {solution.t[-1]:.6g}",
                                float(solution.t[-1]), None, "integrate_phase_ode")
    grid = _phase_grid(phi_start, phi_entry, K, n_grid)
    psi = np.maximum(solution.sol(grid)[0], 0.0)
    return PhaseTrajectory(grid, psi, grid.copy(), params, K, "smooth", kappa)


def edge_asymptotics(trajectory: PhaseTrajectory, kinetics: KineticsSpec) -> EdgeFit:
    """
    Fit psi_tilde ~ A phi^gamma over the first decade of the trajectory and label the edge.
    :param trajectory: Phase trajectory.
    :param kinetics: Kinetics.
    :return: Sharp (gamma close to 1, A close to c) or Smooth (gamma close to m) fit.
    """
    params = trajectory.params
    phi_low = trajectory.phi[0]
    mask = (trajectory.phi <= 10.0 * phi_low) & (trajectory.psi_tilde > 0.0)
    if np.count_nonzero(mask) < 4:
        raise AmbiguousExponent(f"only {np.count_nonzero(mask)} samples in the first decade", "edge_asymptotics")
    exponent, intercept = np.polyfit(np.log(trajectory.phi[mask]), np.log(trajectory.psi_tilde[mask]), 1)
    coefficient = math.exp(intercept)

    if abs(exponent - 1.0) <= EXPONENT_TOLERANCE:
        return EdgeFit("Sharp", float(exponent), coefficient, params.c, int(np.count_nonzero(mask)))
    if abs(exponent - params.m) <= EXPONENT_TOLERANCE * params.m:
        lam = lambda_root(kinetics, params.c, params.r)
        expected = params.D * params.m * (float(kinetics.db(0.0)) * math.exp(-lam * params.shift)
                                          - float(kinetics.dd(0.0))) / params.c
        return EdgeFit("Smooth", float(exponent), coefficient, expected, int(np.count_nonzero(mask)))
    raise AmbiguousExponent(f"edge exponent {exponent:.4g} matches neither 1 nor m = {params.m:g}",
                            "edge_asymptotics")


def sharp_trajectory(lower: Profile, upper: Optional[Profile], params: WaveParams, kinetics: KineticsSpec,
                     rel_gap: float = 1e-3, n_tail: int = 64) -> PhaseTrajectory:
    """
    Reconstruct the critical trajectory on (0, K] from the profiles bracketing the sharp speed: the lower trajectory
    is kept while the upper one agrees with it, then the trajectory is closed linearly onto (K, 0).
    :param lower: Profile at the lower end of the bracket (or at a converged speed).
    :param upper: Profile at the upper end of the bracket (None for a converged speed).
    :param params: Wave parameters at the sharp speed.
    :param kinetics: Kinetics.
    :param rel_gap: Relative psi_tilde gap at which the two trajectories count as separated.
    :param n_tail: Number of samples of the closure.
    :return: Trajectory ending at (K, 0), with the closure slope in kappa.
    """
    K = kinetics.K
    body = from_profile(lower, params)
    phi, psi = body.phi, body.psi_tilde
    cut = len(phi)
    if upper is not None:
        other = from_profile(upper, params)
        inside = phi <= other.phi[-1]
        gap = np.abs(np.interp(phi, other.phi, other.psi_tilde) - psi) / np.maximum(psi, PSI_FLOOR)
        separated = np.nonzero(~inside | (gap > rel_gap))[0]
        if len(separated):
            cut = max(int(separated[0]), 2)
    phi_cut, psi_cut = phi[cut - 1], psi[cut - 1]
    kappa = psi_cut / (K - phi_cut)
    tail = np.linspace(phi_cut, K, n_tail + 1)[1:]
    joined = PhaseTrajectory(np.concatenate((phi[:cut], tail)),
                             np.concatenate((psi[:cut], kappa * (K - tail))),
                             np.concatenate((body.phi_delayed[:cut], tail)), params, K, "sharp", kappa)
    if params.r == 0.0:
        return joined

    elapsed = elapsed_time(joined)
    delayed_tail = [delayed_argument(joined, level, elapsed) for level in tail[:-1]]
    phi_delayed = np.concatenate((body.phi_delayed[:cut], delayed_tail, [K]))
    LOG.debug("Sharp trajectory closed at phi = %.6g with kappa = %.6g.", phi_cut, kappa)
    return PhaseTrajectory(joined.phi, joined.psi_tilde, phi_delayed, params, K, "sharp", kappa)


if __name__ == "__main__":
    LOG.critical("This module is not supposed to be executed.")
    sys.exit(1)
