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

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from scipy.integrate import cumulative_trapezoid, quad, trapezoid
from scipy.interpolate import PchipInterpolator
from scipy.optimize import minimize, minimize_scalar

from solver.errors import AmbiguousExponent, InadmissibleTrialFunction, InvalidParams, NegativeRadicand, \
    OptimizerStalled, TrajectoryNotSharp
from solver.kinetics import KineticsSpec
from solver.phase_plane import PSI_FLOOR, PhaseTrajectory, edge_asymptotics

# Define the logger
LOG = logging.getLogger(os.path.basename(__file__).split('.')[0])

# Search interval of log(alpha) for the power family
LOG_ALPHA_RANGE = (-5.0, 5.0)

# Number of samples used to check the sign of the radicand
RADICAND_SAMPLES = 2001


class Representation(Enum):
    """
    Trial function families.
    """
    POWER_FAMILY = "power_family"
    KNOT_SPLINE = "knot_spline"


class TrialFunction:
    """
    Admissible density g on [0, K]: g(K) = 0, unit integral, decreasing.
    """

    def __init__(self, K: float, representation: Representation, alpha: Optional[float] = None,
                 knots: Optional[np.ndarray] = None, values: Optional[np.ndarray] = None) -> None:
        """
        Constructor. Use TrialFunction.power or TrialFunction.knot_spline.
        """
        self.K = K
        self.representation = representation
        self.alpha = alpha
        self.knots = knots
        self.values = values
        self.__spline = None
        self.__derivative = None
        if representation == Representation.KNOT_SPLINE:
            self.__spline = PchipInterpolator(knots, values)
            self.__derivative = self.__spline.derivative()

    @classmethod
    def power(cls, K: float, alpha: float) -> "TrialFunction":
        """
        Build g(s) = (alpha + 1) / K * (1 - s / K)^alpha.
        :param K: Positive equilibrium.
        :param alpha: Positive exponent.
        :return: Trial function.
        """
        if not alpha > 0.0 or not math.isfinite(alpha):
            raise InadmissibleTrialFunction(f"alpha must be positive, got {alpha}", "TrialFunction.power")
        return cls(K, Representation.POWER_FAMILY, alpha=alpha)

    @classmethod
    def knot_spline(cls, knots: Sequence[float], values: Sequence[float]) -> "TrialFunction":
        """
        Build a monotone cubic density through strictly decreasing values, last value forced to zero, normalized.
        :param knots: Strictly increasing knots from 0 to K.
        :param values: Values at the knots.
        :return: Trial function.
        """
        knots = np.asarray(knots, dtype=float)
        values = np.array(values, dtype=float)
        if len(knots) != len(values) or len(knots) < 3:
            raise InadmissibleTrialFunction("knot spline needs at least three matching knots and values",
                                            "TrialFunction.knot_spline")
        if knots[0] != 0.0 or np.any(np.diff(knots) <= 0.0):
            raise InadmissibleTrialFunction("knots must increase strictly from 0", "TrialFunction.knot_spline")
        values[-1] = 0.0
        if np.any(np.diff(values) >= 0.0):
            raise InadmissibleTrialFunction("values must decrease strictly", "TrialFunction.knot_spline")
        area = float(PchipInterpolator(knots, values).antiderivative()(knots[-1]))
        return cls(float(knots[-1]), Representation.KNOT_SPLINE, knots=knots, values=values / area)

    def value(self, s: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """
        Evaluate g.
        :param s: Points in [0, K].
        :return: g(s).
        """
        if self.representation == Representation.POWER_FAMILY:
            return (self.alpha + 1.0) / self.K * np.clip(1.0 - np.asarray(s) / self.K, 0.0, None) ** self.alpha
        return self.__spline(np.clip(s, 0.0, self.K))

    def derivative(self, s: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """
        Evaluate g'.
        :param s: Points in [0, K).
        :return: g'(s).
        """
        if self.representation == Representation.POWER_FAMILY:
            rest = np.clip(1.0 - np.asarray(s) / self.K, 1e-300, None)
            return -self.alpha * (self.alpha + 1.0) / self.K ** 2 * rest ** (self.alpha - 1.0)
        return self.__derivative(np.clip(s, 0.0, self.K))

    def integral(self) -> float:
        """
        Integrate g over [0, K].
        :return: Integral (1 up to round-off).
        """
        if self.representation == Representation.POWER_FAMILY:
            return 1.0
        return float(self.__spline.antiderivative()(self.K))

    def rows(self, n: int = 201) -> List[Tuple[float, float, float]]:
        """
        Get the CSV rows (s, g, g') on a uniform grid.
        :param n: Number of rows.
        :return: List of rows.
        """
        s = np.linspace(0.0, self.K, n)
        return [(float(x), float(g), float(dg)) for x, g, dg in zip(s, self.value(s), self.derivative(s[:-1]))] + \
            [(float(self.K), 0.0, float(self.derivative(self.K)))]

    def as_dict(self) -> Dict[str, object]:
        """
        Get a JSON friendly representation.
        :return: Dictionary representation.
        """
        if self.representation == Representation.POWER_FAMILY:
            return {"representation": self.representation.value, "alpha": self.alpha}
        return {"representation": self.representation.value, "knots": self.knots.tolist(),
                "values": self.values.tolist()}


@dataclass
class VariationalEstimate:
    """
    Supremum estimate of the variational speed characterization.
    """
    value: float
    sup_estimate: float
    best: TrialFunction
    family: str
    linear_value: Optional[float] = None
    evaluations: int = 0
    trace: List[Dict[str, float]] = field(default_factory=list)

    def as_dict(self) -> Dict[str, object]:
        """
        Get a JSON friendly representation with the optimization trace.
        :return: Dictionary representation.
        """
        return {"value": self.value, "sup_estimate": self.sup_estimate, "family": self.family,
                "linear_value": self.linear_value, "evaluations": self.evaluations, "best_g": self.best.as_dict(),
                "trace": self.trace}


def j_functional(g: TrialFunction, kinetics: KineticsSpec, m: float, D: float, tol: float = 1e-12) -> float:
    """
    Evaluate 2 sqrt(D) * integral over [0, K] of sqrt(-m s^(m-1) g(s) g'(s) (b(s) - d(s))).
    :param g: Trial function.
    :param kinetics: Kinetics.
    :param m: Degeneracy exponent.
    :param D: Diffusivity.
    :param tol: Tolerated negative radicand (round-off).
    :return: Value of the functional.
    """
    K = g.K

    def radicand(s: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        return -m * np.power(s, m - 1.0) * g.value(s) * g.derivative(s) * kinetics.net(s)

    grid = np.linspace(0.0, K, RADICAND_SAMPLES)[1:-1]
    lowest = float(np.min(radicand(grid)))
    if lowest < -tol:
        raise NegativeRadicand(f"radicand reaches {lowest:.3g}", "j_functional")

    # s = K (3u^2 - 2u^3) clusters the nodes at both ends
    def integrand(u: float) -> float:
        s = K * u * u * (3.0 - 2.0 * u)
        return math.sqrt(max(float(radicand(s)), 0.0)) * 6.0 * K * u * (1.0 - u)

    value, _ = quad(integrand, 0.0, 1.0, epsabs=1e-10, epsrel=1e-10, limit=200)
    return 2.0 * math.sqrt(D) * value


def _knot_values(theta: np.ndarray) -> np.ndarray:
    """
    Values at the knots from log-decrements, last value zero.
    """
    return np.concatenate((np.cumsum(np.exp(theta)[::-1])[::-1], [0.0]))


def _optimize_power(kinetics: KineticsSpec, m: float, D: float, budget: int,
                    trace: List[Dict[str, float]]) -> Tuple[float, TrialFunction]:
    """
    Coarse scan of log(alpha), then bounded Brent search around the best scan point.
    """
    K = kinetics.K

    def objective(log_alpha: float) -> float:
        value = j_functional(TrialFunction.power(K, math.exp(log_alpha)), kinetics, m, D)
        trace.append({"evaluation": len(trace), "family": "power_family", "log_alpha": log_alpha, "value": value})
        return -value

    scan = np.linspace(*LOG_ALPHA_RANGE, 11)
    values = [objective(x) for x in scan]
    best = int(np.argmin(values))
    lower, upper = scan[max(best - 1, 0)], scan[min(best + 1, len(scan) - 1)]
    result = minimize_scalar(objective, bounds=(lower, upper), method="bounded",
                             options={"xatol": 1e-10, "maxiter": max(budget - len(scan), 10)})
    if -result.fun >= -values[best]:
        return float(-result.fun), TrialFunction.power(K, math.exp(float(result.x)))
    return float(-values[best]), TrialFunction.power(K, math.exp(float(scan[best])))


def _optimize_knots(kinetics: KineticsSpec, m: float, D: float, start: TrialFunction, budget: int, n_knots: int,
                    seed: int, trace: List[Dict[str, float]]) -> Tuple[float, TrialFunction]:
    """
    Nelder-Mead over the log-decrements of a knot spline, started from a given trial function and from random
    perturbations of it.
    """
    K = kinetics.K
    knots = np.linspace(0.0, K, n_knots + 1)
    decrements = -np.diff(start.value(knots))
    origin = np.log(np.maximum(decrements, 1e-300))

    def objective(theta: np.ndarray) -> float:
        try:
            value = j_functional(TrialFunction.knot_spline(knots, _knot_values(theta)), kinetics, m, D)
        except (InadmissibleTrialFunction, NegativeRadicand):
            return math.inf
        trace.append({"evaluation": len(trace), "family": "knot_spline", "value": value})
        return -value

    generator = np.random.default_rng(seed)
    restarts = max(1, budget // (50 * n_knots))
    best_value, best_theta = -math.inf, origin
    for attempt in range(restarts):
        initial = origin if attempt == 0 else origin + generator.normal(0.0, 0.3, size=len(origin))
        result = minimize(objective, initial, method="Nelder-Mead",
                          options={"maxfev": max(budget // restarts, 20), "xatol": 1e-8, "fatol": 1e-12})
        if -result.fun > best_value:
            best_value, best_theta = -result.fun, result.x
    return best_value, TrialFunction.knot_spline(knots, _knot_values(best_theta))


def c_star_no_delay(kinetics: KineticsSpec, m: float, D: float, family: str = "power_family", budget: int = 400,
                    n_knots: int = 8, seed: int = 0) -> VariationalEstimate:
    """
    Estimate the sharp speed without delay as the supremum of the variational functional over a trial family.
    :param kinetics: Kinetics.
    :param m: Degeneracy exponent (m >= 1).
    :param D: Diffusivity.
    :param family: "power_family" or "knot_spline" (the knot search starts from the power optimum).
    :param budget: Evaluation budget per family.
    :param n_knots: Number of spline intervals of the knot family.
    :param seed: Seed of the random restarts.
    :return: Estimate, including the linear spreading bound for m = 1.
    """
    if not m >= 1.0 or not D > 0.0:
        raise InvalidParams(f"need m >= 1 and D > 0, got m = {m}, D = {D}", "c_star_no_delay", "variational")
    representation = Representation(family)

    trace: List[Dict[str, float]] = []
    value, best = _optimize_power(kinetics, m, D, budget, trace)
    if representation == Representation.KNOT_SPLINE:
        knot_value, knot_best = _optimize_knots(kinetics, m, D, best, budget, n_knots, seed, trace)
        if knot_value > value:
            value, best = knot_value, knot_best
    if not math.isfinite(value) or value <= 0.0:
        raise OptimizerStalled(f"no admissible trial function with a positive value ({value})", "c_star_no_delay")

    linear_value = 2.0 * math.sqrt(D * kinetics.linear_rate()) if m == 1.0 else None
    estimate = max(value, linear_value) if linear_value is not None else value
    LOG.info("Variational estimate for m = %g, D = %g (%s): %.10g after %d evaluation(s).", m, D, family, estimate,
             len(trace))
    return VariationalEstimate(estimate, value, best, family, linear_value, len(trace), trace)


def optimal_g(trajectory: PhaseTrajectory, kinetics: KineticsSpec, anchor: Optional[float] = None) -> TrialFunction:
    """
    Build the trial function attaining the variational identity from a sharp trajectory:
    (ln g)' = -D m phi^(m-1) (b(phi) - d(phi)) / psi_tilde^2, g(K) = 0, unit integral.
    :param trajectory: Sharp trajectory on (0, K] at the sharp speed.
    :param kinetics: Kinetics.
    :param anchor: Level where the unnormalized g equals 1 (default K / 2).
    :return: Trial function.
    """
    try:
        edge = edge_asymptotics(trajectory, kinetics)
    except AmbiguousExponent as error:
        raise TrajectoryNotSharp(f"edge exponent not resolved: {error}", "optimal_g") from error
    if edge.kind != "Sharp":
        raise TrajectoryNotSharp(f"edge exponent {edge.exponent:.4g} belongs to a smooth wave", "optimal_g")

    K = kinetics.K
    if trajectory.phi[-1] < K * (1.0 - 1e-9):
        raise InvalidParams(f"trajectory ends at phi = {trajectory.phi[-1]:.6g} before K", "optimal_g", "variational")
    params = trajectory.params
    weight = params.D * params.m
    mask = (trajectory.psi_tilde > 0.0) & (trajectory.phi < K)
    phi, psi = trajectory.phi[mask], trajectory.psi_tilde[mask]

    slope = -weight * phi ** (params.m - 1.0) * kinetics.net(phi) / np.maximum(psi, PSI_FLOOR) ** 2
    log_g = cumulative_trapezoid(slope, phi, initial=0.0)
    log_g -= np.interp(0.5 * K if anchor is None else anchor, phi, log_g)
    head = weight * kinetics.linear_rate() * phi[0] ** (params.m - 1.0) / ((params.m - 1.0) * params.c ** 2)

    knots = np.concatenate(([0.0], phi, [K]))
    values = np.concatenate(([math.exp(log_g[0] + head)], np.exp(log_g), [0.0]))
    return TrialFunction.knot_spline(knots, values)


def delay_gap(trajectory: PhaseTrajectory, g: TrialFunction, kinetics: KineticsSpec) -> float:
    """
    Integral over (0, K) of g(phi) D m phi^(m-1) (b(phi) - b(phi_tilde)) / psi_tilde.
    :param trajectory: Trajectory carrying the delayed argument.
    :param g: Trial function.
    :param kinetics: Kinetics.
    :return: Gap, exactly 0 without delay.
    """
    params = trajectory.params
    if params.shift == 0.0:
        return 0.0
    mask = trajectory.psi_tilde > 0.0
    phi, psi, delayed = trajectory.phi[mask], trajectory.psi_tilde[mask], trajectory.phi_delayed[mask]
    integrand = g.value(phi) * params.D * params.m * phi ** (params.m - 1.0) * \
        (kinetics.b(phi) - kinetics.b(delayed)) / np.maximum(psi, PSI_FLOOR)
    return float(trapezoid(np.concatenate(([0.0], integrand, [0.0])),
                           np.concatenate(([0.0], phi, [trajectory.K]))))


def identity_terms(trajectory: PhaseTrajectory, kinetics: KineticsSpec) -> Dict[str, float]:
    """
    Terms of the variational identity at the optimal trial function of a sharp trajectory.
    :param trajectory: Sharp trajectory at the sharp speed.
    :param kinetics: Kinetics.
    :return: Dictionary with J(g), the delay gap and J(g) - gap next to the speed.
    """
    params = trajectory.params
    g = optimal_g(trajectory, kinetics)
    value = j_functional(g, kinetics, params.m, params.D)
    gap = delay_gap(trajectory, g, kinetics)
    return {"J": value, "delay_gap": gap, "difference": value - gap, "c_star": params.c,
            "residual": value - gap - params.c}


if __name__ == "__main__":
    LOG.critical("This module is not supposed to be executed.")
    sys.exit(1)
