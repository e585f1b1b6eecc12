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
from typing import Dict, Mapping, Union

import numpy as np

from numpy.polynomial import Polynomial
from scipy.optimize import bisect, brentq

from solver.errors import InvalidParams, NoPositiveEquilibrium, NoRoot

# Define the logger
LOG = logging.getLogger(os.path.basename(__file__).split('.')[0])

# Scalar or array argument of the kinetics evaluators
ArrayLike = Union[float, np.ndarray]


class Family(Enum):
    """
    Enumeration of the shipped birth/death kinetics families.
    """
    FISHER = "fisher"
    NICHOLSON_LINEAR_DEATH = "nicholson_linear_death"
    NICHOLSON_QUADRATIC_DEATH = "nicholson_quadratic_death"
    MACKEY_GLASS = "mackey_glass"
    CUSTOM_POLYNOMIAL = "custom_polynomial"


# Parameters each family requires, with defaults where the family has a canonical value
FAMILY_PARAMETERS = {
    Family.FISHER: {"p": 1.0, "capacity": 1.0},
    Family.NICHOLSON_LINEAR_DEATH: {"p": None, "a": None, "q": None, "delta": None},
    Family.NICHOLSON_QUADRATIC_DEATH: {"p": None, "a": None, "q": None, "delta": None},
    Family.MACKEY_GLASS: {"p": None, "a": None, "q": None, "delta": None},
    Family.CUSTOM_POLYNOMIAL: {"b_coefficients": None, "d_coefficients": None},
}

# Smallest trial point of the equilibrium search
EQUILIBRIUM_SEARCH_START = 2.0 ** -30

# Maximum number of doublings of the equilibrium search
EQUILIBRIUM_SEARCH_ITERATIONS = 100

# Root tolerance used for the hypothesis b(K) = d(K)
ROOT_TOLERANCE = 1e-10

# Tolerance below zero accepted for the sign conditions of the hypotheses
SIGN_TOLERANCE = 1e-12


@dataclass(frozen=True)
class KineticsSpec:
    """
    Monostable birth/death kinetics with the positive equilibrium K. Evaluators are methods so that specs can be
    shipped to worker processes.
    """
    family: Family
    params: Mapping[str, object]
    K: float = field(default=float("nan"))

    def __b_poly(self) -> Polynomial:
        return Polynomial(self.params["b_coefficients"])

    def __d_poly(self) -> Polynomial:
        return Polynomial(self.params["d_coefficients"])

    def b(self, u: ArrayLike) -> ArrayLike:
        """
        Evaluate the birth function.
        :param u: Density.
        :return: b(u).
        """
        u = np.asarray(u, dtype=float)
        prm = self.params
        if self.family == Family.FISHER:
            return prm["p"] * u
        if self.family in (Family.NICHOLSON_LINEAR_DEATH, Family.NICHOLSON_QUADRATIC_DEATH):
            return prm["p"] * u * np.exp(-prm["a"] * np.abs(u) ** prm["q"])
        if self.family == Family.MACKEY_GLASS:
            return prm["p"] * u / (1.0 + prm["a"] * np.abs(u) ** prm["q"])
        return self.__b_poly()(u)

    def d(self, u: ArrayLike) -> ArrayLike:
        """
        Evaluate the death function.
        :param u: Density.
        :return: d(u).
        """
        u = np.asarray(u, dtype=float)
        prm = self.params
        if self.family == Family.FISHER:
            return prm["p"] * u * u / prm["capacity"]
        if self.family in (Family.NICHOLSON_LINEAR_DEATH, Family.MACKEY_GLASS):
            return prm["delta"] * u
        if self.family == Family.NICHOLSON_QUADRATIC_DEATH:
            return prm["delta"] * u * u
        return self.__d_poly()(u)

    def db(self, u: ArrayLike) -> ArrayLike:
        """
        Evaluate the derivative of the birth function.
        :param u: Density.
        :return: b'(u).
        """
        u = np.asarray(u, dtype=float)
        prm = self.params
        if self.family == Family.FISHER:
            return prm["p"] * np.ones_like(u)
        if self.family in (Family.NICHOLSON_LINEAR_DEATH, Family.NICHOLSON_QUADRATIC_DEATH):
            power = prm["a"] * np.abs(u) ** prm["q"]
            return prm["p"] * np.exp(-power) * (1.0 - prm["q"] * power)
        if self.family == Family.MACKEY_GLASS:
            power = prm["a"] * np.abs(u) ** prm["q"]
            return prm["p"] * (1.0 + (1.0 - prm["q"]) * power) / (1.0 + power) ** 2
        return self.__b_poly().deriv()(u)

    def dd(self, u: ArrayLike) -> ArrayLike:
        """
        Evaluate the derivative of the death function.
        :param u: Density.
        :return: d'(u).
        """
        u = np.asarray(u, dtype=float)
        prm = self.params
        if self.family == Family.FISHER:
            return 2.0 * prm["p"] * u / prm["capacity"]
        if self.family in (Family.NICHOLSON_LINEAR_DEATH, Family.MACKEY_GLASS):
            return prm["delta"] * np.ones_like(u)
        if self.family == Family.NICHOLSON_QUADRATIC_DEATH:
            return 2.0 * prm["delta"] * u
        return self.__d_poly().deriv()(u)

    def net(self, u: ArrayLike) -> ArrayLike:
        """
        Evaluate the net growth b(u) - d(u).
        :param u: Density.
        :return: b(u) - d(u).
        """
        return self.b(u) - self.d(u)

    def linear_rate(self) -> float:
        """
        Get the linear growth rate at the zero equilibrium.
        :return: b'(0) - d'(0).
        """
        return float(self.db(0.0) - self.dd(0.0))

    def as_dict(self) -> Dict[str, object]:
        """
        Get a JSON friendly representation of the kinetics.
        :return: Dictionary with family, parameters and equilibrium.
        """
        return {"family": self.family.value, "params": dict(self.params), "K": self.K}


@dataclass(frozen=True)
class HypothesisReport:
    """
    Result of sampling the monostability hypotheses on [0, K].
    """
    clauses: Dict[str, bool]
    n_samples: int
    worst_violation: float

    @property
    def passed(self) -> bool:
        """
        Check whether every clause holds at every sample.
        :return: True if the kinetics satisfy all hypotheses.
        """
        return all(self.clauses.values())

    def as_dict(self) -> Dict[str, object]:
        """
        Get a JSON friendly representation of the report.
        :return: Dictionary representation.
        """
        return {"passed": self.passed, "clauses": dict(self.clauses), "n_samples": self.n_samples,
                "worst_violation": self.worst_violation}


def _validated_params(family: Family, params: Mapping[str, object]) -> Dict[str, object]:
    """
    Complete the parameters with family defaults and check their domains.
    :param family: Kinetics family.
    :param params: User supplied parameters.
    :return: Completed parameter dictionary.
    """
    expected = FAMILY_PARAMETERS[family]
    unknown = set(params) - set(expected)
    if unknown:
        raise InvalidParams(f"unknown parameters for {family.value}: {', '.join(sorted(unknown))}", "make_kinetics")

    resolved = {}
    for name, default in expected.items():
        value = params.get(name, default)
        if value is None:
            raise InvalidParams(f"parameter '{name}' is required for {family.value}", "make_kinetics")
        resolved[name] = value

    if family == Family.CUSTOM_POLYNOMIAL:
        for name in ("b_coefficients", "d_coefficients"):
            coefficients = [float(value) for value in resolved[name]]
            if not coefficients or coefficients[0] != 0.0:
                raise InvalidParams(f"'{name}' must start with a zero constant term", "make_kinetics")
            resolved[name] = tuple(coefficients)
        return resolved

    for name, value in resolved.items():
        value = float(value)
        if not math.isfinite(value) or value <= 0.0:
            raise InvalidParams(f"parameter '{name}' must be strictly positive, got {value}", "make_kinetics")
        resolved[name] = value
    return resolved


def _positive_equilibrium(spec: KineticsSpec) -> float:
    """
    Locate the first positive root of b - d by doubling a trial point until the sign changes.
    :param spec: Kinetics without equilibrium.
    :return: Positive equilibrium K.
    """
    def net(u: float) -> float:
        return float(spec.net(u))

    u_lo = EQUILIBRIUM_SEARCH_START
    if net(u_lo) <= 0.0:
        raise NoPositiveEquilibrium("b - d is not positive near zero", "make_kinetics")
    for _ in range(EQUILIBRIUM_SEARCH_ITERATIONS):
        u_hi = 2.0 * u_lo
        if net(u_hi) <= 0.0:
            return brentq(net, u_lo, u_hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
        u_lo = u_hi
    raise NoPositiveEquilibrium(f"no sign change of b - d below {u_lo:g}", "make_kinetics")


def make_kinetics(family: Union[Family, str], params: Mapping[str, object]) -> KineticsSpec:
    """
    Build a kinetics specification and solve for its positive equilibrium.
    :param family: Kinetics family (enum member or its name).
    :param params: Family specific parameters.
    :return: Kinetics specification with K set.
    """
    try:
        family = Family(family)
    except ValueError as error:
        raise InvalidParams(f"unknown kinetics family '{family}'", "make_kinetics") from error

    resolved = _validated_params(family, params)
    spec = KineticsSpec(family, resolved)
    K = _positive_equilibrium(spec)
    LOG.debug("Kinetics %s has positive equilibrium K = %.12g.", family.value, K)
    return KineticsSpec(family, resolved, K)


def verify_hypotheses(spec: KineticsSpec, n_samples: int = 10000) -> HypothesisReport:
    """
    Check the monostability hypotheses on a uniform grid of [0, K] plus its end points.
    :param spec: Kinetics to check.
    :param n_samples: Number of grid points (at least 16).
    :return: Report of the clauses, failures are reported rather than raised.
    """
    if n_samples < 16:
        raise InvalidParams(f"n_samples must be at least 16, got {n_samples}", "verify_hypotheses")

    K = spec.K
    grid = np.linspace(0.0, K, n_samples)
    interior = grid[1:-1]
    b0, d0 = float(spec.b(0.0)), float(spec.d(0.0))
    db0, dd0 = float(spec.db(0.0)), float(spec.dd(0.0))
    dbK, ddK = float(spec.db(K)), float(spec.dd(K))
    equilibrium_gap = abs(float(spec.net(K)))
    db_grid, dd_grid = spec.db(grid), spec.dd(grid)
    net_interior = spec.net(interior)

    clauses = {
        "zero_equilibrium": b0 == 0.0 and d0 == 0.0,
        "positive_equilibrium": equilibrium_gap <= ROOT_TOLERANCE,
        "linear_instability": db0 > dd0 >= -SIGN_TOLERANCE,
        "equilibrium_stability": ddK >= dbK - SIGN_TOLERANCE and dbK >= -SIGN_TOLERANCE,
        "monotone_death": bool(np.all(dd_grid >= -SIGN_TOLERANCE)),
        "monotone_birth": bool(np.all(db_grid >= -SIGN_TOLERANCE)),
        "monostable": bool(np.all(net_interior > 0.0)),
    }
    violations = [abs(b0), abs(d0), equilibrium_gap, max(dd0 - db0, 0.0), max(-dd0, 0.0), max(dbK - ddK, 0.0),
                  max(-dbK, 0.0), max(-float(np.min(dd_grid)), 0.0), max(-float(np.min(db_grid)), 0.0),
                  max(-float(np.min(net_interior)), 0.0)]
    report = HypothesisReport(clauses, n_samples, max(violations))
    if not report.passed:
        LOG.info("Kinetics %s fail: %s.", spec.family.value,
                 ", ".join(name for name, ok in clauses.items() if not ok))
    return report


def lambda_root(spec: KineticsSpec, c: float, r: float) -> float:
    """
    Solve the linearized decay-rate equation lambda*c + d'(0) = b'(0)*exp(-lambda*c*r) for its positive root.
    :param spec: Kinetics.
    :param c: Wave speed (positive).
    :param r: Time delay (nonnegative).
    :return: The unique positive root lambda.
    """
    if c <= 0.0 or r < 0.0:
        raise InvalidParams(f"need c > 0 and r >= 0, got c = {c}, r = {r}", "lambda_root")
    db0, dd0 = float(spec.db(0.0)), float(spec.dd(0.0))
    if db0 <= dd0:
        raise NoRoot(f"b'(0) = {db0} does not exceed d'(0) = {dd0}", "lambda_root")
    if r == 0.0:
        return (db0 - dd0) / c

    def residual(lam: float) -> float:
        return lam * c + dd0 - db0 * math.exp(-lam * c * r)

    upper = db0 / c
    if residual(upper) == 0.0:
        return upper
    return bisect(residual, 0.0, upper, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=2000)


if __name__ == "__main__":
    LOG.critical("This module is not supposed to be executed.")
    sys.exit(1)
