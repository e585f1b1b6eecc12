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

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from solver.errors import BracketFailure, InvalidParams, InvariantViolation, NonMonotoneClassification, \
    UndeterminedOutcome
from solver.kinetics import KineticsSpec
from solver.shooting import IntegratorSettings, Outcome, Profile, ShootOutcome, Thresholds, WaveParams, \
    default_t_max, profile_ordering, shoot

# Define the logger
LOG = logging.getLogger(os.path.basename(__file__).split('.')[0])

# Maximum number of halvings or doublings of the bracket search
BRACKET_STEPS = 60

# Allowed violation of the pointwise ordering of profiles (relative to K, at least ten times eps_k)
ORDERING_TOLERANCE = 1e-6

# Band below K excluded from the ordering check (relative to K, at least eps_k); the saddle at K amplifies
# integration errors of both profiles there
ORDERING_BAND = 1e-3


@dataclass(frozen=True)
class SpeedResult:
    """
    Sharp speed located by bisection, with the final bracket and the profiles at its ends.
    """
    c_star: float
    c_lo: float
    c_hi: float
    profile: Profile
    upper_profile: Optional[Profile]
    iterations: int
    m: float
    D: float
    r: float
    converged: bool
    t_max: float
    t_max_heuristic: bool

    @property
    def bracket(self) -> Tuple[float, float]:
        """
        Get the final bracket.
        :return: Tuple (c_lo, c_hi).
        """
        return self.c_lo, self.c_hi

    @property
    def closing_profile(self) -> Optional[Profile]:
        """
        Get the profile bounding the sharp trajectory from above.
        :return: Profile at c_hi, None for a converged speed.
        """
        return None if self.converged else self.upper_profile

    def as_dict(self) -> Dict[str, object]:
        """
        Get a JSON friendly representation of the result (profiles excluded).
        :return: Dictionary representation.
        """
        return {"c_star": self.c_star, "bracket": [self.c_lo, self.c_hi], "iterations": self.iterations,
                "m": self.m, "D": self.D, "r": self.r, "converged_near_K": self.converged, "t_max": self.t_max,
                "t_max_heuristic": self.t_max_heuristic, "t_star": self.profile.t_star}


@dataclass(frozen=True)
class SweepRow:
    """
    One row of a delay sweep.
    """
    r: float
    c_star: float
    c_lo: float
    c_hi: float
    iterations: int

    def as_row(self) -> Tuple[float, float, float, float, int]:
        """
        Get the CSV row (r, c_star, c_lo, c_hi, iterations).
        :return: Row tuple.
        """
        return self.r, self.c_star, self.c_lo, self.c_hi, self.iterations


@dataclass(frozen=True)
class Shot:
    """
    Classified shot at one speed.
    """
    c: float
    profile: Profile
    outcome: ShootOutcome
    t_max: float


def classify_speed(kinetics: KineticsSpec, params: WaveParams, t_max: Optional[float] = None,
                   thresholds: Thresholds = Thresholds(), settings: IntegratorSettings = IntegratorSettings()) -> Shot:
    """
    Shoot at one speed, retrying once with a doubled window when the outcome is undetermined.
    :param kinetics: Kinetics.
    :param params: Wave parameters (the speed is params.c).
    :param t_max: Integration window (heuristic default if None).
    :param thresholds: Classification thresholds.
    :param settings: Integrator settings.
    :return: Classified shot.
    """
    window = default_t_max(kinetics, params) if t_max is None else t_max
    profile, outcome = shoot(kinetics, params, window, thresholds, settings)
    if outcome.tag == Outcome.UNDETERMINED:
        LOG.info("Shot at c = %.12g undetermined at t_max = %.6g, retrying with %.6g.", params.c, window, 2 * window)
        window *= 2.0
        profile, outcome = shoot(kinetics, params, window, thresholds, settings)
        if outcome.tag == Outcome.UNDETERMINED:
            raise UndeterminedOutcome(f"c = {params.c:.12g} still undetermined at t_max = {window:.6g} "
                                      f"(phi = {outcome.phi:.6g}, psi = {outcome.psi:.6g})", "classify_speed")
    return Shot(params.c, profile, outcome, window)


def _search(kinetics: KineticsSpec, params: WaveParams, t_max: Optional[float], thresholds: Thresholds,
            settings: IntegratorSettings) -> Tuple[Shot, Shot, Optional[Shot]]:
    """
    Geometric search from the linear spreading speed for a decaying and a growing shot. A converging shot met on
    the way is returned as third element if it lies inside the bracket; the search goes on past it.
    """
    anchor = 2.0 * math.sqrt(params.D * kinetics.linear_rate())
    shot = classify_speed(kinetics, params.with_speed(anchor), t_max, thresholds, settings)
    found: Dict[Outcome, Shot] = {shot.outcome.tag: shot}
    up = down = shot
    for _ in range(BRACKET_STEPS):
        lo, hi = found.get(Outcome.DECAYED_TO_ZERO), found.get(Outcome.GREW_PAST_K)
        if lo is not None and hi is not None:
            converged = found.get(Outcome.CONVERGED_NEAR_K)
            if converged is not None and not lo.c < converged.c <= hi.c:
                converged = None
            return lo, hi, converged
        if hi is None:
            up = shot = classify_speed(kinetics, params.with_speed(up.c * 2.0), t_max, thresholds, settings)
        else:
            down = shot = classify_speed(kinetics, params.with_speed(down.c * 0.5), t_max, thresholds, settings)
        # The decaying shot closest from below and the growing shot closest from above win
        if shot.outcome.tag == Outcome.DECAYED_TO_ZERO and lo is not None:
            found[shot.outcome.tag] = max(lo, shot, key=lambda item: item.c)
        elif shot.outcome.tag == Outcome.GREW_PAST_K and hi is not None:
            found[shot.outcome.tag] = min(hi, shot, key=lambda item: item.c)
        else:
            found[shot.outcome.tag] = shot
    missing = "decaying" if Outcome.DECAYED_TO_ZERO not in found else "growing"
    raise BracketFailure(f"no {missing} shot within {BRACKET_STEPS} steps from c = {anchor:.6g}", "bracket")


def bracket(kinetics: KineticsSpec, m: float, D: float, r: float, t_max: Optional[float] = None,
            thresholds: Thresholds = Thresholds(),
            settings: IntegratorSettings = IntegratorSettings()) -> Tuple[float, float]:
    """
    Find speeds c_lo < c_hi whose shots decay and grow, starting from 2 sqrt(D (b'(0) - d'(0))).
    :param kinetics: Kinetics.
    :param m: Degeneracy exponent.
    :param D: Diffusivity.
    :param r: Delay.
    :param t_max: Integration window (heuristic default if None).
    :param thresholds: Classification thresholds.
    :param settings: Integrator settings.
    :return: Tuple (c_lo, c_hi) of a decaying and a growing shot.
    """
    lo, hi, _ = _search(kinetics, WaveParams(m, D, r, 1.0), t_max, thresholds, settings)
    LOG.info("Bracket for m = %g, D = %g, r = %g: [%.12g, %.12g].", m, D, r, lo.c, hi.c)
    return lo.c, hi.c


def critical_speed(kinetics: KineticsSpec, m: float, D: float, r: float, tol: float = 1e-4,
                   t_max: Optional[float] = None, thresholds: Thresholds = Thresholds(),
                   settings: IntegratorSettings = IntegratorSettings()) -> SpeedResult:
    """
    Locate the sharp speed by bisection on the shot classification.
    :param kinetics: Kinetics.
    :param m: Degeneracy exponent.
    :param D: Diffusivity.
    :param r: Delay.
    :param tol: Width of the final bracket.
    :param t_max: Integration window (heuristic default if None).
    :param thresholds: Classification thresholds.
    :param settings: Integrator settings.
    :return: Speed result.
    """
    if not tol > 0.0:
        raise InvalidParams(f"tol must be positive, got {tol}", "critical_speed", "speed_finder")

    params = WaveParams(m, D, r, 1.0)
    lo, hi, converged = _search(kinetics, params, t_max, thresholds, settings)
    heuristic = t_max is None
    if converged is not None:
        LOG.info("Converged shot met during the bracket search at c = %.12g in [%.12g, %.12g].", converged.c, lo.c,
                 hi.c)
        return SpeedResult(converged.c, lo.c, hi.c, converged.profile, hi.profile, 0, m, D, r, True,
                           converged.t_max, heuristic)

    allowance = max(ORDERING_TOLERANCE, 10.0 * thresholds.eps_k) * kinetics.K
    ceiling = (1.0 - max(ORDERING_BAND, thresholds.eps_k)) * kinetics.K
    iterations = 0
    while hi.c - lo.c > tol:
        shot = classify_speed(kinetics, params.with_speed(0.5 * (lo.c + hi.c)), t_max, thresholds, settings)
        iterations += 1
        if shot.outcome.tag == Outcome.CONVERGED_NEAR_K:
            LOG.info("Converged shot at c = %.12g after %d bisection step(s).", shot.c, iterations)
            return SpeedResult(shot.c, lo.c, hi.c, shot.profile, hi.profile, iterations, m, D, r, True,
                               shot.t_max, heuristic)
        if shot.outcome.tag == Outcome.DECAYED_TO_ZERO:
            gap = profile_ordering(lo.profile, shot.profile, ceiling)
            lo = shot
        else:
            gap = profile_ordering(shot.profile, hi.profile, ceiling)
            hi = shot
        if gap < -allowance:
            raise NonMonotoneClassification(f"profiles at c = {lo.c:.12g} and c = {hi.c:.12g} cross by {-gap:.3g}; "
                                            f"the integrator tolerance is too loose", "critical_speed")
        LOG.debug("Bisection step %d: [%.12g, %.12g].", iterations, lo.c, hi.c)

    _, phi, _ = lo.profile.increasing_part()
    if np.any(np.diff(phi) < 0.0):
        raise NonMonotoneClassification(f"profile at c = {lo.c:.12g} is not increasing", "critical_speed")
    c_star = 0.5 * (lo.c + hi.c)
    LOG.info("Sharp speed for m = %g, D = %g, r = %g: %.10g (bracket width %.3g, %d step(s)).", m, D, r, c_star,
             hi.c - lo.c, iterations)
    return SpeedResult(c_star, lo.c, hi.c, lo.profile, hi.profile, iterations, m, D, r, False, max(lo.t_max, hi.t_max),
                       heuristic)


def _sweep_task(task: Tuple[KineticsSpec, float, float, float, float, Optional[float], Thresholds,
                            IntegratorSettings]) -> SpeedResult:
    """
    Worker of delay_sweep.
    """
    return critical_speed(*task)


def delay_sweep(kinetics: KineticsSpec, m: float, D: float, r_list: Sequence[float], tol: float = 1e-4,
                t_max: Optional[float] = None, thresholds: Thresholds = Thresholds(),
                settings: IntegratorSettings = IntegratorSettings(),
                workers: int = 1) -> Tuple[List[SweepRow], List[SpeedResult]]:
    """
    Compute the sharp speed for every delay of a list and check that delay slows the wave.
    :param kinetics: Kinetics.
    :param m: Degeneracy exponent.
    :param D: Diffusivity.
    :param r_list: Nonnegative delays, 0 included.
    :param tol: Width of the final brackets.
    :param t_max: Integration window (heuristic default if None).
    :param thresholds: Classification thresholds.
    :param settings: Integrator settings.
    :param workers: Number of worker processes (1 runs in-process).
    :return: Tuple of the table rows in the order of r_list and the full results.
    """
    if any(not r >= 0.0 for r in r_list):
        raise InvalidParams(f"delays must be nonnegative, got {list(r_list)}", "delay_sweep", "speed_finder")
    if 0.0 not in r_list:
        raise InvalidParams("the delay list must contain 0", "delay_sweep", "speed_finder")

    tasks = [(kinetics, m, D, float(r), tol, t_max, thresholds, settings) for r in r_list]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_sweep_task, tasks))
    else:
        results = [_sweep_task(task) for task in tasks]

    rows = [SweepRow(result.r, result.c_star, result.c_lo, result.c_hi, result.iterations) for result in results]
    baseline = next(row.c_star for row in rows if row.r == 0.0)
    for row in rows:
        if row.r > 0.0 and row.c_star >= baseline:
            raise InvariantViolation(f"c*(r = {row.r:g}) = {row.c_star:.10g} is not below c*(0) = {baseline:.10g}")
    if not decreasing_in_r(rows):
        LOG.warning("The sharp speed is not monotonically decreasing in r over this sweep.")
    return rows, results


def decreasing_in_r(rows: Sequence[SweepRow]) -> bool:
    """
    Check whether the sharp speed decreases with the delay over a sweep.
    :param rows: Sweep rows.
    :return: True if c_star is nonincreasing in r.
    """
    ordered = sorted(rows, key=lambda row: row.r)
    return all(later.c_star <= earlier.c_star for earlier, later in zip(ordered, ordered[1:]))


def classification_sequence(kinetics: KineticsSpec, m: float, D: float, r: float, speeds: Sequence[float],
                            t_max: Optional[float] = None, thresholds: Thresholds = Thresholds(),
                            settings: IntegratorSettings = IntegratorSettings()) -> List[Outcome]:
    """
    Classify the shots on a sorted grid of speeds.
    :param kinetics: Kinetics.
    :param m: Degeneracy exponent.
    :param D: Diffusivity.
    :param r: Delay.
    :param speeds: Increasing speeds.
    :param t_max: Integration window (heuristic default if None).
    :param thresholds: Classification thresholds.
    :param settings: Integrator settings.
    :return: Outcome per speed.
    """
    if any(later <= earlier for earlier, later in zip(speeds, speeds[1:])):
        raise InvalidParams("speeds must be strictly increasing", "classification_sequence", "speed_finder")
    params = WaveParams(m, D, r, speeds[0])
    return [shoot(kinetics, params.with_speed(c), t_max, thresholds, settings)[1].tag for c in speeds]


def is_trichotomy_ordered(tags: Sequence[Outcome]) -> bool:
    """
    Check that a classification sequence reads decays, at most one convergence, then growths.
    :param tags: Outcomes on increasing speeds.
    :return: True if there is no interleaving.
    """
    rank = {Outcome.DECAYED_TO_ZERO: 0, Outcome.CONVERGED_NEAR_K: 1, Outcome.GREW_PAST_K: 2}
    if any(tag not in rank for tag in tags):
        return False
    ranks = [rank[tag] for tag in tags]
    return ranks == sorted(ranks) and ranks.count(1) <= 1


if __name__ == "__main__":
    LOG.critical("This module is not supposed to be executed.")
    sys.exit(1)
