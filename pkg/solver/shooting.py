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

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from scipy.integrate import solve_ivp
from scipy.interpolate import PchipInterpolator

from solver.errors import InsufficientEdgeSamples, InvalidParams, SeedTooLarge, StateBlowup, StepFailure
from solver.kinetics import KineticsSpec

# Define the logger
LOG = logging.getLogger(os.path.basename(__file__).split('.')[0])

# Floor applied to phi inside the right-hand side so the mobility never vanishes
PHI_FLOOR = 1e-300


@dataclass(frozen=True)
class WaveParams:
    """
    Parameters of the wave ODE: degeneracy exponent m, diffusivity D, delay r and candidate speed c.
    """
    m: float
    D: float
    r: float
    c: float

    def __post_init__(self) -> None:
        if not self.m > 1.0:
            raise InvalidParams(f"m must exceed 1, got {self.m}", "WaveParams", "shooting")
        if not self.D > 0.0:
            raise InvalidParams(f"D must be positive, got {self.D}", "WaveParams", "shooting")
        if not self.r >= 0.0:
            raise InvalidParams(f"r must be nonnegative, got {self.r}", "WaveParams", "shooting")
        if not self.c > 0.0:
            raise InvalidParams(f"c must be positive, got {self.c}", "WaveParams", "shooting")

    @property
    def shift(self) -> float:
        """
        Get the delay expressed in the wave coordinate.
        :return: c * r.
        """
        return self.c * self.r

    def with_speed(self, c: float) -> "WaveParams":
        """
        Copy the parameters with another candidate speed.
        :param c: New speed.
        :return: Parameters with speed c.
        """
        return replace(self, c=c)


@dataclass(frozen=True)
class Thresholds:
    """
    Classification thresholds of a shot.
    """
    # Level below which phi counts as zero
    eps_zero: float = 1e-9

    # Band around K, relative to K
    eps_k: float = 1e-6

    # Flux below which the profile counts as flat
    eps_flat: float = 1e-6


@dataclass(frozen=True)
class IntegratorSettings:
    """
    Settings of the segment integrator.
    """
    # Integration method passed to solve_ivp
    method: str = "DOP853"

    # Relative tolerance
    rtol: float = 1e-10

    # Absolute tolerance
    atol: float = 1e-13

    # Seed time relative to max(c*r, 1)
    seed_factor: float = 1e-6

    # Minimum number of samples stored per segment
    samples_per_segment: int = 64

    # Maximum spacing of stored samples (unit: wave coordinate)
    sample_spacing: float = 0.02

    # Log-spaced samples stored in the first segment to resolve the support edge
    edge_samples: int = 240

    # Ceiling of phi relative to K
    ceiling_factor: float = 10.0


class Outcome(Enum):
    """
    Trichotomy of a shot.
    """
    GREW_PAST_K = "GrewPastK"
    DECAYED_TO_ZERO = "DecayedToZero"
    CONVERGED_NEAR_K = "ConvergedNearK"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class ShootOutcome:
    """
    Classification of a shot: the tag and the state at the event (or at the end of the window).
    """
    tag: Outcome
    time: float
    phi: float
    psi: float

    def as_dict(self) -> Dict[str, object]:
        """
        Get a JSON friendly representation of the outcome.
        :return: Dictionary representation.
        """
        return {"tag": self.tag.value, "time": self.time, "phi": self.phi, "psi": self.psi}


@dataclass(frozen=True)
class Profile:
    """
    Sampled wave profile with the support edge at t = 0 and the flux psi = D (phi^m)'.
    """
    t: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    segment: np.ndarray
    segment_boundaries: np.ndarray
    t_star: float
    K: float
    shift: float

    def increasing_part(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Get the samples on the maximal increase interval [0, t_star).
        :return: Tuple of t, phi and psi arrays.
        """
        mask = self.t < self.t_star
        return self.t[mask], self.phi[mask], self.psi[mask]

    def phi_at(self, t: np.ndarray) -> np.ndarray:
        """
        Evaluate the profile with zero extension to t <= 0 by monotone cubic interpolation.
        :param t: Evaluation points.
        :return: phi(t).
        """
        t = np.asarray(t, dtype=float)
        values = PchipInterpolator(self.t, self.phi, extrapolate=False)(np.clip(t, 0.0, self.t[-1]))
        return np.where(t <= 0.0, 0.0, values)

    def rows(self) -> List[Tuple[float, float, float, int]]:
        """
        Get the CSV rows (t, phi, psi, segment_index).
        :return: List of rows.
        """
        return [(float(t), float(phi), float(psi), int(k))
                for t, phi, psi, k in zip(self.t, self.phi, self.psi, self.segment)]


@dataclass(frozen=True)
class Segment:
    """
    Samples of one method-of-steps segment and the classification event that ended it, if any.
    """
    t: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    event: Optional[Outcome] = None


@dataclass(frozen=True)
class RegularityFit:
    """
    Power-law fit of the profile at its support edge.
    """
    exponent: float
    label: str
    expected_exponent: float
    samples: int

    def as_dict(self) -> Dict[str, object]:
        """
        Get a JSON friendly representation of the fit.
        :return: Dictionary representation.
        """
        return {"exponent_fit": self.exponent, "label": self.label, "expected_exponent": self.expected_exponent,
                "samples": self.samples}


@dataclass
class DelayHistory:
    """
    Monotone cubic interpolant of the previous segment, read by the delayed source term.
    """
    t: np.ndarray
    phi: np.ndarray
    _interpolant: PchipInterpolator = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._interpolant = PchipInterpolator(self.t, self.phi, extrapolate=False)

    def __call__(self, t: float) -> float:
        if t <= 0.0:
            return 0.0
        return float(self._interpolant(min(max(t, self.t[0]), self.t[-1])))


def default_t_max(kinetics: KineticsSpec, params: WaveParams) -> float:
    """
    Heuristic length of the integration window: long enough for the slowest relevant growth and a number of delay
    segments. It comes without a certificate, so results computed with it carry a metadata flag.
    :param kinetics: Kinetics.
    :param params: Wave parameters.
    :return: Integration window length.
    """
    return max(10.0 * max(params.shift, 1.0), 60.0 / kinetics.linear_rate() + 20.0 * params.shift)


def seed_expansion(params: WaveParams, t_seed: float) -> Tuple[float, float]:
    """
    Leading-order state of the maximal solution at the support edge.
    :param params: Wave parameters.
    :param t_seed: Small positive seed time.
    :return: Tuple of phi(t_seed) and the consistent flux psi(t_seed) = c * phi(t_seed).
    """
    if not t_seed > 0.0:
        raise InvalidParams(f"t_seed must be positive, got {t_seed}", "seed_expansion", "shooting")
    if params.r > 0.0 and t_seed >= params.shift:
        raise SeedTooLarge(f"t_seed = {t_seed} is not below c*r = {params.shift}", "seed_expansion")

    m, D, c = params.m, params.D, params.c
    phi = ((m - 1.0) * c * t_seed / (D * m)) ** (1.0 / (m - 1.0))
    return phi, c * phi


def _sample_times(t_start: float, t_stop: float, first: bool, settings: IntegratorSettings) -> np.ndarray:
    """
    Sample times of a segment: uniform, plus log-spaced ones in the first segment.
    """
    count = max(settings.samples_per_segment, int(math.ceil((t_stop - t_start) / settings.sample_spacing)))
    times = np.linspace(t_start, t_stop, count + 1)
    if first and t_stop > t_start:
        times = np.union1d(times, np.geomspace(t_start, t_stop, settings.edge_samples))
    keep = np.concatenate(([True], np.diff(times) > 1e-9 * np.maximum(times[1:], 1e-300)))
    times = times[keep]
    times[-1] = t_stop
    return times


def integrate_segment(kinetics: KineticsSpec, params: WaveParams, entry_state: Tuple[float, float, float],
                      history: Optional[Callable[[float], float]], k: int, t_end: float,
                      thresholds: Thresholds = Thresholds(), settings: IntegratorSettings = IntegratorSettings(),
                      diagnostic: bool = False) -> Segment:
    """
    Integrate the flux formulation of the wave ODE over one segment.
    :param kinetics: Kinetics.
    :param params: Wave parameters.
    :param entry_state: Tuple (t, phi, psi) at the left end of the segment.
    :param history: Delayed profile phi(t - c*r) as a function of t, None for r = 0 (source read from the state).
    :param k: Segment index.
    :param t_end: Right end of the segment.
    :param thresholds: Classification thresholds.
    :param settings: Integrator settings.
    :param diagnostic: Keep integrating after the profile turns (only phi reaching zero or K stops the segment).
    :return: Sampled segment with the event that stopped it.
    """
    t_start, phi_start, psi_start = entry_state
    if not phi_start > 0.0:
        raise InvalidParams(f"segment {k} entered with phi = {phi_start}", "integrate_segment", "shooting")

    m, D, c, shift = params.m, params.D, params.c, params.shift
    K = kinetics.K
    upper = K * (1.0 + thresholds.eps_k)
    lower = K * (1.0 - thresholds.eps_k)

    def rhs(t: float, y: np.ndarray) -> List[float]:
        phi = max(y[0], PHI_FLOOR)
        dphi = y[1] / (D * m * phi ** (m - 1.0))
        source = float(kinetics.b(phi) if history is None else kinetics.b(history(t - shift)))
        return [dphi, c * dphi + float(kinetics.d(phi)) - source]

    def grew(_: float, y: np.ndarray) -> float:
        return y[0] - upper

    def turned(_: float, y: np.ndarray) -> float:
        return y[1] if y[0] < lower else 1.0

    def vanished(_: float, y: np.ndarray) -> float:
        return y[0] - thresholds.eps_zero

    grew.terminal, grew.direction = True, 1.0
    turned.terminal, turned.direction = True, -1.0
    vanished.terminal, vanished.direction = True, -1.0
    events = [grew, vanished] if diagnostic else [grew, turned]

    solution = solve_ivp(rhs, (t_start, t_end), [phi_start, psi_start], method=settings.method, rtol=settings.rtol,
                         atol=settings.atol, events=events, dense_output=True)
    if solution.status == -1:
        raise StepFailure(f"segment {k} failed at t = {solution.t[-1]:.6g}: {solution.message}", "integrate_segment")

    event = None
    if solution.status == 1:
        fired = [index for index, times in enumerate(solution.t_events) if len(times)]
        event = Outcome.GREW_PAST_K if fired[0] == 0 else Outcome.DECAYED_TO_ZERO

    times = _sample_times(t_start, solution.t[-1], k == 0, settings)
    phi, psi = solution.sol(times)
    if not np.all(np.isfinite(phi)) or np.max(phi) > settings.ceiling_factor * K:
        raise StateBlowup(f"phi left [0, {settings.ceiling_factor:g} K] in segment {k}", "integrate_segment")
    return Segment(times, phi, psi, event)


def shoot(kinetics: KineticsSpec, params: WaveParams, t_max: Optional[float] = None,
          thresholds: Thresholds = Thresholds(), settings: IntegratorSettings = IntegratorSettings(),
          diagnostic: bool = False) -> Tuple[Profile, ShootOutcome]:
    """
    Solve the wave ODE from the support edge by the method of steps and classify the outcome.
    :param kinetics: Kinetics.
    :param params: Wave parameters.
    :param t_max: End of the integration window (heuristic default if None).
    :param thresholds: Classification thresholds.
    :param settings: Integrator settings.
    :param diagnostic: Continue past the first turn until phi vanishes (soundness checks of the early exit).
    :return: Tuple of the sampled profile and its classification.
    """
    shift = params.shift
    if t_max is None:
        t_max = default_t_max(kinetics, params)
    if t_max < 10.0 * max(shift, 1.0):
        raise InvalidParams(f"t_max = {t_max} is shorter than 10 * max(c*r, 1)", "shoot", "shooting")

    t_seed = settings.seed_factor * max(shift, 1.0)
    phi_seed, psi_seed = seed_expansion(params, t_seed)

    times, phis, psis, indices = [np.zeros(1)], [np.zeros(1)], [np.zeros(1)], [np.zeros(1, dtype=int)]
    boundaries = []
    state = (t_seed, phi_seed, psi_seed)
    previous = None
    k = 0
    while True:
        if shift > 0.0:
            t_end = min((k + 1) * shift, t_max)
            history = (lambda _: 0.0) if previous is None else DelayHistory(*previous)
        else:
            t_end = t_max
            history = None

        segment = integrate_segment(kinetics, params, state, history, k, t_end, thresholds, settings, diagnostic)
        start = 1 if k > 0 else 0
        times.append(segment.t[start:])
        phis.append(segment.phi[start:])
        psis.append(segment.psi[start:])
        indices.append(np.full(len(segment.t) - start, k, dtype=int))

        if segment.event is not None or segment.t[-1] >= t_max:
            break
        boundaries.append(t_end)
        previous = (np.concatenate(([0.0], segment.t)), np.concatenate(([0.0], segment.phi))) if k == 0 \
            else (segment.t, segment.phi)
        state = (segment.t[-1], segment.phi[-1], segment.psi[-1])
        k += 1

    t, phi, psi = np.concatenate(times), np.concatenate(phis), np.concatenate(psis)
    outcome = _classify(kinetics.K, segment, t[-1], phi[-1], psi[-1], thresholds)

    t_star = math.inf
    if outcome.tag == Outcome.DECAYED_TO_ZERO and not diagnostic:
        t_star = outcome.time
    else:
        stop = np.nonzero((psi[1:] <= 0.0) | (phi[1:] >= kinetics.K))[0]
        if len(stop):
            t_star = float(t[stop[0] + 1])

    profile = Profile(t, phi, psi, np.concatenate(indices), np.asarray(boundaries), t_star, kinetics.K, shift)
    LOG.debug("Shot c = %.12g (m = %g, D = %g, r = %g): %s at t = %.6g after %d segment(s).", params.c, params.m,
              params.D, params.r, outcome.tag.value, outcome.time, k + 1)
    return profile, outcome


def _classify(K: float, segment: Segment, t: float, phi: float, psi: float, thresholds: Thresholds) -> ShootOutcome:
    """
    Map the last segment to the trichotomy.
    """
    if segment.event is not None:
        return ShootOutcome(segment.event, float(t), float(phi), float(psi))
    if abs(phi - K) < thresholds.eps_k * K and 0.0 < psi < thresholds.eps_flat:
        return ShootOutcome(Outcome.CONVERGED_NEAR_K, float(t), float(phi), float(psi))
    return ShootOutcome(Outcome.UNDETERMINED, float(t), float(phi), float(psi))


def classify_regularity(profile: Profile, m: float, margin: float = 0.02) -> RegularityFit:
    """
    Fit phi(t) ~ A t^beta at the support edge and label the profile C1 or NonC1.
    :param profile: Profile at (or near) the critical speed.
    :param m: Degeneracy exponent.
    :param margin: Exponent margin above 1 required for the C1 label.
    :return: Fitted exponent and label.
    """
    scale = min(profile.shift if profile.shift > 0.0 else 1.0, profile.t_star)
    mask = (profile.t >= 1e-3 * scale) & (profile.t <= 1e-2 * scale) & (profile.phi > 0.0)
    if np.count_nonzero(mask) < 8:
        raise InsufficientEdgeSamples(f"only {np.count_nonzero(mask)} samples in [{1e-3 * scale:.3g}, "
                                      f"{1e-2 * scale:.3g}]", "classify_regularity")

    exponent, _ = np.polyfit(np.log(profile.t[mask]), np.log(profile.phi[mask]), 1)
    label = "C1" if exponent > 1.0 + margin else "NonC1"
    return RegularityFit(float(exponent), label, 1.0 / (m - 1.0), int(np.count_nonzero(mask)))


def residual(profile: Profile, kinetics: KineticsSpec, params: WaveParams) -> Tuple[np.ndarray, np.ndarray]:
    """
    Discrete residual c phi' - psi' + d(phi) - b(phi(t - c r)) of the wave ODE on the increase interval.
    :param profile: Sampled profile.
    :param kinetics: Kinetics.
    :param params: Wave parameters.
    :return: Tuple of the residual at interior samples and the matching psi' values.
    """
    t, phi, psi = profile.increasing_part()
    dphi = np.gradient(phi, t)
    dpsi = np.gradient(psi, t)
    delayed = phi if params.r == 0.0 else profile.phi_at(t - params.shift)
    values = params.c * dphi - dpsi + kinetics.d(phi) - kinetics.b(delayed)
    return values[1:-1], dpsi[1:-1]


def profile_ordering(lower: Profile, upper: Profile, ceiling: Optional[float] = None) -> float:
    """
    Smallest difference phi_upper - phi_lower over the samples of the lower profile inside the joint increase
    interval. Positive means the profiles are strictly ordered.
    :param lower: Profile at the smaller speed.
    :param upper: Profile at the larger speed.
    :param ceiling: Only samples with phi_lower below this level are compared (all if None).
    :return: Minimum pointwise difference.
    """
    end = min(lower.t_star, upper.t_star, lower.t[-1], upper.t[-1])
    mask = (lower.t > 0.0) & (lower.t < end)
    if ceiling is not None:
        mask &= lower.phi < ceiling
    if not np.any(mask):
        return math.inf
    return float(np.min(upper.phi_at(lower.t[mask]) - lower.phi[mask]))


def profile_distance(first: Profile, second: Profile, window: Tuple[float, float]) -> float:
    """
    Sup-norm distance of two profiles on a common window.
    :param first: First profile.
    :param second: Second profile.
    :param window: Window (t_lo, t_hi), clipped to the range of both profiles.
    :return: Maximum absolute difference.
    """
    t_hi = min(window[1], first.t[-1], second.t[-1])
    grid = np.union1d(first.t, second.t)
    grid = grid[(grid >= window[0]) & (grid <= t_hi)]
    return float(np.max(np.abs(first.phi_at(grid) - second.phi_at(grid))))


if __name__ == "__main__":
    LOG.critical("This module is not supposed to be executed.")
    sys.exit(1)
