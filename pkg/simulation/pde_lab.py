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

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from solver.errors import ConfigUnstable, FrontStalled, InvalidParams, UnstableBlowup
from solver.kinetics import KineticsSpec

# Define the logger
LOG = logging.getLogger(os.path.basename(__file__).split('.')[0])

# Level above which a cell belongs to the support (relative to K)
SUPPORT_FLOOR = 1e-12

# Level above which the solution counts as blown up (relative to K)
BLOWUP_FACTOR = 2.0


class InitialShape(Enum):
    """
    Families of initial data.
    """
    BUMP = "bump"
    STEP = "step"
    CONSTANT = "constant"


@dataclass(frozen=True)
class InitialCondition:
    """
    Initial datum; unless a separate history is configured it is also held constant on [-r, 0) as the history.
    """
    shape: InitialShape = InitialShape.BUMP
    # Support width at the left boundary (unit: length)
    width: float = 2.0
    # Height, K if NaN
    height: float = math.nan

    def sample(self, x: np.ndarray, K: float) -> np.ndarray:
        """
        Sample the datum on a grid.
        :param x: Grid.
        :param K: Positive equilibrium.
        :return: Initial field.
        """
        height = K if math.isnan(self.height) else self.height
        if self.shape == InitialShape.CONSTANT:
            return np.full_like(x, height)
        if self.shape == InitialShape.STEP:
            return np.where(x <= self.width, height, 0.0)
        return height * np.clip(1.0 - (x / self.width) ** 2, 0.0, None)

    def as_dict(self) -> Dict[str, object]:
        """
        Get a JSON friendly representation.
        :return: Dictionary representation.
        """
        height = None if math.isnan(self.height) else self.height
        return {"shape": self.shape.value, "width": self.width, "height": height}


@dataclass(frozen=True)
class SimConfig:
    """
    Configuration of a simulation of the delayed degenerate equation on [0, length] with no-flux boundaries.
    """
    kinetics: KineticsSpec
    m: float
    D: float
    r: float
    length: float = 60.0
    dx: float = 0.1
    # Time step, largest stable one if None
    dt: Optional[float] = None
    horizon: float = 40.0
    initial: InitialCondition = InitialCondition()
    # Datum held constant on [-r, 0), the initial datum if None
    history: Optional[InitialCondition] = None
    # Front level, 1e-3 K for m > 1 and 1e-6 K for m = 1 if None
    front_threshold: Optional[float] = None
    safety: float = 0.4
    # Time between two records
    snapshot_every: float = 0.5
    keep_fields: bool = False

    def __post_init__(self) -> None:
        if not self.m >= 1.0 or not self.D > 0.0 or not self.r >= 0.0:
            raise InvalidParams(f"need m >= 1, D > 0, r >= 0, got m = {self.m}, D = {self.D}, r = {self.r}",
                                "SimConfig", "pde_lab")
        if not 0.0 < self.dx < self.length or not self.horizon > 0.0 or not self.snapshot_every > 0.0:
            raise InvalidParams("need 0 < dx < length, horizon > 0 and snapshot_every > 0", "SimConfig", "pde_lab")
        if not 0.0 < self.safety <= 0.5:
            raise InvalidParams(f"safety must lie in (0, 0.5], got {self.safety}", "SimConfig", "pde_lab")
        for datum in (self.initial, self.history):
            if datum is not None and not math.isnan(datum.height) and not 0.0 <= datum.height <= self.kinetics.K:
                raise InvalidParams(f"initial height {datum.height} outside [0, K]", "SimConfig", "pde_lab")
        if self.dt is not None and self.dt > self.stable_dt:
            raise ConfigUnstable(f"dt = {self.dt:.3g} exceeds the stability bound {self.stable_dt:.3g}", "SimConfig")

    @property
    def stable_dt(self) -> float:
        """
        Get the largest stable time step safety * dx^2 / (2 D m K^(m-1)).
        :return: Time step bound.
        """
        return self.safety * self.dx ** 2 / (2.0 * self.D * self.m * self.kinetics.K ** (self.m - 1.0))

    @property
    def history_depth(self) -> int:
        """
        Get the number of past fields kept for the delayed source.
        :return: ceil(r / dt), 0 without delay.
        """
        step = self.stable_dt if self.dt is None else self.dt
        return int(math.ceil(self.r / step - 1e-9)) if self.r > 0.0 else 0

    @property
    def time_step(self) -> float:
        """
        Get the time step, shrunk so that the delay is an exact multiple of it.
        :return: Time step.
        """
        step = self.stable_dt if self.dt is None else self.dt
        return self.r / self.history_depth if self.r > 0.0 else step

    @property
    def threshold(self) -> float:
        """
        Get the front level.
        :return: Front threshold.
        """
        if self.front_threshold is not None:
            return self.front_threshold
        return (1e-3 if self.m > 1.0 else 1e-6) * self.kinetics.K

    def as_dict(self) -> Dict[str, object]:
        """
        Get a JSON friendly representation with the derived step and threshold.
        :return: Dictionary representation.
        """
        return {"m": self.m, "D": self.D, "r": self.r, "length": self.length, "dx": self.dx, "dt": self.time_step,
                "horizon": self.horizon, "initial": self.initial.as_dict(),
                "history": None if self.history is None else self.history.as_dict(),
                "front_threshold": self.threshold, "safety": self.safety, "snapshot_every": self.snapshot_every,
                "history_depth": self.history_depth}


@dataclass
class SimRecord:
    """
    Recorded fronts and diagnostics of a simulation.
    """
    times: np.ndarray
    fronts: np.ndarray
    dx: float
    support: np.ndarray = field(default_factory=lambda: np.zeros(0))
    max_u: np.ndarray = field(default_factory=lambda: np.zeros(0))
    min_u: np.ndarray = field(default_factory=lambda: np.zeros(0))
    mass: np.ndarray = field(default_factory=lambda: np.zeros(0))
    x: Optional[np.ndarray] = None
    fields: Optional[np.ndarray] = None

    def rows(self) -> List[Tuple[float, float]]:
        """
        Get the front-track CSV rows (t, x_f).
        :return: List of rows.
        """
        return [(float(t), float(x)) for t, x in zip(self.times, self.fronts)]

    def as_dict(self) -> Dict[str, object]:
        """
        Get a JSON friendly summary of the record.
        :return: Dictionary representation.
        """
        return {"snapshots": int(len(self.times)), "final_time": float(self.times[-1]),
                "final_front": float(self.fronts[-1]), "final_support_edge": float(self.support[-1]),
                "max_u": float(np.max(self.max_u)), "min_u": float(np.min(self.min_u))}


def _front(x: np.ndarray, u: np.ndarray, level: float) -> float:
    """
    Rightmost crossing of a level, interpolated between cells.
    """
    above = np.nonzero(u > level)[0]
    if not len(above):
        return math.nan
    i = above[-1]
    if i + 1 == len(u):
        return float(x[i])
    return float(x[i] + (x[i + 1] - x[i]) * (u[i] - level) / (u[i] - u[i + 1]))


def simulate(config: SimConfig) -> SimRecord:
    """
    Explicit finite-difference simulation of u_t = D (u^m)_xx - d(u) + b(u(t - r, x)).
    :param config: Simulation configuration.
    :return: Record of the fronts and diagnostics.
    """
    kinetics, m, D = config.kinetics, config.m, config.D
    K = kinetics.K
    dt = config.time_step
    count = int(round(config.length / config.dx)) + 1
    x = np.arange(count) * config.dx
    u = config.initial.sample(x, K)
    past = u if config.history is None else config.history.sample(x, K)
    history = deque((past.copy() for _ in range(config.history_depth)), maxlen=config.history_depth)

    steps = int(math.ceil(config.horizon / dt - 1e-9))
    every = max(1, int(round(config.snapshot_every / dt)))
    LOG.info("Simulating m = %g, D = %g, r = %g on %d cells with dt = %.4g for %d steps.", m, D, config.r, count, dt,
             steps)

    times, fronts, support, max_u, min_u, mass, fields = [], [], [], [], [], [], []
    divergence = np.zeros_like(u)
    for step in range(steps + 1):
        if step % every == 0 or step == steps:
            times.append(step * dt)
            fronts.append(_front(x, u, config.threshold))
            support.append(_front(x, u, SUPPORT_FLOOR * K))
            max_u.append(float(np.max(u)))
            min_u.append(float(np.min(u)))
            mass.append(float(np.sum(u) * config.dx))
            if config.keep_fields:
                fields.append(u.copy())
        if step == steps:
            break

        delayed = history[0] if history else u
        flux = np.diff(u ** m) * (D / config.dx)
        divergence[:] = 0.0
        divergence[:-1] += flux
        divergence[1:] -= flux
        updated = u + dt * (divergence / config.dx - kinetics.d(u) + kinetics.b(delayed))
        if history:
            history.append(u)
        u = updated
        peak = np.max(u)
        if not np.isfinite(peak) or peak > BLOWUP_FACTOR * K:
            raise UnstableBlowup(f"max u = {peak:.6g} at t = {(step + 1) * dt:.6g}", "simulate")

    return SimRecord(np.asarray(times), np.asarray(fronts), config.dx, np.asarray(support), np.asarray(max_u),
                     np.asarray(min_u), np.asarray(mass), x, np.asarray(fields) if config.keep_fields else None)


def front_speed(record: SimRecord, fit_window: float = 0.5) -> Tuple[float, float]:
    """
    Fit a line to the front positions over the last part of the record.
    :param record: Simulation record.
    :param fit_window: Fraction of the recorded time span used for the fit.
    :return: Tuple of the slope and the coefficient of determination.
    """
    if not 0.0 < fit_window <= 1.0:
        raise InvalidParams(f"fit_window must lie in (0, 1], got {fit_window}", "front_speed", "pde_lab")
    start = record.times[-1] - fit_window * (record.times[-1] - record.times[0])
    mask = (record.times >= start) & np.isfinite(record.fronts)
    times, fronts = record.times[mask], record.fronts[mask]
    if len(fronts) < 2 or np.ptp(fronts) < 10.0 * record.dx:
        raise FrontStalled(f"front moved less than 10 dx over the last {fit_window:.0%} of the record", "front_speed")

    slope, intercept = np.polyfit(times, fronts, 1)
    residual = fronts - (slope * times + intercept)
    spread = np.sum((fronts - np.mean(fronts)) ** 2)
    return float(slope), float(1.0 - np.sum(residual ** 2) / spread)


def ordered_pair_check(lower: SimRecord, upper: SimRecord) -> float:
    """
    Smallest pointwise difference of two simulations recorded with fields.
    :param lower: Record started from the smaller datum.
    :param upper: Record started from the larger datum.
    :return: Minimum of upper - lower over all recorded fields (nonnegative if the order is kept).
    """
    if lower.fields is None or upper.fields is None or lower.fields.shape != upper.fields.shape:
        raise InvalidParams("both records need fields of the same shape", "ordered_pair_check", "pde_lab")
    return float(np.min(upper.fields - lower.fields))


if __name__ == "__main__":
    LOG.critical("This module is not supposed to be executed.")
    sys.exit(1)
