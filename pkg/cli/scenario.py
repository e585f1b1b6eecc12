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

import copy
import logging
import math
import os
import sys

from pathlib import Path
from typing import Dict, List, Optional, Union

import tomli

from simulation.pde_lab import InitialCondition, InitialShape, SimConfig
from solver.errors import ConfigError, SolverError
from solver.kinetics import KineticsSpec, make_kinetics
from solver.shooting import IntegratorSettings, Thresholds, WaveParams

# Define the logger
LOG = logging.getLogger(os.path.basename(__file__).split('.')[0])


class Scenario:
    """
    Class representing a scenario file with all defaults materialized.
    """
    # Tasks and the sections they need besides 'kinetics'
    TASKS = {
        "check": [],
        "shoot": ["wave"],
        "find-speed": ["wave"],
        "phase": ["wave"],
        "variational": ["wave"],
        "simulate": ["wave"],
        "sweep": ["wave", "sweep"],
        "regularity": ["wave"],
    }

    # Default values per section, None marks an optional value without default
    DEFAULTS = {
        "wave": {"m": None, "D": None, "r": 0.0, "c": None},
        "solver": {"tol": 1e-4, "t_max": None, "eps_zero": 1e-9, "eps_k": 1e-6, "eps_flat": 1e-6, "rtol": 1e-10,
                   "atol": 1e-13, "method": "DOP853", "seed_factor": 1e-6, "samples_per_segment": 64,
                   "sample_spacing": 0.02},
        "phase": {"n_grid": 400, "phi_max": None, "seed": "sharp", "rel_gap": 1e-3},
        "variational": {"family": "power_family", "budget": 400, "seed": 0, "n_knots": 8},
        "simulation": {"length": 60.0, "dx": 0.1, "dt": None, "horizon": 40.0, "initial": "bump", "width": 2.0,
                       "height": None, "history": None, "history_height": None, "front_threshold": None,
                       "safety": 0.4, "snapshot_every": 0.5, "fit_window": 0.5, "keep_fields": False},
        "sweep": {"r": None, "m": None, "D": None},
    }

    # Sweep axes
    SWEEP_AXES = ("r", "m", "D")

    def __init__(self, data: Dict[str, object], task: str, path: Union[str, Path] = "") -> None:
        """
        Class constructor. Validates the data for the task.
        :param data: Parsed scenario document.
        :param task: Selected task.
        :param path: File the document was read from.
        """
        self.path = str(path)
        if task not in self.TASKS:
            raise ConfigError(f"unknown task '{task}', expected one of {', '.join(self.TASKS)}")
        self.task = task
        self.__data = self.__merge_defaults(data)
        self.__kinetics = None
        self.__validate(data)

    @classmethod
    def load(cls, path: Union[str, Path], task: Optional[str] = None) -> "Scenario":
        """
        Read a scenario file.
        :param path: Path of the TOML file.
        :param task: Task overriding the 'task' key of the file.
        :return: Validated scenario.
        """
        try:
            with open(path, "rb") as file:
                data = tomli.load(file)
        except FileNotFoundError as error:
            raise ConfigError(f"scenario file '{path}' not found") from error
        except tomli.TOMLDecodeError as error:
            raise ConfigError(f"scenario file '{path}' is malformed: {error}") from error

        selected = task if task is not None else data.get("task")
        if selected is None:
            raise ConfigError("no task given on the command line or in the scenario file")
        LOG.debug("Scenario '%s' loaded for task '%s'.", path, selected)
        return cls(data, str(selected), path)

    def __merge_defaults(self, data: Dict[str, object]) -> Dict[str, Dict[str, object]]:
        """
        Merge the document into a copy of the defaults.
        :param data: Parsed scenario document.
        :return: Resolved sections.
        """
        resolved = copy.deepcopy(self.DEFAULTS)
        for section, values in data.items():
            if section in ("task", "output"):
                continue
            if not isinstance(values, dict):
                raise ConfigError(f"'{section}' must be a section")
            if section == "kinetics":
                resolved["kinetics"] = dict(values)
                continue
            if section not in resolved:
                raise ConfigError(f"unknown section [{section}]")
            unknown = set(values) - set(resolved[section])
            if unknown:
                raise ConfigError(f"unknown keys in [{section}]: {', '.join(sorted(unknown))}")
            resolved[section].update(values)
        resolved["output"] = {"directory": str(data.get("output", "results"))}
        return resolved

    def __validate(self, data: Dict[str, object]) -> None:
        """
        Check that the sections needed by the task are present and hold valid values.
        :param data: Parsed scenario document.
        """
        for section in ["kinetics"] + self.TASKS[self.task]:
            if section not in data:
                raise ConfigError(f"task '{self.task}' needs a [{section}] section")
        if "family" not in self.__data["kinetics"]:
            raise ConfigError("[kinetics] needs a 'family'")

        if self.task != "check":
            wave = self.__data["wave"]
            swept = self.sweep_axes() if self.task == "sweep" else {}
            linear = self.task in ("simulate", "variational")
            if "m" not in swept:
                self.__require(wave, "m", lambda v: v > 1.0 or (linear and v == 1.0),
                               "m must exceed 1 (m = 1 only for simulate and variational)")
            if "D" not in swept:
                self.__require(wave, "D", lambda v: v > 0.0, "D must be positive")
            if "r" not in swept:
                self.__require(wave, "r", lambda v: v >= 0.0, "r must be nonnegative")
            if self.task == "shoot" and wave["c"] is None:
                raise ConfigError("task 'shoot' needs the speed c in [wave]")
            if wave["c"] is not None:
                self.__require(wave, "c", lambda v: v > 0.0, "c must be positive")

        solver = self.__data["solver"]
        for key in ("tol", "eps_zero", "eps_k", "eps_flat", "rtol", "atol", "seed_factor", "sample_spacing"):
            self.__require(solver, key, lambda v: v > 0.0, f"{key} must be positive")
        if solver["t_max"] is not None:
            self.__require(solver, "t_max", lambda v: v > 0.0, "t_max must be positive")
        if solver["method"] not in ("DOP853", "RK45", "Radau", "LSODA"):
            raise ConfigError(f"unsupported integration method '{solver['method']}'")

        variational = self.__data["variational"]
        if variational["family"] not in ("power_family", "knot_spline"):
            raise ConfigError(f"unknown trial family '{variational['family']}'")
        self.__require(variational, "budget", lambda v: v >= 20, "budget must be at least 20")
        self.__require(variational, "n_knots", lambda v: v >= 2, "n_knots must be at least 2")

        if self.__data["phase"]["seed"] not in ("sharp", "smooth"):
            raise ConfigError(f"unknown phase seed '{self.__data['phase']['seed']}'")
        simulation = self.__data["simulation"]
        if simulation["initial"] not in [shape.value for shape in InitialShape]:
            raise ConfigError(f"unknown initial condition '{simulation['initial']}'")
        if simulation["history"] is not None and simulation["history"] not in [shape.value for shape in InitialShape]:
            raise ConfigError(f"unknown initial history '{simulation['history']}'")
        for key in ("length", "dx", "horizon", "width", "safety", "snapshot_every", "fit_window"):
            self.__require(simulation, key, lambda v: v > 0.0, f"{key} must be positive")

        if self.task == "sweep":
            self.__validate_sweep()

        # Kinetics parameters are checked by building the kinetics once
        try:
            self.kinetics()
        except SolverError as error:
            raise ConfigError(f"invalid [kinetics]: {error}") from error

    def __validate_sweep(self) -> None:
        """
        Check the sweep axes.
        """
        axes = self.sweep_axes()
        if not 1 <= len(axes) <= 2:
            raise ConfigError(f"a sweep needs one or two axes among r, m, D, got {len(axes)}")
        for name, values in axes.items():
            if not isinstance(values, list) or not values:
                raise ConfigError(f"sweep axis '{name}' must be a nonempty list")
            if not all(isinstance(value, (int, float)) and math.isfinite(value) for value in values):
                raise ConfigError(f"sweep axis '{name}' holds non-numeric values")
        if "r" in axes and (min(axes["r"]) < 0.0 or 0.0 not in [float(value) for value in axes["r"]]):
            raise ConfigError("sweep axis 'r' must be nonnegative and contain 0")
        if "m" in axes and min(axes["m"]) <= 1.0:
            raise ConfigError("sweep axis 'm' must exceed 1")
        if "D" in axes and min(axes["D"]) <= 0.0:
            raise ConfigError("sweep axis 'D' must be positive")

    @staticmethod
    def __require(section: Dict[str, object], key: str, check, message: str) -> None:
        """
        Check one numeric value of a section.
        :param section: Resolved section.
        :param key: Key of the value.
        :param check: Predicate the value must fulfill.
        :param message: Error message if the predicate fails.
        """
        value = section.get(key)
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not check(value):
            raise ConfigError(f"{message} (got {value!r})")

    def resolved(self) -> Dict[str, object]:
        """
        Get the fully resolved configuration, defaults included.
        :return: Dictionary of the resolved sections and the task.
        """
        resolved = copy.deepcopy(self.__data)
        resolved["task"] = self.task
        return resolved

    def section(self, name: str) -> Dict[str, object]:
        """
        Get a resolved section.
        :param name: Section name.
        :return: Copy of the section.
        """
        return dict(self.__data[name])

    @property
    def output_directory(self) -> Path:
        """
        Get the output directory of the scenario.
        :return: Output directory.
        """
        return Path(self.__data["output"]["directory"])

    def kinetics(self) -> KineticsSpec:
        """
        Build the kinetics of the scenario.
        :return: Kinetics.
        """
        if self.__kinetics is None:
            params = {key: value for key, value in self.__data["kinetics"].items() if key != "family"}
            self.__kinetics = make_kinetics(str(self.__data["kinetics"]["family"]), params)
        return self.__kinetics

    def wave(self, c: Optional[float] = None) -> WaveParams:
        """
        Build the wave parameters.
        :param c: Speed overriding the scenario's c.
        :return: Wave parameters.
        """
        wave = self.__data["wave"]
        speed = c if c is not None else wave["c"]
        return WaveParams(float(wave["m"]), float(wave["D"]), float(wave["r"]), float(speed))

    def thresholds(self) -> Thresholds:
        """
        Build the classification thresholds.
        :return: Thresholds.
        """
        solver = self.__data["solver"]
        return Thresholds(float(solver["eps_zero"]), float(solver["eps_k"]), float(solver["eps_flat"]))

    def settings(self) -> IntegratorSettings:
        """
        Build the integrator settings.
        :return: Integrator settings.
        """
        solver = self.__data["solver"]
        return IntegratorSettings(method=str(solver["method"]), rtol=float(solver["rtol"]),
                                  atol=float(solver["atol"]), seed_factor=float(solver["seed_factor"]),
                                  samples_per_segment=int(solver["samples_per_segment"]),
                                  sample_spacing=float(solver["sample_spacing"]))

    def t_max(self) -> Optional[float]:
        """
        Get the integration window, None for the heuristic default.
        :return: Integration window.
        """
        value = self.__data["solver"]["t_max"]
        return None if value is None else float(value)

    def sim_config(self) -> SimConfig:
        """
        Build the simulation configuration.
        :return: Simulation configuration.
        """
        wave, simulation = self.__data["wave"], self.__data["simulation"]
        initial = InitialCondition(InitialShape(simulation["initial"]), float(simulation["width"]),
                                   math.nan if simulation["height"] is None else float(simulation["height"]))
        history = None if simulation["history"] is None else \
            InitialCondition(InitialShape(simulation["history"]), float(simulation["width"]),
                             math.nan if simulation["history_height"] is None else float(simulation["history_height"]))
        return SimConfig(self.kinetics(), float(wave["m"]), float(wave["D"]), float(wave["r"]),
                         length=float(simulation["length"]), dx=float(simulation["dx"]),
                         dt=None if simulation["dt"] is None else float(simulation["dt"]),
                         horizon=float(simulation["horizon"]), initial=initial, history=history,
                         front_threshold=None if simulation["front_threshold"] is None
                         else float(simulation["front_threshold"]),
                         safety=float(simulation["safety"]), snapshot_every=float(simulation["snapshot_every"]),
                         keep_fields=bool(simulation["keep_fields"]))

    def sweep_axes(self) -> Dict[str, List[float]]:
        """
        Get the sweep axes present in the scenario, in the order r, m, D.
        :return: Dictionary of axis name and values.
        """
        sweep = self.__data["sweep"]
        return {name: sweep[name] for name in self.SWEEP_AXES if sweep[name] is not None}


if __name__ == "__main__":
    LOG.critical("This module is not supposed to be executed.")
    sys.exit(1)
