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

import itertools
import logging
import os
import sys

from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from cli.output import write_csv, write_json, write_matrix
from cli.plotting import plot_lines
from cli.scenario import Scenario
from simulation.pde_lab import front_speed, simulate
from solver.errors import AmbiguousExponent, ConfigError, ConfigUnstable, InvariantViolation, SolverError, \
    TrajectoryHitZero
from solver.kinetics import KineticsSpec, verify_hypotheses
from solver.phase_plane import barrier, edge_asymptotics, integrate_phase_ode, sharp_trajectory
from solver.shooting import IntegratorSettings, Thresholds, WaveParams, classify_regularity, default_t_max, shoot
from solver.speed_finder import SpeedResult, critical_speed
from solver.variational import c_star_no_delay, identity_terms

# Define the logger
LOG = logging.getLogger(os.path.basename(__file__).split('.')[0])

# Exit codes
EXIT_SUCCESS = 0
EXIT_SOLVER_ERROR = 1
EXIT_CONFIG_ERROR = 2
EXIT_INVARIANT_VIOLATION = 3

# Tolerance of the invariant region check of simulations (relative to K)
REGION_TOLERANCE = 1e-8

# Type of a task result: summary payload and exit code
TaskResult = Tuple[Dict[str, object], int]


def run(task: str, scenario_path: Union[str, Path], out: Optional[Union[str, Path]] = None, parallel: int = 1) -> int:
    """
    Run a task on a scenario file and write its results.
    :param task: Task name.
    :param scenario_path: Scenario file.
    :param out: Output directory overriding the scenario's.
    :param parallel: Number of worker processes of sweeps.
    :return: Exit code.
    """
    try:
        scenario = Scenario.load(scenario_path, task)
        directory = Path(out) if out is not None else scenario.output_directory
        directory.mkdir(parents=True, exist_ok=True)
    except (ConfigError, OSError) as error:
        LOG.error("Configuration error: %s", error)
        return EXIT_CONFIG_ERROR

    try:
        payload, exit_code = TASKS[task](scenario, directory, max(1, parallel))
        write_json(directory / "summary.json", payload, scenario.resolved(), task)
    except (ConfigError, ConfigUnstable) as error:
        LOG.error("Configuration error: %s", error)
        return EXIT_CONFIG_ERROR
    except InvariantViolation as error:
        LOG.error("Invariant violated: %s", error)
        return EXIT_INVARIANT_VIOLATION
    except SolverError as error:
        LOG.error("Solver error: %s", error)
        return EXIT_SOLVER_ERROR
    return exit_code


def _speed(scenario: Scenario) -> SpeedResult:
    """
    Locate the sharp speed with the scenario's solver settings.
    """
    wave = scenario.section("wave")
    return critical_speed(scenario.kinetics(), float(wave["m"]), float(wave["D"]), float(wave["r"]),
                          float(scenario.section("solver")["tol"]),
                          scenario.t_max(), scenario.thresholds(), scenario.settings())


def _check_bracket(result: SpeedResult) -> None:
    """
    Check the final bracket of a speed result.
    """
    if not result.c_lo < result.c_star <= result.c_hi:
        raise InvariantViolation(f"c_star = {result.c_star} outside ({result.c_lo}, {result.c_hi}]")


def _write_profiles(directory: Path, result: SpeedResult) -> None:
    """
    Write the profile at the lower end of the bracket and plot it with the upper one.
    """
    write_csv(directory / "profile.csv", ["t", "phi", "psi", "segment_index"], result.profile.rows())
    label = result.c_star if result.converged else result.c_lo
    series = [(result.profile.t, result.profile.phi, f"c = {label:.6g}")]
    if result.upper_profile is not None:
        t, phi, _ = result.upper_profile.increasing_part()
        series.append((t, phi, f"c = {result.c_hi:.6g}"))
    plot_lines(directory / "profile.svg", f"Profiles at the sharp speed {result.c_star:.6g}", "t", "phi", series)


# pylint: disable=unused-argument
def run_check(scenario: Scenario, directory: Path, parallel: int) -> TaskResult:
    """
    Verify the monostable hypotheses of the kinetics.
    """
    kinetics = scenario.kinetics()
    report = verify_hypotheses(kinetics)
    LOG.info("Hypotheses %s for %s.", "hold" if report.passed else "fail", kinetics.family.value)
    payload = {"kinetics": kinetics.as_dict(), "linear_rate": kinetics.linear_rate(), "hypotheses": report.as_dict()}
    return payload, EXIT_SUCCESS if report.passed else EXIT_INVARIANT_VIOLATION


# pylint: disable=unused-argument
def run_shoot(scenario: Scenario, directory: Path, parallel: int) -> TaskResult:
    """
    Shoot at the scenario's speed.
    """
    kinetics, params = scenario.kinetics(), scenario.wave()
    t_max = scenario.t_max()
    window = default_t_max(kinetics, params) if t_max is None else t_max
    profile, outcome = shoot(kinetics, params, window, scenario.thresholds(), scenario.settings())
    write_csv(directory / "profile.csv", ["t", "phi", "psi", "segment_index"], profile.rows())
    plot_lines(directory / "profile.svg", f"Shot at c = {params.c:.6g}: {outcome.tag.value}", "t", "phi",
               [(profile.t, profile.phi, "phi"), (profile.t, profile.psi, "psi")], [False, True])
    payload = {"outcome": outcome.as_dict(), "t_star": profile.t_star, "segments": len(profile.segment_boundaries) + 1,
               "t_max": window, "t_max_heuristic": t_max is None}
    return payload, EXIT_SUCCESS


# pylint: disable=unused-argument
def run_find_speed(scenario: Scenario, directory: Path, parallel: int) -> TaskResult:
    """
    Locate the sharp speed.
    """
    result = _speed(scenario)
    _check_bracket(result)
    _write_profiles(directory, result)
    return result.as_dict(), EXIT_SUCCESS


# pylint: disable=unused-argument
def run_regularity(scenario: Scenario, directory: Path, parallel: int) -> TaskResult:
    """
    Locate the sharp speed and classify the regularity of the wave at its support edge.
    """
    result = _speed(scenario)
    _check_bracket(result)
    _write_profiles(directory, result)
    fit = classify_regularity(result.profile, result.m)
    LOG.info("Edge exponent %.4f (expected %.4f): %s.", fit.exponent, fit.expected_exponent, fit.label)
    return {"speed": result.as_dict(), "regularity": fit.as_dict()}, EXIT_SUCCESS


# pylint: disable=unused-argument
def run_phase(scenario: Scenario, directory: Path, parallel: int) -> TaskResult:
    """
    Build the phase-plane trajectory at the scenario's speed, or the sharp trajectory if no speed is given.
    """
    kinetics, phase = scenario.kinetics(), scenario.section("phase")
    payload: Dict[str, object] = {}
    if scenario.section("wave")["c"] is None:
        result = _speed(scenario)
        _check_bracket(result)
        params = WaveParams(result.m, result.D, result.r, result.c_star)
        trajectory = sharp_trajectory(result.profile, result.closing_profile, params, kinetics, float(phase["rel_gap"]))
        payload["speed"] = result.as_dict()
    else:
        params = scenario.wave()
        try:
            trajectory = integrate_phase_ode(kinetics, params, phase["phi_max"], str(phase["seed"]),
                                             int(phase["n_grid"]))
        except TrajectoryHitZero as error:
            LOG.info("Trajectory reached psi = 0 at phi = %.6g.", error.phi_zero)
            payload["phi_zero"] = error.phi_zero
            trajectory = error.trajectory
    if trajectory is None:
        return payload, EXIT_SUCCESS

    payload["trajectory"] = trajectory.as_dict()
    try:
        payload["edge"] = edge_asymptotics(trajectory, kinetics).as_dict()
    except AmbiguousExponent as error:
        LOG.warning("%s", error)
        payload["edge"] = None
    write_csv(directory / "phase.csv", ["phi", "psi_tilde", "phi_delayed", "psi_bar"], trajectory.rows(kinetics))
    curve = barrier(kinetics, params, int(phase["n_grid"]))
    plot_lines(directory / "phase.svg", f"Phase portrait at c = {params.c:.6g}", "phi", "psi",
               [(trajectory.phi, trajectory.psi_tilde, "trajectory"), (curve.phi, curve.psi_bar, "barrier")],
               [False, True])
    return payload, EXIT_SUCCESS


# pylint: disable=unused-argument
def run_variational(scenario: Scenario, directory: Path, parallel: int) -> TaskResult:
    """
    Estimate the sharp speed without delay variationally and, for m > 1, evaluate the identity at the optimal trial
    function of the sharp trajectory.
    """
    kinetics, wave, variational = scenario.kinetics(), scenario.section("wave"), scenario.section("variational")
    estimate = c_star_no_delay(kinetics, float(wave["m"]), float(wave["D"]), str(variational["family"]),
                               int(variational["budget"]), int(variational["n_knots"]), int(variational["seed"]))
    write_csv(directory / "best_g.csv", ["s", "g", "dg"], estimate.best.rows())
    write_json(directory / "trace.json", estimate.trace, scenario.resolved(), "variational")
    payload: Dict[str, object] = {"estimate": {key: value for key, value in estimate.as_dict().items()
                                               if key != "trace"}}
    if float(wave["m"]) == 1.0:
        return payload, EXIT_SUCCESS

    result = _speed(scenario)
    params = WaveParams(result.m, result.D, result.r, result.c_star)
    trajectory = sharp_trajectory(result.profile, result.closing_profile, params, kinetics,
                                  float(scenario.section("phase")["rel_gap"]))
    terms = identity_terms(trajectory, kinetics)
    payload.update({"speed": result.as_dict(), "identity": terms})
    if result.r > 0.0 and not terms["delay_gap"] > 0.0:
        raise InvariantViolation(f"delay gap {terms['delay_gap']:.3g} is not positive for r = {result.r:g}")
    return payload, EXIT_SUCCESS


# pylint: disable=unused-argument
def run_simulate(scenario: Scenario, directory: Path, parallel: int) -> TaskResult:
    """
    Simulate the delayed equation and measure the front speed.
    """
    config = scenario.sim_config()
    record = simulate(config)
    write_csv(directory / "front.csv", ["t", "x_f"], record.rows())
    if record.fields is not None:
        write_matrix(directory / "fields.csv", record.x, record.times, record.fields)
    plot_lines(directory / "front.svg", "Front position", "t", "x",
               [(record.times, record.fronts, "front"), (record.times, record.support, "support edge")],
               [False, True])

    K = config.kinetics.K
    if np.max(record.max_u) > K * (1.0 + REGION_TOLERANCE) or np.min(record.min_u) < -REGION_TOLERANCE * K:
        raise InvariantViolation(f"u left [0, K]: range [{np.min(record.min_u):.6g}, {np.max(record.max_u):.6g}]")
    speed, r_squared = front_speed(record, float(scenario.section("simulation")["fit_window"]))
    LOG.info("Measured front speed %.6f (r^2 = %.6f).", speed, r_squared)
    return {"config": config.as_dict(), "record": record.as_dict(), "front_speed": speed,
            "r_squared": r_squared}, EXIT_SUCCESS


def _sweep_cell(task: Tuple[KineticsSpec, Dict[str, float], float, Optional[float], Thresholds, IntegratorSettings,
                            bool]) -> Dict[str, object]:
    """
    Compute one cell of a sweep. Solver errors are recorded in the row.
    """
    kinetics, cell, tol, t_max, thresholds, settings, regularity = task
    row: Dict[str, object] = dict(cell)
    try:
        result = critical_speed(kinetics, cell["m"], cell["D"], cell["r"], tol, t_max, thresholds, settings)
        row.update({"c_star": result.c_star, "c_lo": result.c_lo, "c_hi": result.c_hi,
                    "iterations": result.iterations, "error": ""})
        if regularity:
            fit = classify_regularity(result.profile, cell["m"])
            row.update({"exponent_fit": fit.exponent, "regularity": fit.label})
    except SolverError as error:
        LOG.warning("Sweep cell %s failed: %s", cell, error)
        row.update({"c_star": None, "c_lo": None, "c_hi": None, "iterations": None, "error": str(error)})
        if regularity:
            row.update({"exponent_fit": None, "regularity": ""})
    return row


def run_sweep(scenario: Scenario, directory: Path, parallel: int) -> TaskResult:
    """
    Sweep the sharp speed over one or two of the axes r, m and D.
    """
    axes = scenario.sweep_axes()
    wave, solver = scenario.section("wave"), scenario.section("solver")
    names = list(axes)
    regularity = "m" in axes and min(axes["m"]) < 2.0 <= max(axes["m"])

    cells = []
    for values in itertools.product(*(axes[name] for name in names)):
        cell = {name: float(wave[name]) for name in ("r", "m", "D") if name not in axes}
        cell.update({name: float(value) for name, value in zip(names, values)})
        cells.append(cell)
    tasks = [(scenario.kinetics(), cell, float(solver["tol"]), scenario.t_max(), scenario.thresholds(),
              scenario.settings(), regularity) for cell in cells]
    LOG.info("Sweeping %d cell(s) over %s with %d worker(s).", len(tasks), ", ".join(names), parallel)
    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as executor:
            rows = list(executor.map(_sweep_cell, tasks))
    else:
        rows = [_sweep_cell(task) for task in tasks]

    failed = sum(1 for row in rows if row["error"])
    columns = names + ["c_star", "c_lo", "c_hi", "iterations"]
    if "r" in axes:
        violations = _delay_column(rows, [name for name in names if name != "r"])
        failed += violations
        columns.append("delay_inequality")
    if regularity:
        columns += ["exponent_fit", "regularity"]
    columns.append("error")
    write_csv(directory / "sweep.csv", columns, ([row.get(column) for column in columns] for row in rows))
    _plot_sweep(directory / "sweep.svg", rows, names)

    payload = {"axes": axes, "cells": len(rows), "failed": failed, "rows": rows}
    return payload, EXIT_INVARIANT_VIOLATION if failed else EXIT_SUCCESS


def _delay_column(rows: List[Dict[str, object]], others: List[str]) -> int:
    """
    Add the delay inequality column c*(r) < c*(0) to the sweep rows.
    :return: Number of rows violating the inequality.
    """
    baselines = {tuple(row[name] for name in others): row["c_star"] for row in rows if row["r"] == 0.0}
    violations = 0
    for row in rows:
        baseline = baselines.get(tuple(row[name] for name in others))
        if row["r"] == 0.0 or row["c_star"] is None or baseline is None:
            row["delay_inequality"] = ""
            continue
        row["delay_inequality"] = bool(row["c_star"] < baseline)
        violations += 0 if row["delay_inequality"] else 1
    return violations


def _plot_sweep(path: Path, rows: List[Dict[str, object]], names: List[str]) -> None:
    """
    Plot c_star along the first axis, one series per value of the second axis.
    """
    groups: Dict[object, List[Dict[str, object]]] = {}
    for row in rows:
        groups.setdefault(row[names[1]] if len(names) > 1 else None, []).append(row)
    series = []
    for key, group in groups.items():
        xs = [row[names[0]] for row in group]
        ys = [float("nan") if row["c_star"] is None else row["c_star"] for row in group]
        series.append((xs, ys, "c_star" if key is None else f"{names[1]} = {key:g}"))
    plot_lines(path, "Sharp speed", names[0], "c_star", series)


# Task handlers
TASKS: Dict[str, Callable[[Scenario, Path, int], TaskResult]] = {
    "check": run_check,
    "shoot": run_shoot,
    "find-speed": run_find_speed,
    "phase": run_phase,
    "variational": run_variational,
    "simulate": run_simulate,
    "sweep": run_sweep,
    "regularity": run_regularity,
}


if __name__ == "__main__":
    LOG.critical("This module is not supposed to be executed.")
    sys.exit(1)
