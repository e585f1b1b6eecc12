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

import json

import pandas as pd
import pytest

from cli.scenario import Scenario
from frontctl import main, parse_arguments
from solver.errors import ConfigError

FISHER = """
    [kinetics]
    family = "fisher"
"""

FISHER_WAVE = FISHER + """
    [wave]
    m = 2.0
    D = 1.0
    r = 0.0
"""


def summary(directory):
    """
    Read the summary written by a task.
    """
    with open(directory / "summary.json", "r", encoding="utf-8") as file:
        return json.load(file)


def test_check_writes_summary(write_scenario, tmp_path):
    out = tmp_path / "out"
    assert main(["check", "--scenario", write_scenario(FISHER), "--out", str(out)]) == 0
    document = summary(out)
    assert document["metadata"]["task"] == "check"
    assert document["metadata"]["configuration"]["kinetics"]["family"] == "fisher"
    assert document["metadata"]["configuration"]["solver"]["tol"] == 1e-4
    assert document["result"]["hypotheses"]["passed"] is True
    assert document["result"]["kinetics"]["K"] == pytest.approx(1.0)


def test_outputs_are_deterministic(write_scenario, tmp_path):
    path = write_scenario(FISHER)
    main(["check", "--scenario", path, "--out", str(tmp_path / "first")])
    main(["check", "--scenario", path, "--out", str(tmp_path / "second")])
    first = (tmp_path / "first" / "summary.json").read_bytes()
    assert first == (tmp_path / "second" / "summary.json").read_bytes()


def test_failed_hypotheses_exit_code(write_scenario, tmp_path):
    path = write_scenario("""
        [kinetics]
        family = "nicholson_linear_death"
        p = 10.0
        a = 4.0
        q = 1.0
        delta = 1.0
    """)
    out = tmp_path / "out"
    assert main(["check", "--scenario", path, "--out", str(out)]) == 3
    assert summary(out)["result"]["hypotheses"]["clauses"]["monotone_birth"] is False


@pytest.mark.parametrize("text", [
    FISHER,
    FISHER_WAVE + "\n[unknown]\nkey = 1\n",
    FISHER_WAVE + "\n[solver]\ntolerance = 1e-3\n",
    FISHER_WAVE.replace("m = 2.0", "m = 1.0"),
    FISHER_WAVE.replace("D = 1.0", "D = -1.0"),
    "[kinetics]\nfamily = \"fisher\"\np = -1.0\n[wave]\nm = 2.0\nD = 1.0\n",
    "[kinetics\nfamily = \"fisher\"\n",
])
def test_invalid_scenarios_exit_code(write_scenario, tmp_path, text):
    out = tmp_path / "out"
    assert main(["find-speed", "--scenario", write_scenario(text), "--out", str(out)]) == 2
    assert not (out / "summary.json").exists()


def test_missing_scenario_file(tmp_path):
    assert main(["check", "--scenario", str(tmp_path / "missing.toml")]) == 2


@pytest.mark.parametrize("axis", ["r = []", "r = [0.25, 0.5]", "m = [1.0, 2.0]"])
def test_invalid_sweep_axes(write_scenario, tmp_path, axis):
    path = write_scenario(FISHER_WAVE + f"\n[sweep]\n{axis}\n")
    assert main(["sweep", "--scenario", path, "--out", str(tmp_path / "out")]) == 2


def test_unstable_simulation_step(write_scenario, tmp_path):
    path = write_scenario(FISHER_WAVE + "\n[simulation]\ndt = 0.1\n")
    assert main(["simulate", "--scenario", path, "--out", str(tmp_path / "out")]) == 2


def test_find_speed(write_scenario, tmp_path):
    out = tmp_path / "out"
    assert main(["find-speed", "--scenario", write_scenario(FISHER_WAVE), "--out", str(out)]) == 0
    result = summary(out)["result"]
    assert result["c_star"] == pytest.approx(1.0, abs=1e-3)
    assert result["bracket"][0] <= result["c_star"] <= result["bracket"][1]
    assert result["t_max_heuristic"] is True
    assert (out / "profile.csv").exists()
    assert "<svg" in (out / "profile.svg").read_text(encoding="utf-8")


def test_shoot(write_scenario, tmp_path):
    out = tmp_path / "out"
    path = write_scenario(FISHER_WAVE + "c = 5.0\n")
    assert main(["shoot", "--scenario", path, "--out", str(out)]) == 0
    assert summary(out)["result"]["outcome"]["tag"] == "GrewPastK"
    assert list(pd.read_csv(out / "profile.csv").columns) == ["t", "phi", "psi", "segment_index"]


def test_simulate(write_scenario, tmp_path):
    out = tmp_path / "out"
    path = write_scenario(FISHER_WAVE + "\n[simulation]\nlength = 20.0\ndx = 0.2\nhorizon = 10.0\n")
    assert main(["simulate", "--scenario", path, "--out", str(out)]) == 0
    result = summary(out)["result"]
    assert result["front_speed"] > 0.5
    assert result["record"]["max_u"] <= 1.0 + 1e-8
    assert (out / "front.csv").exists()


@pytest.mark.slow
def test_delay_sweep(write_scenario, tmp_path):
    out = tmp_path / "out"
    path = write_scenario(FISHER_WAVE + "\n[solver]\ntol = 1e-3\n\n[sweep]\nr = [0.0, 0.5]\n")
    assert main(["sweep", "--scenario", path, "--out", str(out)]) == 0
    table = pd.read_csv(out / "sweep.csv", dtype={"delay_inequality": str})
    assert list(table["r"]) == [0.0, 0.5]
    assert table["delay_inequality"][1] == "True"
    assert table["c_star"][1] < table["c_star"][0]


@pytest.mark.slow
def test_regularity_sweep(write_scenario, tmp_path):
    out = tmp_path / "out"
    path = write_scenario(FISHER_WAVE + "\n[solver]\ntol = 1e-3\n\n[sweep]\nm = [1.5, 2.0, 3.0]\n")
    assert main(["sweep", "--scenario", path, "--out", str(out)]) == 0
    assert list(pd.read_csv(out / "sweep.csv")["regularity"]) == ["C1", "NonC1", "NonC1"]


def test_scenario_defaults_and_task_override(write_scenario):
    path = write_scenario("task = \"check\"\n" + FISHER_WAVE)
    scenario = Scenario.load(path, "find-speed")
    assert scenario.task == "find-speed"
    resolved = scenario.resolved()
    assert resolved["task"] == "find-speed"
    assert resolved["phase"]["n_grid"] == 400
    assert scenario.t_max() is None
    assert scenario.thresholds().eps_k == 1e-6
    assert scenario.kinetics() is scenario.kinetics()


def test_scenario_needs_a_task(write_scenario):
    with pytest.raises(ConfigError):
        Scenario.load(write_scenario(FISHER))


def test_arguments():
    arguments = parse_arguments(["sweep", "--scenario", "s.toml", "--parallel", "4"])
    assert arguments.task == "sweep" and arguments.parallel == 4 and arguments.out is None
    with pytest.raises(SystemExit):
        parse_arguments(["find-speed"])
    with pytest.raises(SystemExit):
        parse_arguments(["integrate", "--scenario", "s.toml"])


def test_scenario_initial_history(write_scenario, tmp_path):
    wave = FISHER_WAVE.replace("r = 0.0", "r = 0.5")
    config = Scenario.load(write_scenario(wave + "\n[simulation]\nhistory = \"constant\"\nhistory_height = 0.0\n"),
                           "simulate").sim_config()
    assert config.history.shape.value == "constant"
    assert config.history.height == 0.0
    assert config.as_dict()["history"]["height"] == 0.0
    assert Scenario.load(write_scenario(wave), "simulate").sim_config().history is None
    path = write_scenario(wave + "\n[simulation]\nhistory = \"ramp\"\n")
    assert main(["simulate", "--scenario", path, "--out", str(tmp_path / "out")]) == 2
