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
import math

import numpy as np
import pandas as pd
import pytest

from cli.output import write_csv, write_json, write_matrix
from solver.shooting import Outcome


def test_csv_table(tmp_path):
    path = tmp_path / "table.csv"
    write_csv(path, ["r", "c_star", "ok", "tag"], [(0.0, np.float64(1.25), True, Outcome.GREW_PAST_K),
                                                    (0.5, None, False, Outcome.DECAYED_TO_ZERO)])
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "r,c_star,ok,tag"
    assert lines[1] == "0.0,1.25,True,GrewPastK"
    table = pd.read_csv(path)
    assert list(table["r"]) == [0.0, 0.5]
    assert math.isnan(table["c_star"][1])


def test_csv_keeps_full_precision(tmp_path):
    path = tmp_path / "precision.csv"
    write_csv(path, ["x"], [(1.0 / 3.0,), (math.pi,)])
    assert list(pd.read_csv(path)["x"]) == [1.0 / 3.0, math.pi]


def test_field_matrix(tmp_path):
    path = tmp_path / "fields.csv"
    x = np.linspace(0.0, 1.0, 5)
    fields = np.outer([0.0, 1.0, 2.0], x)
    write_matrix(path, x, np.array([0.0, 0.5, 1.0]), fields)
    table = pd.read_csv(path)
    assert list(table.columns) == ["t", "0.0", "0.25", "0.5", "0.75", "1.0"]
    assert table.shape == (3, 6)
    assert table.iloc[2, 1:].to_numpy() == pytest.approx(2.0 * x)


def test_json_metadata_and_non_finite(tmp_path):
    path = tmp_path / "summary.json"
    write_json(path, {"value": math.inf, "tags": (Outcome.CONVERGED_NEAR_K,)}, {"solver": {"tol": 1e-4}}, "check")
    document = json.loads(path.read_text(encoding="utf-8"))
    assert document["metadata"]["task"] == "check"
    assert document["metadata"]["configuration"]["solver"]["tol"] == 1e-4
    assert document["result"] == {"tags": ["ConvergedNearK"], "value": None}
