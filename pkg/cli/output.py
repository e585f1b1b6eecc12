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
import logging
import math
import os
import sys

from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import pandas as pd

from miscellaneous.version import version_string

# Define the logger
LOG = logging.getLogger(os.path.basename(__file__).split('.')[0])


def plain(value: object) -> object:
    """
    Convert a result into JSON serializable built-in types. Non-finite floats become None.
    :param value: Value to convert.
    :return: Converted value.
    """
    if isinstance(value, dict):
        return {str(key): plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return [plain(item) for item in value.tolist()]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value) if math.isfinite(value) else None
    return value


def write_json(path: Path, result: object, configuration: dict, task: str) -> None:
    """
    Write a result with its metadata block.
    :param path: Output file.
    :param result: Result to write.
    :param configuration: Resolved configuration of the run.
    :param task: Task that produced the result.
    """
    document = {"metadata": {"version": version_string(), "configuration": configuration, "task": task},
                "result": result}
    with open(path, "w", encoding="utf-8") as file:
        file.write(json.dumps(plain(document), indent=2, sort_keys=True, allow_nan=False))
        file.write("\n")
    LOG.debug("Wrote %s.", path)


def write_table(path: Path, table: pd.DataFrame) -> None:
    """
    Write a data frame without index. Floats keep their shortest round-trip form, missing values stay empty.
    :param path: Output file.
    :param table: Table to write.
    """
    table.to_csv(path, index=False, na_rep="")
    LOG.debug("Wrote %s (%d row(s)).", path, len(table))


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[object]]) -> None:
    """
    Write a table with a header row.
    :param path: Output file.
    :param header: Column names.
    :param rows: Table rows.
    """
    write_table(path, pd.DataFrame([plain(list(row)) for row in rows], columns=list(header)))


def write_matrix(path: Path, x: np.ndarray, times: np.ndarray, fields: np.ndarray) -> None:
    """
    Write field snapshots as a matrix, one row per snapshot time and one column per grid point.
    :param path: Output file.
    :param x: Grid.
    :param times: Snapshot times.
    :param fields: Snapshots, shape (len(times), len(x)).
    """
    table = pd.DataFrame(np.asarray(fields, dtype=float), columns=[repr(float(point)) for point in x])
    table.insert(0, "t", np.asarray(times, dtype=float))
    write_table(path, table)


if __name__ == "__main__":
    LOG.critical("This module is not supposed to be executed.")
    sys.exit(1)
