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
import os
import textwrap

import pytest

from solver.kinetics import make_kinetics

# Define the logger
LOG = logging.getLogger(os.path.basename(__file__).split('.')[0])


@pytest.fixture
def fisher():
    """
    Fisher kinetics b(u) = u, d(u) = u^2 with K = 1.
    """
    return make_kinetics("fisher", {})


@pytest.fixture
def nicholson():
    """
    Nicholson kinetics with linear death, K = ln 2.
    """
    return make_kinetics("nicholson_linear_death", {"p": 2.0, "a": 1.0, "q": 1.0, "delta": 1.0})


@pytest.fixture
def write_scenario(tmp_path):
    """
    Factory writing a scenario file into the test directory.
    """
    def write(text: str, name: str = "scenario.toml") -> str:
        path = tmp_path / name
        path.write_text(textwrap.dedent(text), encoding="utf-8")
        return str(path)

    return write
