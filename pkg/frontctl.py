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

import argparse
import logging
import os
import sys

from typing import List, Optional

from cli.runner import TASKS, run
from miscellaneous.version import version_string

# Define the logger
LOG = logging.getLogger(os.path.basename(__file__).split('.')[0])


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """
    Parse the command line.
    :param argv: Arguments without the program name (sys.argv if None).
    :return: Parsed arguments.
    """
    parser = argparse.ArgumentParser(prog="frontctl", description="Sharp traveling waves of delayed degenerate "
                                                                   "reaction-diffusion equations.")
    parser.add_argument("task", choices=list(TASKS), help="task to run")
    parser.add_argument("--scenario", required=True, help="scenario file (TOML)")
    parser.add_argument("--out", default=None, help="output directory (overrides the scenario)")
    parser.add_argument("--parallel", type=int, default=1, help="number of worker processes for sweeps")
    parser.add_argument("--verbose", action="store_true", help="log solver details")
    parser.add_argument("--version", action="version", version=f"%(prog)s {version_string()}")
    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point of the command line tool.
    :param argv: Arguments without the program name (sys.argv if None).
    :return: Exit code.
    """
    arguments = parse_arguments(argv)
    logging.basicConfig(format="%(asctime)s [%(levelname)s] <%(name)s> %(message)s",
                        level=logging.DEBUG if arguments.verbose else logging.INFO)
    LOG.info("frontctl %s starting task '%s'.", version_string(), arguments.task)

    exit_code = run(arguments.task, arguments.scenario, arguments.out, arguments.parallel)

    LOG.info("frontctl terminating with exit code %d.", exit_code)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
