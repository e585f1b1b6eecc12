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
import sys

from typing import Tuple

# Define the logger
LOG = logging.getLogger(os.path.basename(__file__).split('.')[0])

# File holding the version and the Git hash of a release build
VERSION_FILE = "frontctl.ver"


def load_from_file() -> Tuple[str, str]:
    """
    Load the version and the Git hash from the version file of a release build.
    :return: Tuple consisting of the version and the short Git hash, ("unknown", "") if the file cannot be found.
    """
    search_paths = [".", "data", os.path.join(getattr(sys, "_MEIPASS", "."), "data")]
    for path in search_paths:
        version_file = os.path.join(path, VERSION_FILE)
        if os.path.isfile(version_file):
            with open(version_file, "r", encoding="utf-8") as file:
                return file.readline().rstrip(), file.readline().rstrip()
    return "unknown", ""


def load_from_repository() -> Tuple[str, str]:
    """
    Derive the version from the Git repository the toolkit runs from.
    :return: Tuple consisting of the tag of the checked-out commit (or 0.0.0) and the short Git hash.
    """
    # Check if a Git client is available
    try:
        import git  # pylint: disable=import-outside-toplevel
    except ImportError:
        LOG.debug("Git module cannot be imported, loading version from file.")
        return load_from_file()

    try:
        repo = git.Repo(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
        version = next((str(tag) for tag in repo.tags if tag.commit == repo.head.commit), "0.0.0")
        short_hash = repo.git.rev_parse(repo.head.object.hexsha, short=7)
        if repo.is_dirty():
            short_hash += "-dirty"
        return version, short_hash
    except (git.InvalidGitRepositoryError, git.NoSuchPathError, ValueError):
        LOG.debug("Not running from a Git repository, loading version from file.")
        return load_from_file()


VERSION, GIT_SHORT_HASH = load_from_repository()


def version_string() -> str:
    """
    Get the version embedded into result metadata.
    :return: Version, followed by the short Git hash if known.
    """
    return f"{VERSION}-g{GIT_SHORT_HASH}" if GIT_SHORT_HASH else VERSION


if __name__ == "__main__":
    LOG.critical("This module is not supposed to be executed.")
    sys.exit(1)
