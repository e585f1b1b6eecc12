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

from typing import Optional

# Define the logger
LOG = logging.getLogger(os.path.basename(__file__).split('.')[0])


class SolverError(Exception):
    """
    Base class of all errors raised by the solvers. Carries the module and the operation in which the error occurred.
    """
    # Module the error belongs to
    MODULE = "solver"

    def __init__(self, message: str, operation: str = "", module: Optional[str] = None) -> None:
        """
        Class constructor.
        :param message: Human readable error description.
        :param operation: Name of the operation that raised the error.
        :param module: Module that raised the error, if it differs from the module of the error class.
        """
        super().__init__(message)
        self.operation = operation
        self.module = module or self.MODULE

    @property
    def context(self) -> str:
        """
        Get the module and operation context of the error.
        :return: Context string in the form 'module.operation'.
        """
        return f"{self.module}.{self.operation}" if self.operation else self.module

    def __str__(self) -> str:
        return f"[{self.context}] {super().__str__()}"


class InvariantViolation(Exception):
    """
    A computed result violates one of its invariants.
    """


class ConfigError(Exception):
    """
    A scenario file is malformed or holds values outside their validity ranges.
    """


# Kinetics

class InvalidParams(SolverError):
    """Parameters outside their domain."""
    MODULE = "kinetics"


class NoPositiveEquilibrium(SolverError):
    """No sign change of b - d was found."""
    MODULE = "kinetics"


class NoRoot(SolverError):
    """The linearized decay-rate equation has no positive root."""
    MODULE = "kinetics"


# Shooting

class SeedTooLarge(SolverError):
    """Seed time not small compared with the delay shift."""
    MODULE = "shooting"


class StateBlowup(SolverError):
    """Profile exceeded the configured ceiling."""
    MODULE = "shooting"


class StepFailure(SolverError):
    """The integrator could not continue."""
    MODULE = "shooting"


class InsufficientEdgeSamples(SolverError):
    """Not enough samples near the support edge for an exponent fit."""
    MODULE = "shooting"


# Speed finder

class BracketFailure(SolverError):
    """No certified speed bracket found."""
    MODULE = "speed_finder"


class NonMonotoneClassification(SolverError):
    """Profiles are not ordered in the speed."""
    MODULE = "speed_finder"


class UndeterminedOutcome(SolverError):
    """A shot stayed undetermined after the retry."""
    MODULE = "speed_finder"


# Phase plane

class NonMonotoneProfile(SolverError):
    """Profile not strictly increasing on its increase interval."""
    MODULE = "phase_plane"


class IntegralDiverged(SolverError):
    """Elapsed-time integral diverges near a zero of the trajectory."""
    MODULE = "phase_plane"


class TrajectoryHitZero(SolverError):
    """
    The trajectory reached the phi axis before the requested end point.
    """
    MODULE = "phase_plane"

    def __init__(self, message: str, phi_zero: float, trajectory=None, operation: str = "") -> None:
        """
        Class constructor.
        :param message: Human readable error description.
        :param phi_zero: Value of phi at which the trajectory vanished.
        :param trajectory: Part of the trajectory computed before the zero (optional).
        :param operation: Name of the operation that raised the error.
        """
        super().__init__(message, operation)
        self.phi_zero = phi_zero
        self.trajectory = trajectory


class AmbiguousExponent(SolverError):
    """Edge exponent matches neither the sharp nor the smooth branch."""
    MODULE = "phase_plane"


# Variational

class NegativeRadicand(SolverError):
    """Radicand of the functional is negative somewhere."""
    MODULE = "variational"


class OptimizerStalled(SolverError):
    """No admissible maximizer found within the evaluation budget."""
    MODULE = "variational"


class TrajectoryNotSharp(SolverError):
    """The optimal trial function needs a sharp trajectory."""
    MODULE = "variational"


class InadmissibleTrialFunction(SolverError):
    """Trial function is not decreasing to zero at K."""
    MODULE = "variational"


# Simulation

class UnstableBlowup(SolverError):
    """Simulated field exceeded twice the equilibrium."""
    MODULE = "pde_lab"


class ConfigUnstable(SolverError):
    """Time step violates the explicit stability bound."""
    MODULE = "pde_lab"


class FrontStalled(SolverError):
    """The front did not move enough within the fit window."""
    MODULE = "pde_lab"


if __name__ == "__main__":
    LOG.critical("This module is not supposed to be executed.")
    sys.exit(1)
