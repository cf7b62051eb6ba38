#!/usr/bin/env python3
#
#  exceptions.py
"""
Exceptions raised by ``curvquot``.

Every exception accepts arbitrary keyword arguments,
which are stored as attributes so that callers (and the command-line interface)
can report the offending abscissa, point or configuration field.
"""
#
#  Copyright © 2024 Dominic Davis-Foster <dominic@davis-foster.co.uk>
#
#  This program is free software; you can redistribute it and/or modify
#  it under the terms of the GNU Lesser General Public License as published by
#  the Free Software Foundation; either version 3 of the License, or
#  (at your option) any later version.
#
#  This program is distributed in the hope that it will be useful,
#  but WITHOUT ANY WARRANTY; without even the implied warranty of
#  MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
#  GNU Lesser General Public License for more details.
#
#  You should have received a copy of the GNU Lesser General Public License
#  along with this program; if not, write to the Free Software
#  Foundation, Inc., 51 Franklin Street, Fifth Floor, Boston,
#  MA 02110-1301, USA.
#

__all__ = [
		"BracketError",
		"BudgetExhaustedError",
		"ConfigError",
		"CurvquotError",
		"DegeneratePlaneError",
		"DomainError",
		"EvaluationError",
		"GeodesicExitError",
		"InfeasibleConstructionError",
		"JetMismatchError",
		"LiftError",
		"PreconditionError",
		"QuadratureError",
		"ResidualError",
		"SingularMetricError",
		"UnknownCheckError",
		]


class CurvquotError(Exception):
	"""
	All ``curvquot`` exceptions inherit from this exception.

	Keyword arguments are stored as attributes on the exception.
	"""

	def __init__(self, *args, **kwargs):
		for key, value in kwargs.items():
			setattr(self, key, value)
		super().__init__(*args)


class EvaluationError(CurvquotError, ArithmeticError):
	"""
	Raised when a function returns a non-finite value.

	The ``abscissa`` attribute holds the offending argument.
	"""


class QuadratureError(CurvquotError, ArithmeticError):
	"""
	Raised when adaptive quadrature fails to converge within its subdivision budget.
	"""


class DomainError(CurvquotError, ValueError):
	"""
	Raised when an argument lies outside the domain of a function or chart.

	The ``point`` attribute holds the offending argument.
	"""


class SingularMetricError(CurvquotError, ArithmeticError):
	"""
	Raised when a metric tensor is not positive definite at the evaluation point.
	"""


class DegeneratePlaneError(CurvquotError, ValueError):
	"""
	Raised when two vectors do not span a 2-plane.
	"""


class InfeasibleConstructionError(CurvquotError, ValueError):
	"""
	Raised when a warp profile cannot be constructed for the requested parameters.

	The ``constraint`` attribute names the constraint which failed.
	"""


class BracketError(CurvquotError, ValueError):
	"""
	Raised when a root-finding bracket does not contain a sign change.
	"""


class PreconditionError(CurvquotError, ValueError):
	"""
	Raised when the inputs of an operation violate its stated preconditions.

	The ``bound`` attribute names the violated bound.
	"""


class JetMismatchError(PreconditionError):
	"""
	Raised when two metrics to be glued do not share their 1-jets along the gluing locus.

	The ``defect`` attribute holds the largest discrepancy found.
	"""


class ResidualError(CurvquotError, ArithmeticError):
	"""
	Raised when a least-squares fit leaves a residual above tolerance.

	The ``residual`` attribute holds the residual.
	"""


class LiftError(CurvquotError, ArithmeticError):
	"""
	Raised when a point of a quotient chart cannot be lifted to the total space.
	"""


class GeodesicExitError(CurvquotError, ValueError):
	"""
	Raised when an integrated geodesic leaves the domain of its chart.

	The ``point`` and ``time`` attributes record where this happened.
	"""


class BudgetExhaustedError(CurvquotError, RuntimeError):
	"""
	Raised when a retry schedule is exhausted without success.

	The ``witness`` attribute holds the last (worst) report.
	"""


class ConfigError(CurvquotError, ValueError):
	"""
	Raised when a check configuration is malformed.

	The ``field`` attribute names the offending field.
	"""


class UnknownCheckError(ConfigError, KeyError):
	"""
	Raised when a configuration names a check which is not registered.
	"""

	def __init__(self, name: str):
		super().__init__(f"Unknown check {name!r}.", field="check", name=name)

	def __str__(self) -> str:
		return str(self.args[0])
