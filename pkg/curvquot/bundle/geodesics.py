#!/usr/bin/env python3
#
#  geodesics.py
"""
Drift of geodesics which start tangent to a fibre or to the zero section.
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

# 3rd party
import numpy as np

# this package
from curvquot.bundle._model import ModelBundle
from curvquot.curvature import geodesic

__all__ = ["fiber_geodesic_drift", "zero_section_geodesic_drift"]


def fiber_geodesic_drift(
		b: ModelBundle,
		p: np.ndarray,
		v: np.ndarray,
		w: np.ndarray,
		T: float = 1.0,
		steps: int = 100,
		) -> float:
	"""
	Returns the largest distance, in base coordinates, between ``p`` and the geodesic
	starting at ``(p, v)`` with fibre velocity ``w``.

	Fibres are totally geodesic, so this is zero up to integration error.

	:param b:
	:param p:
	:param v:
	:param w:
	:param T:
	:param steps:
	"""

	path = geodesic(b.chart(), b.join(p, v), b.join(np.zeros(b.base_dimension), w), T, steps)
	n = b.base_dimension
	return float(np.abs(path.points[:, :n] - np.asarray(p, dtype=float)).max())


def zero_section_geodesic_drift(
		b: ModelBundle,
		p: np.ndarray,
		X: np.ndarray,
		T: float = 1.0,
		steps: int = 100,
		) -> float:
	"""
	Returns the largest fibre coordinate along the geodesic starting at ``(p, 0)`` with base velocity ``X``.

	The zero section is totally geodesic, so this is zero up to integration error.

	:param b:
	:param p:
	:param X:
	:param T:
	:param steps:
	"""

	path = geodesic(b.chart(), b.join(p, np.zeros(b.rank)), b.join(X, np.zeros(b.rank)), T, steps)
	return float(np.abs(path.points[:, b.base_dimension:]).max())
