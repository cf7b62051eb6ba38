#!/usr/bin/env python3
#
#  forms.py
"""
The quadratic forms ``V`` and ``W`` on pairs of vectors in an inner product space.

.. code-block:: python

	>>> import numpy as np
	>>> v_form(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
	1.0
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

# stdlib
from typing import Optional, Union

# 3rd party
import numpy as np

__all__ = ["inner", "v_form", "w_form", "w_lower_bound"]

#: A float, or an array of floats for stacked inputs.
Scalar = Union[float, np.ndarray]


def inner(u: np.ndarray, w: np.ndarray, metric: Optional[np.ndarray] = None) -> Scalar:
	"""
	Returns :math:`\\langle u, w \\rangle`, Euclidean unless ``metric`` is given.

	Stacks of vectors, with the components along the last axis, give an array of inner products.

	:param u:
	:param w:
	:param metric:
	"""

	u = np.asarray(u, dtype=float)
	w = np.asarray(w, dtype=float)
	if metric is None:
		value = np.einsum("...i,...i->...", u, w)
	else:
		value = np.einsum("...i,ij,...j->...", u, np.asarray(metric, dtype=float), w)
	return float(value) if np.ndim(value) == 0 else value


def v_form(A: np.ndarray, B: np.ndarray, metric: Optional[np.ndarray] = None) -> Scalar:
	"""
	Returns the Gram determinant :math:`\\langle A, A \\rangle \\langle B, B \\rangle - \\langle A, B \\rangle^2`.

	:param A:
	:param B:
	:param metric:
	"""

	return inner(A, A, metric) * inner(B, B, metric) - inner(A, B, metric)**2


def w_form(
		A: np.ndarray,
		B: np.ndarray,
		X: np.ndarray,
		Y: np.ndarray,
		metric: Optional[np.ndarray] = None,
		) -> Scalar:
	"""
	Returns :math:`\\langle A, A \\rangle \\langle Y, Y \\rangle + \\langle B, B \\rangle \\langle X, X \\rangle
	- 2 \\langle A, B \\rangle \\langle X, Y \\rangle`.

	This is nonnegative, and when :math:`\\{A, B\\} \\perp \\{X, Y\\}` it is the cross term in
	``v_form(A + X, B + Y)``.

	:param A:
	:param B:
	:param X:
	:param Y:
	:param metric:
	"""

	return (
			inner(A, A, metric) * inner(Y, Y, metric) + inner(B, B, metric) * inner(X, X, metric)
			- 2 * inner(A, B, metric) * inner(X, Y, metric)
			)


def w_lower_bound(
		A: np.ndarray,
		B: np.ndarray,
		X: np.ndarray,
		Y: np.ndarray,
		metric: Optional[np.ndarray] = None,
		) -> Scalar:
	"""
	Returns :math:`\\tfrac12 (\\langle A, A \\rangle + \\langle B, B \\rangle)(\\langle X, X \\rangle + \\langle Y, Y \\rangle)`,
	which bounds :func:`~.w_form` from below when :math:`\\{A, B\\} \\perp \\{X, Y\\}`
	and :math:`A + X`, :math:`B + Y` are orthonormal.

	:param A:
	:param B:
	:param X:
	:param Y:
	:param metric:
	"""

	return 0.5 * (inner(A, A, metric) + inner(B, B, metric)) * (inner(X, X, metric) + inner(Y, Y, metric))
