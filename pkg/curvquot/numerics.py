#!/usr/bin/env python3
#
#  numerics.py
"""
Shared numerical substrate: quaternion algebra, small symmetric matrices,
finite differences, adaptive quadrature and seeded sampling.

.. automodulesumm:: curvquot.numerics
	:autosummary-sections: ;;
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
import math
import warnings
from typing import Callable, NamedTuple, Optional, Sequence, Union

# 3rd party
import numpy as np
from scipy import integrate as _integrate

# this package
from curvquot.exceptions import EvaluationError, QuadratureError

__all__ = [
		"DEFAULT_POLICY",
		"FDPolicy",
		"Quaternion",
		"SymMatrix",
		"fd_derivative",
		"fd_directional",
		"hamilton",
		"integrate",
		"make_rng",
		"metric_orthonormalize",
		"quat_mul",
		"random_unit_vector",
		"safe_norm",
		"sym_eig_min",
		]

ArrayLike = Union[float, np.ndarray]


class Quaternion(NamedTuple):
	"""
	A quaternion ``w + xi + yj + zk``.

	.. code-block:: python

		>>> Quaternion(0, 1, 0, 0) * Quaternion(0, 0, 1, 0)
		Quaternion(w=0.0, x=0.0, y=0.0, z=1.0)
	"""

	w: float
	x: float
	y: float
	z: float

	@classmethod
	def from_array(cls, array: Sequence[float]) -> "Quaternion":
		"""
		Construct a :class:`~.Quaternion` from a sequence of four reals.

		:param array:
		"""

		w, x, y, z = (float(c) for c in array)
		return cls(w, x, y, z)

	def as_array(self) -> np.ndarray:
		"""
		Returns the components as a :class:`numpy.ndarray` of shape ``(4, )``.
		"""

		return np.array(self, dtype=float)

	def conj(self) -> "Quaternion":
		"""
		Returns the conjugate quaternion.
		"""

		return Quaternion(self.w, -self.x, -self.y, -self.z)

	def norm(self) -> float:
		"""
		Returns the Euclidean norm of the quaternion.
		"""

		return math.sqrt(self.w**2 + self.x**2 + self.y**2 + self.z**2)

	def __mul__(self, other: "Quaternion") -> "Quaternion":  # type: ignore[override]
		return quat_mul(self, other)


def hamilton(a: np.ndarray, b: np.ndarray) -> np.ndarray:
	"""
	Hamilton product of quaternion arrays, broadcasting over leading axes.

	:param a: Array of shape ``(..., 4)``.
	:param b: Array of shape ``(..., 4)``.
	"""

	a = np.asarray(a, dtype=float)
	b = np.asarray(b, dtype=float)
	aw, ax, ay, az = np.moveaxis(a, -1, 0)
	bw, bx, by, bz = np.moveaxis(b, -1, 0)

	return np.stack(
			[
					aw * bw - ax * bx - ay * by - az * bz,
					aw * bx + ax * bw + ay * bz - az * by,
					aw * by - ax * bz + ay * bw + az * bx,
					aw * bz + ax * by - ay * bx + az * bw,
					],
			axis=-1,
			)


def quat_mul(a: Quaternion, b: Quaternion) -> Quaternion:
	"""
	Returns the Hamilton product ``a·b``.

	.. code-block:: python

		>>> quat_mul(Quaternion(0, 1, 0, 0), Quaternion(0, 1, 0, 0))
		Quaternion(w=-1.0, x=0.0, y=0.0, z=0.0)

	:param a:
	:param b:
	"""

	return Quaternion.from_array(hamilton(np.asarray(a, dtype=float), np.asarray(b, dtype=float)))


class SymMatrix:
	"""
	A real symmetric ``d × d`` matrix.

	The input is symmetrised on construction so that ``entry(i, j) == entry(j, i)`` holds exactly.

	:param entries: A square array.
	"""

	__slots__ = ("_array", )

	def __init__(self, entries: Union[np.ndarray, Sequence[Sequence[float]]]):
		array = np.array(entries, dtype=float)

		if array.ndim != 2 or array.shape[0] != array.shape[1]:
			raise ValueError(f"Expected a square matrix, got shape {array.shape}.")

		array = 0.5 * (array + array.T)
		array.setflags(write=False)
		self._array = array

	@property
	def dimension(self) -> int:
		"""
		The number of rows (and columns) of the matrix.
		"""

		return self._array.shape[0]

	@property
	def array(self) -> np.ndarray:
		"""
		A read-only :class:`numpy.ndarray` view of the entries.
		"""

		return self._array

	def entry(self, i: int, j: int) -> float:
		"""
		Returns the ``(i, j)`` entry of the matrix.

		:param i:
		:param j:
		"""

		return float(self._array[i, j])

	def __array__(self, dtype=None):
		return np.asarray(self._array, dtype=dtype)

	def __repr__(self) -> str:
		return f"{self.__class__.__name__}({self._array.tolist()!r})"


class FDPolicy(NamedTuple):
	"""
	Finite-difference policy.

	:param h: The step size.
	:param order: ``1`` for plain central differences, ``2`` for one level of Richardson extrapolation.
	"""

	#: The step size.
	h: float = 1e-3

	#: ``1`` for plain central differences, ``2`` for Richardson extrapolation.
	order: int = 2

	def validate(self) -> "FDPolicy":
		"""
		Check the policy is usable, and return it.

		:raises ValueError: if the step is not positive or the order is not ``1`` or ``2``.
		"""

		if not self.h > 0:
			raise ValueError(f"The step size must be positive, not {self.h!r}")
		if self.order not in {1, 2}:
			raise ValueError(f"The extrapolation order must be 1 or 2, not {self.order!r}")
		return self

	def scaled(self, factor: float) -> "FDPolicy":
		"""
		Returns a copy of the policy with the step multiplied by ``factor``.

		:param factor:
		"""

		return self._replace(h=self.h * factor)


#: The default finite-difference policy.
DEFAULT_POLICY = FDPolicy()


def _evaluate(f: Callable[[float], ArrayLike], x: float) -> np.ndarray:
	value = np.asarray(f(x), dtype=float)
	if not np.all(np.isfinite(value)):
		raise EvaluationError(f"Non-finite function value at {x!r}", abscissa=x)
	return value


def _central(f: Callable[[float], ArrayLike], x: float, order: int, h: float) -> np.ndarray:
	if order == 1:
		return (_evaluate(f, x + h) - _evaluate(f, x - h)) / (2 * h)
	elif order == 2:
		return (_evaluate(f, x + h) - 2 * _evaluate(f, x) + _evaluate(f, x - h)) / h**2
	elif order == 3:
		return (
				_evaluate(f, x + 2 * h) - 2 * _evaluate(f, x + h) + 2 * _evaluate(f, x - h)
				- _evaluate(f, x - 2 * h)
				) / (2 * h**3)
	else:
		raise ValueError(f"Derivative order must be 1, 2 or 3, not {order!r}")


def fd_derivative(
		f: Callable[[float], ArrayLike],
		x: float,
		order: int = 1,
		policy: FDPolicy = DEFAULT_POLICY,
		) -> ArrayLike:
	"""
	Central-difference estimate of the ``order``-th derivative of ``f`` at ``x``.

	``f`` may return an array, in which case the derivative is taken componentwise.

	.. code-block:: python

		>>> round(fd_derivative(lambda x: x**2, 1.0), 8)
		2.0

	:param f:
	:param x:
	:param order: ``1``, ``2`` or ``3``.
	:param policy:

	:raises curvquot.exceptions.EvaluationError: if ``f`` returns a non-finite value.
	"""

	policy.validate()
	h = policy.h
	coarse = _central(f, x, order, h)

	if policy.order == 1:
		estimate = coarse
	else:
		# the leading error term of every stencil above is O(h²)
		fine = _central(f, x, order, h / 2)
		estimate = (4 * fine - coarse) / 3

	if estimate.ndim == 0:
		return float(estimate)
	return estimate


def fd_directional(
		f: Callable[[np.ndarray], ArrayLike],
		x: np.ndarray,
		direction: np.ndarray,
		policy: FDPolicy = DEFAULT_POLICY,
		) -> ArrayLike:
	"""
	Finite-difference derivative of ``f`` at ``x`` in the direction ``direction``.

	:param f: A function of a point in :math:`\\mathbb{R}^d`.
	:param x:
	:param direction:
	:param policy:
	"""

	x = np.asarray(x, dtype=float)
	direction = np.asarray(direction, dtype=float)
	return fd_derivative(lambda t: f(x + t * direction), 0.0, 1, policy)


def integrate(
		f: Callable[[float], float],
		a: float,
		b: float,
		tol: float = 1e-12,
		limit: int = 200,
		points: Optional[Sequence[float]] = None,
		) -> float:
	"""
	Adaptive quadrature of ``f`` over ``[a, b]``.

	.. code-block:: python

		>>> round(integrate(math.sin, 0, math.pi), 10)
		2.0

	:param f:
	:param a:
	:param b:
	:param tol: Absolute and relative tolerance.
	:param limit: The subdivision budget.
	:param points: Optional interior breakpoints.

	:raises curvquot.exceptions.QuadratureError: if the quadrature does not converge.
	"""

	if a > b:
		raise ValueError(f"Expected a <= b, got [{a}, {b}]")
	if a == b:
		return 0.0

	if points is not None:
		points = [p for p in points if a < p < b] or None

	with warnings.catch_warnings():
		warnings.simplefilter("error", _integrate.IntegrationWarning)
		try:
			value, _ = _integrate.quad(f, a, b, epsabs=tol, epsrel=tol, limit=limit, points=points)
		except _integrate.IntegrationWarning as e:
			raise QuadratureError(f"Quadrature over [{a}, {b}] failed: {e}", interval=(a, b)) from e

	if not math.isfinite(value):
		raise QuadratureError(f"Quadrature over [{a}, {b}] is not finite", interval=(a, b))

	return float(value)


def sym_eig_min(matrix: Union[SymMatrix, np.ndarray]) -> float:
	"""
	Returns the smallest eigenvalue of a symmetric matrix.

	.. code-block:: python

		>>> round(sym_eig_min(SymMatrix([[2, 1], [1, 2]])), 12)
		1.0

	:param matrix:
	"""

	return float(np.linalg.eigvalsh(np.asarray(matrix, dtype=float))[0])


def make_rng(seed: Optional[int] = 0) -> np.random.Generator:
	"""
	Returns a seeded :class:`numpy.random.Generator`.

	All random draws in ``curvquot`` go through generators created here.

	:param seed:
	"""

	return np.random.default_rng(seed)


def random_unit_vector(rng: np.random.Generator, dimension: int) -> np.ndarray:
	"""
	Draw a vector uniformly from the unit sphere in :math:`\\mathbb{R}^d`.

	:param rng:
	:param dimension:
	"""

	while True:
		vector = rng.standard_normal(dimension)
		norm = np.linalg.norm(vector)
		if norm > 1e-8:
			return vector / norm


def safe_norm(vector: np.ndarray) -> float:
	"""
	Euclidean norm which neither underflows nor overflows for extreme component magnitudes.

	:param vector:
	"""

	return math.hypot(*(float(c) for c in np.ravel(vector)))


def metric_orthonormalize(
		metric: np.ndarray,
		vectors: Sequence[np.ndarray],
		tol: float = 1e-12,
		) -> np.ndarray:
	"""
	Gram–Schmidt orthonormalisation with respect to the inner product ``metric``.

	Returns an array whose rows are the orthonormal vectors.

	:param metric: A symmetric positive definite matrix.
	:param vectors:
	:param tol: Vectors whose remaining norm is below this are rejected.

	:raises ValueError: if the vectors are linearly dependent.
	"""

	metric = np.asarray(metric, dtype=float)
	basis = []

	for vector in vectors:
		w = np.array(vector, dtype=float)
		# two passes keep the result orthogonal to working precision
		for _ in range(2):
			for e in basis:
				w = w - (e @ metric @ w) * e
		norm = math.sqrt(max(w @ metric @ w, 0.0))
		if norm < tol:
			raise ValueError("The vectors are linearly dependent.")
		basis.append(w / norm)

	return np.array(basis)
