#!/usr/bin/env python3
#
#  _model.py
"""
Model vector bundle metrics over a base chart.
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
from typing import Callable, NamedTuple, Tuple

# 3rd party
import numpy as np

# this package
from curvquot.curvature import ChartMetric
from curvquot.exceptions import DomainError, PreconditionError
from curvquot.numerics import DEFAULT_POLICY, FDPolicy, SymMatrix, fd_derivative, fd_directional
from curvquot.smoothing import SmoothFunction1D

__all__ = [
		"ExtractedConnection",
		"ModelBundle",
		"TotalVector",
		"basic_lift",
		"bracket_operator",
		"bracket_vertical",
		"connection_derivatives",
		"extract_Q",
		"fiber_tensor",
		"lift_bracket_fd",
		"total_metric",
		"total_tensor",
		"vertical_projection",
		]

#: Maps a base point to the array of shape ``(n, k, k)`` of connection matrices.
Connection = Callable[[np.ndarray], np.ndarray]


class ModelBundle(NamedTuple):
	"""
	A metric on the total space of the trivial rank-``k`` bundle over a base chart.

	In coordinates ``(p, v)`` the metric makes the basic lift :math:`(X, -Q_p(X) v)` of a base vector
	orthogonal to the fibre, with squared length :math:`(1 - L|v|^2) g_N(X, X)`,
	and restricts to each fibre as the rotationally symmetric metric with warp ``profile``.
	"""

	#: The base metric :math:`g_N`.
	base: ChartMetric

	#: The fibre rank ``k``.
	rank: int

	#: The connection matrices, antisymmetric, one per base coordinate direction.
	connection: Connection

	#: The fibre warp profile.
	profile: SmoothFunction1D

	#: The constant ``L``.
	L: float = 0.0

	#: Base points are drawn from the ball of this radius.
	base_radius: float = 0.5

	#: The finite-difference policy for derivatives of the connection and the total metric.
	policy: FDPolicy = DEFAULT_POLICY

	#: A short description.
	name: str = "bundle"

	@property
	def base_dimension(self) -> int:
		"""
		The base dimension ``n``.
		"""

		return self.base.dimension

	@property
	def dimension(self) -> int:
		"""
		The total dimension ``n + k``.
		"""

		return self.base.dimension + self.rank

	def split(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
		"""
		Split total-space coordinates into the base point and fibre point.

		:param x:
		"""

		x = np.asarray(x, dtype=float)
		return x[:self.base_dimension], x[self.base_dimension:]

	def join(self, p: np.ndarray, v: np.ndarray) -> np.ndarray:
		"""
		Join a base point and fibre point into total-space coordinates.

		:param p:
		:param v:
		"""

		return np.concatenate([np.asarray(p, dtype=float), np.asarray(v, dtype=float)])

	def contains(self, x: np.ndarray) -> bool:
		"""
		Returns whether ``(p, v)`` is a point where the metric is defined.

		:param x:
		"""

		p, v = self.split(x)
		r2 = float(v @ v)
		return self.base.contains(p) and self.L * r2 < 1 and r2 <= self.profile.domain[1]**2

	def connection_at(self, p: np.ndarray) -> np.ndarray:
		"""
		Returns the array of connection matrices at ``p``.

		:param p:
		"""

		matrices = np.asarray(self.connection(np.asarray(p, dtype=float)), dtype=float)
		expected = (self.base_dimension, self.rank, self.rank)
		if matrices.shape != expected:
			raise ValueError(f"{self.name}: connection has shape {matrices.shape}, expected {expected}")
		return matrices

	def connection_along(self, p: np.ndarray, X: np.ndarray) -> np.ndarray:
		"""
		Returns :math:`Q_p(X)`.

		:param p:
		:param X: A base vector.
		"""

		return np.einsum("i,iab->ab", np.asarray(X, dtype=float), self.connection_at(p))

	def chart(self) -> ChartMetric:
		"""
		Returns the total metric as a :class:`~.ChartMetric` on :math:`\\mathbb{R}^{n+k}`.
		"""

		return ChartMetric(
				self.dimension,
				lambda x: total_tensor(self, *self.split(x)),
				domain=self.contains,
				policy=self.policy,
				name=self.name,
				)

	def with_profile(self, profile: SmoothFunction1D) -> "ModelBundle":
		"""
		Returns the same bundle with a different fibre warp.

		:param profile:
		"""

		return self._replace(profile=profile)

	def with_L(self, L: float) -> "ModelBundle":
		"""
		Returns the same bundle with a different constant ``L``.

		:param L:
		"""

		return self._replace(L=float(L))


class TotalVector(NamedTuple):
	"""
	A tangent vector to the total space, split into base and fibre coordinates.
	"""

	#: The base component.
	base: np.ndarray

	#: The fibre component.
	fiber: np.ndarray

	def as_array(self) -> np.ndarray:
		"""
		Returns the vector in total-space coordinates.
		"""

		return np.concatenate([np.asarray(self.base, dtype=float), np.asarray(self.fiber, dtype=float)])

	@classmethod
	def from_array(cls, array: np.ndarray, base_dimension: int) -> "TotalVector":
		"""
		Split a total-space coordinate vector.

		:param array:
		:param base_dimension:
		"""

		array = np.asarray(array, dtype=float)
		return cls(array[:base_dimension], array[base_dimension:])


def fiber_tensor(profile: SmoothFunction1D, v: np.ndarray) -> np.ndarray:
	"""
	Returns the rotationally symmetric fibre metric with warp ``profile`` at ``v``.

	At the origin this is the identity.

	:param profile:
	:param v:
	"""

	v = np.asarray(v, dtype=float)
	r = float(np.linalg.norm(v))
	identity = np.eye(len(v))
	if r == 0:
		return identity

	projection = np.outer(v, v) / r**2
	return projection + (profile(r) / r)**2 * (identity - projection)


def total_tensor(b: ModelBundle, p: np.ndarray, v: np.ndarray) -> np.ndarray:
	"""
	Returns the total metric components at ``(p, v)`` as an array.

	:param b:
	:param p:
	:param v:

	:raises curvquot.exceptions.DomainError: if :math:`L|v|^2 \\ge 1`.
	"""

	p = np.asarray(p, dtype=float)
	v = np.asarray(v, dtype=float)
	r2 = float(v @ v)
	if b.L * r2 >= 1:
		raise DomainError(f"{b.name}: L·r² = {b.L * r2} is not below 1", point=b.join(p, v))

	n = b.base_dimension
	fiber = fiber_tensor(b.profile, v)
	turns = np.einsum("iab,b->ia", b.connection_at(p), v)  # rows are Q_i v
	mixed = turns @ fiber  # rows are T Q_i v
	base = mixed @ turns.T + (1 - b.L * r2) * b.base.tensor(p)

	g = np.empty((b.dimension, b.dimension))
	g[:n, :n] = base
	g[:n, n:] = mixed
	g[n:, :n] = mixed.T
	g[n:, n:] = fiber
	return g


def total_metric(b: ModelBundle, p: np.ndarray, v: np.ndarray) -> SymMatrix:
	"""
	Returns the total metric at ``(p, v)``.

	The fibre block is the warped fibre metric at ``v``,
	the mixed block pairs the base direction :math:`e_i` with :math:`Q_i v` through the fibre metric,
	and the base block is :math:`(Q_i v, Q_j v) + (1 - L|v|^2) g_N`.

	:param b:
	:param p:
	:param v:

	:raises curvquot.exceptions.DomainError: if :math:`L|v|^2 \\ge 1`.
	"""

	return SymMatrix(total_tensor(b, p, v))


def vertical_projection(b: ModelBundle, p: np.ndarray, v: np.ndarray, X: np.ndarray) -> np.ndarray:
	"""
	Returns the turn field value :math:`Q_p(X) v`.

	:param b:
	:param p:
	:param v:
	:param X: A base vector.
	"""

	return b.connection_along(p, X) @ np.asarray(v, dtype=float)


def basic_lift(b: ModelBundle, p: np.ndarray, v: np.ndarray, X: np.ndarray) -> TotalVector:
	"""
	Returns the horizontal lift :math:`(X, -Q_p(X) v)` of a base vector, which is orthogonal to the fibre.

	:param b:
	:param p:
	:param v:
	:param X: A base vector.
	"""

	X = np.asarray(X, dtype=float)
	return TotalVector(X.copy(), -vertical_projection(b, p, v, X))


def connection_derivatives(b: ModelBundle, p: np.ndarray) -> np.ndarray:
	"""
	Returns ``dQ`` with ``dQ[j, i]`` the derivative of :math:`Q_i` along the base coordinate :math:`p^j`.

	:param b:
	:param p:
	"""

	p = np.asarray(p, dtype=float)
	return np.stack([
			fd_derivative(lambda t, e=e: b.connection_at(p + t * e), 0.0, 1, b.policy)  # type: ignore[misc]
			for e in np.eye(b.base_dimension)
			])


def bracket_operator(b: ModelBundle, p: np.ndarray, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
	"""
	Returns the matrix :math:`\\partial_Y Q(X) - \\partial_X Q(Y) + [Q(Y), Q(X)]`, which maps
	a fibre point ``v`` to the fibre part of the bracket of the basic lifts of ``X`` and ``Y`` at ``(p, v)``.

	:param b:
	:param p:
	:param X:
	:param Y:
	"""

	X = np.asarray(X, dtype=float)
	Y = np.asarray(Y, dtype=float)
	dQ = connection_derivatives(b, p)
	qx = b.connection_along(p, X)
	qy = b.connection_along(p, Y)

	return (
			np.einsum("j,i,jiab->ab", Y, X, dQ) - np.einsum("j,i,jiab->ab", X, Y, dQ) + qy @ qx - qx @ qy
			)


def bracket_vertical(b: ModelBundle, p: np.ndarray, v: np.ndarray, i: int, j: int) -> np.ndarray:
	"""
	Returns the fibre part of the bracket of the basic lifts of the base coordinate vectors
	:math:`e_i` and :math:`e_j` at ``(p, v)``, namely :math:`(\\partial_j Q_i - \\partial_i Q_j + [Q_j, Q_i]) v`.

	:param b:
	:param p:
	:param v:
	:param i:
	:param j:
	"""

	basis = np.eye(b.base_dimension)
	return bracket_operator(b, p, basis[i], basis[j]) @ np.asarray(v, dtype=float)


def lift_bracket_fd(
		U: Callable[[np.ndarray], np.ndarray],
		W: Callable[[np.ndarray], np.ndarray],
		x: np.ndarray,
		policy: FDPolicy = DEFAULT_POLICY,
		) -> np.ndarray:
	"""
	Finite-difference Lie bracket :math:`[U, W] = DW \\cdot U - DU \\cdot W` of two vector fields at ``x``.

	:param U:
	:param W:
	:param x:
	:param policy:
	"""

	x = np.asarray(x, dtype=float)
	u = np.asarray(U(x), dtype=float)
	w = np.asarray(W(x), dtype=float)
	return np.asarray(fd_directional(W, x, u, policy)) - np.asarray(fd_directional(U, x, w, policy))


class ExtractedConnection(NamedTuple):
	"""
	Connection matrices recovered from an adapted ambient metric.
	"""

	#: The antisymmetrised matrices, shape ``(n, k, k)``.
	matrices: np.ndarray

	#: The largest entry of the symmetric part of the raw matrices.
	asymmetry_defect: float

	#: The largest deviation of the metric at the zero section from block-diagonal form with identity fibre block.
	adaptation_defect: float


def extract_Q(
		ambient: ChartMetric,
		p: np.ndarray,
		base_dimension: int,
		tol: float = 1e-6,
		) -> ExtractedConnection:
	"""
	Recover the connection matrices from a metric adapted to the zero section.

	The ambient coordinates are ``(p, v)`` with the base the plane ``v = 0``.
	The matrices are defined by :math:`\\langle Q_p(X) A, B \\rangle = A (B, X)`,
	the derivative along the fibre direction ``A`` of the pairing of the constant fibre field ``B``
	with the base coordinate field ``X``.

	:param ambient:
	:param p:
	:param base_dimension: The dimension ``n`` of the base.
	:param tol: Allowed deviation of the metric at ``(p, 0)`` from the adapted form.

	:raises curvquot.exceptions.PreconditionError: if the mixed block at ``(p, 0)`` is not zero
		or the fibre block is not the identity.
	"""

	n = int(base_dimension)
	k = ambient.dimension - n
	x = np.concatenate([np.asarray(p, dtype=float), np.zeros(k)])

	g = ambient.tensor(x)
	adaptation = max(float(np.abs(g[:n, n:]).max(initial=0.0)), float(np.abs(g[n:, n:] - np.eye(k)).max()))
	if adaptation > tol:
		raise PreconditionError(
				f"{ambient.name}: metric at the zero section is not adapted (defect {adaptation})",
				bound="adapted-metric",
				)

	raw = np.empty((n, k, k))
	for a, direction in enumerate(np.eye(k)):
		step = np.concatenate([np.zeros(n), direction])
		# column a of Q_i is the derivative along v_a of the pairing of e_i with the fibre directions
		derivative = fd_derivative(lambda t: ambient.tensor(x + t * step)[:n, n:], 0.0, 1, ambient.policy)
		raw[:, :, a] = derivative

	symmetric = 0.5 * (raw + np.swapaxes(raw, 1, 2))
	return ExtractedConnection(
			matrices=0.5 * (raw - np.swapaxes(raw, 1, 2)),
			asymmetry_defect=float(np.abs(symmetric).max()),
			adaptation_defect=adaptation,
			)
