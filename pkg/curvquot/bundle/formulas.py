#!/usr/bin/env python3
#
#  formulas.py
"""
Closed-form curvature of model bundle metrics, at the zero section and at regular points.

Every formula here has a finite-difference counterpart in :mod:`curvquot.curvature`,
against which it is tested.
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
from typing import NamedTuple, Optional, Sequence, Tuple

# 3rd party
import numpy as np

# this package
from curvquot.bundle._model import ModelBundle, bracket_operator, total_tensor
from curvquot.bundle.forms import v_form, w_form
from curvquot.curvature import ChartMetric, christoffel, curvature_form, riemann
from curvquot.exceptions import DegeneratePlaneError, DomainError, PreconditionError
from curvquot.numerics import FDPolicy, fd_derivative, metric_orthonormalize

__all__ = [
		"Decomposition",
		"RadialDerivativeReport",
		"curvature_at_N",
		"curvature_regular",
		"decompose",
		"radial_derivative_check",
		"radial_fiber_chart",
		"zero_section_oracle",
		]


def _embed(b: ModelBundle, base: Optional[np.ndarray] = None, fiber: Optional[np.ndarray] = None) -> np.ndarray:
	vector = np.zeros(b.dimension)
	if base is not None:
		vector[:b.base_dimension] = base
	if fiber is not None:
		vector[b.base_dimension:] = fiber
	return vector


def _safe_policy(b: ModelBundle) -> FDPolicy:
	# steps must stay below the finest structure of the warp
	return b.policy._replace(h=min(b.policy.h, b.profile.feature_scale / 8))


def curvature_at_N(
		b: ModelBundle,
		p: np.ndarray,
		A: np.ndarray,
		B: np.ndarray,
		X: np.ndarray,
		Y: np.ndarray,
		) -> float:
	"""
	Returns :math:`R(A + X, B + Y, B + Y, A + X)` at the zero-section point ``(p, 0)``.

	This is the base curvature term :math:`R(X, Y, Y, X)` from the finite-difference oracle,
	plus :math:`-G'''(0) V(A, B)`, plus :math:`L\\,W(A, B; X, Y)`,
	plus three times the derivative along the ``A``-ray of the pairing of ``B`` with the bracket of the basic lifts.

	:param b:
	:param p: A base point.
	:param A: A fibre vector.
	:param B: A fibre vector.
	:param X: A base vector.
	:param Y: A base vector.

	:raises curvquot.exceptions.PreconditionError: if :math:`G'''(0)` cannot be evaluated.
	"""

	p = np.asarray(p, dtype=float)
	A = np.asarray(A, dtype=float)
	B = np.asarray(B, dtype=float)
	X = np.asarray(X, dtype=float)
	Y = np.asarray(Y, dtype=float)

	try:
		third = b.profile.derivative(0.0, 3)
	except DomainError as e:
		raise PreconditionError(f"{b.profile.name} has no third derivative at 0", bound="third-derivative") from e

	origin = b.join(p, np.zeros(b.rank))
	g = total_tensor(b, p, np.zeros(b.rank))
	base_term = curvature_form(riemann(b.chart(), origin), _embed(b, base=X), _embed(b, base=Y))

	vertical_a, vertical_b = _embed(b, fiber=A), _embed(b, fiber=B)
	horizontal_x, horizontal_y = _embed(b, base=X), _embed(b, base=Y)

	bracket = bracket_operator(b, p, X, Y)

	def pairing(t: float) -> float:
		v = t * A
		return float(B @ total_tensor(b, p, v)[b.base_dimension:, b.base_dimension:] @ bracket @ v)

	step = _safe_policy(b).scaled(1 / max(float(np.linalg.norm(A)), 1.0))
	ray_derivative = fd_derivative(pairing, 0.0, 1, step) if A.any() else 0.0

	return (
			base_term - third * v_form(vertical_a, vertical_b, g)
			+ b.L * w_form(vertical_a, vertical_b, horizontal_x, horizontal_y, g) + 3 * ray_derivative
			)


def zero_section_oracle(
		b: ModelBundle,
		p: np.ndarray,
		A: np.ndarray,
		B: np.ndarray,
		X: np.ndarray,
		Y: np.ndarray,
		extrapolate: bool = False,
		ray: Sequence[float] = (0.01, 0.02, 0.03, 0.04),
		) -> float:
	"""
	Returns :math:`R(A + X, B + Y, B + Y, A + X)` at ``(p, 0)`` from the finite-difference oracle.

	With ``extrapolate`` the oracle is evaluated at the points ``(p, tA)`` for ``t`` in ``ray``
	and a quadratic in ``t`` is extrapolated to zero, with ``X`` and ``Y`` replaced by their basic lifts.

	:param b:
	:param p:
	:param A:
	:param B:
	:param X:
	:param Y:
	:param extrapolate:
	:param ray:
	"""

	p = np.asarray(p, dtype=float)
	A = np.asarray(A, dtype=float)
	B = np.asarray(B, dtype=float)
	chart = b.chart()

	def value(t: float) -> float:
		v = t * A
		qx = b.connection_along(p, X) @ v
		qy = b.connection_along(p, Y) @ v
		E = b.join(X, A - qx)
		F = b.join(Y, B - qy)
		return curvature_form(riemann(chart, b.join(p, v)), E, F)

	if not extrapolate:
		return value(0.0)

	ts = np.asarray(ray, dtype=float)
	samples = [value(float(t)) for t in ts]
	return float(np.polyfit(ts, samples, 2)[-1])


class Decomposition(NamedTuple):
	"""
	A tangent vector at a regular point written as :math:`a \\partial_r + A + X`,
	with ``A`` tangent to the radial fibre and ``X`` a basic lift.
	"""

	#: The coefficient of :math:`\partial_r`.
	radial: float

	#: The vertical part ``A``, in total coordinates.
	vertical: np.ndarray

	#: The basic part ``X``, in total coordinates.
	basic: np.ndarray

	#: The base vector whose lift is ``X``.
	base: np.ndarray


def decompose(b: ModelBundle, p: np.ndarray, v: np.ndarray, vector: np.ndarray) -> Decomposition:
	"""
	Split a total-space vector at the regular point ``(p, v)``.

	:param b:
	:param p:
	:param v: A nonzero fibre point.
	:param vector: The vector in total-space coordinates.
	"""

	v = np.asarray(v, dtype=float)
	r = float(np.linalg.norm(v))
	if r == 0:
		raise DomainError("Vectors are decomposed at regular points only", point=b.join(p, v))

	vector = np.asarray(vector, dtype=float)
	xi, eta = vector[:b.base_dimension], vector[b.base_dimension:]
	turn = b.connection_along(p, xi) @ v
	unit = v / r

	w = eta + turn
	a = float(w @ unit)
	return Decomposition(
			radial=a,
			vertical=_embed(b, fiber=w - a * unit),
			basic=_embed(b, base=xi, fiber=-turn),
			base=xi.copy(),
			)


def _sphere_frame(angles: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
	# hyperspherical point on the unit sphere and its derivative along each angle
	m = len(angles)
	sines, cosines = np.sin(angles), np.cos(angles)
	point = np.empty(m + 1)
	jacobian = np.zeros((m + 1, m))

	for j in range(m + 1):
		prefix = sines[:min(j, m)]
		last = cosines[j] if j < m else 1.0
		point[j] = np.prod(prefix) * last

		for a in range(min(j, m)):
			factors = prefix.copy()
			factors[a] = cosines[a]
			jacobian[j, a] = np.prod(factors) * last
		if j < m:
			jacobian[j, j] = -np.prod(prefix) * sines[j]

	return point, jacobian


def _reflection_to(u: np.ndarray) -> np.ndarray:
	# orthogonal matrix taking the last basis vector to u
	target = np.zeros_like(u)
	target[-1] = 1.0
	w = target - u
	norm2 = float(w @ w)
	if norm2 < 1e-24:
		return np.eye(len(u))
	return np.eye(len(u)) - 2 * np.outer(w, w) / norm2


def radial_fiber_chart(b: ModelBundle, p: np.ndarray, v: np.ndarray) -> Tuple[ChartMetric, np.ndarray, np.ndarray]:
	"""
	Returns a chart for the induced metric on the radial fibre :math:`\\{|v| = r\\}` through ``(p, v)``.

	The chart coordinates are the base coordinates followed by hyperspherical angles on the fibre sphere,
	rotated so that ``(p, v)`` sits at the equatorial angles.
	Returns the chart, the coordinates of ``(p, v)``, and the differential of the parametrisation there.

	:param b:
	:param p:
	:param v: A nonzero fibre point.
	"""

	p = np.asarray(p, dtype=float)
	v = np.asarray(v, dtype=float)
	r = float(np.linalg.norm(v))
	if b.rank < 2 or r == 0:
		raise DomainError("Radial fibres need rank at least two and a nonzero fibre point", point=b.join(p, v))

	n, k = b.base_dimension, b.rank
	rotation = _reflection_to(v / r)

	def parametrise(y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
		point, frame = _sphere_frame(y[n:])
		jacobian = np.zeros((n + k, n + k - 1))
		jacobian[:n, :n] = np.eye(n)
		jacobian[n:, n:] = r * rotation @ frame
		return b.join(y[:n], r * rotation @ point), jacobian

	def evaluator(y: np.ndarray) -> np.ndarray:
		x, jacobian = parametrise(y)
		return jacobian.T @ total_tensor(b, *b.split(x)) @ jacobian

	def domain(y: np.ndarray) -> bool:
		return b.contains(parametrise(y)[0])

	start = np.concatenate([p, np.full(k - 1, math.pi / 2)])
	chart = ChartMetric(n + k - 1, evaluator, domain, b.policy, name=f"{b.name}/radial-fiber")
	return chart, start, parametrise(start)[1]


def curvature_regular(
		b: ModelBundle,
		p: np.ndarray,
		v: np.ndarray,
		E: np.ndarray,
		F: np.ndarray,
		) -> float:
	"""
	Returns the sectional curvature of the plane spanned by ``E`` and ``F`` at the regular point ``(p, v)``,
	assembled from the closed-form radial, mixed and tangential pieces.

	``E`` and ``F`` are first made orthonormal in the total metric.
	The curvature of the radial fibre itself is taken from the finite-difference oracle on its induced metric.

	:param b:
	:param p:
	:param v: A nonzero fibre point with :math:`L|v|^2 < 1`.
	:param E: A vector in total-space coordinates.
	:param F: A vector in total-space coordinates.

	:raises curvquot.exceptions.DegeneratePlaneError: if ``E`` and ``F`` are linearly dependent.
	"""

	p = np.asarray(p, dtype=float)
	v = np.asarray(v, dtype=float)
	g = total_tensor(b, p, v)
	r = float(np.linalg.norm(v))

	try:
		e, f = metric_orthonormalize(g, [E, F])
	except ValueError as error:
		raise DegeneratePlaneError("The vectors do not span a plane", volume=0.0) from error

	de = decompose(b, p, v, e)
	df = decompose(b, p, v, f)

	a, b_ = de.radial, df.radial
	A, B = de.vertical, df.vertical
	X, Y = de.basic, df.basic

	P, Q = A + X, B + Y
	C = a * B - b_ * A
	Z = a * Y - b_ * X

	value, slope, second, _ = b.profile.jet(r)
	warp_ratio = slope / value
	shrink = 1 - b.L * r**2
	lift_ratio = b.L * r / shrink

	def ip(u: np.ndarray, w: np.ndarray) -> float:
		return float(u @ g @ w)

	radial_term = -second / value * ip(C, C) + (b.L / shrink + lift_ratio**2) * ip(Z, Z)

	bracket = _embed(b, fiber=bracket_operator(b, p, de.base, df.base) @ v)
	mixed_term = -1.5 * (lift_ratio + warp_ratio) * ip(C, bracket)

	chart, start, jacobian = radial_fiber_chart(b, p, v)
	p_coords = np.linalg.lstsq(jacobian, P, rcond=None)[0]
	q_coords = np.linalg.lstsq(jacobian, Q, rcond=None)[0]
	fiber_term = curvature_form(riemann(chart, start), p_coords, q_coords)

	tangential_term = (
			fiber_term - warp_ratio**2 * v_form(A, B, g) - lift_ratio**2 * v_form(X, Y, g)
			+ warp_ratio * lift_ratio * w_form(A, B, X, Y, g)
			)

	return tangential_term + radial_term - 2 * mixed_term


class RadialDerivativeReport(NamedTuple):
	"""
	Covariant derivative of a field along :math:`\\partial_r`, compared with its closed form.
	"""

	#: ``'vertical'`` or ``'basic'``.
	field: str

	#: The radius of the point.
	radius: float

	#: The ratio :math:`(DW/\partial r, W)/(W, W)` from the finite-difference Christoffel symbols.
	ratio: float

	#: The closed-form ratio.
	expected: float

	#: The length of the part of :math:`DW/\partial r` not along ``W``, relative to the length of ``W``.
	residual: float

	#: The component :math:`(DW/\partial r, \partial_r)`.
	radial_component: float


def radial_derivative_check(
		b: ModelBundle,
		p: np.ndarray,
		v: np.ndarray,
		field: str = "vertical",
		generator: Optional[np.ndarray] = None,
		base_vector: Optional[np.ndarray] = None,
		) -> RadialDerivativeReport:
	"""
	Differentiate a vertical turn field :math:`Mv` or a basic lift covariantly along :math:`\\partial_r`.

	The vertical ratio should be :math:`G'(r)/G(r)` and the basic ratio :math:`-Lr/(1 - Lr^2)`.

	:param b:
	:param p:
	:param v: A nonzero fibre point.
	:param field: ``'vertical'`` or ``'basic'``.
	:param generator: The antisymmetric matrix ``M`` of the vertical field.
		Defaults to the rotation in the first coordinate plane of the fibre.
	:param base_vector: The base vector of the basic field. Defaults to the first base coordinate vector.
	"""

	p = np.asarray(p, dtype=float)
	v = np.asarray(v, dtype=float)
	r = float(np.linalg.norm(v))
	if r == 0:
		raise DomainError("The radial derivative is taken at regular points only", point=b.join(p, v))

	unit = v / r
	x = b.join(p, v)
	g = total_tensor(b, p, v)

	if field == "vertical":
		if generator is None:
			generator = np.zeros((b.rank, b.rank))
			generator[0, 1], generator[1, 0] = -1.0, 1.0
		W = _embed(b, fiber=generator @ v)
		along = _embed(b, fiber=generator @ unit)
		value, slope, *_ = b.profile.jet(r)
		expected = slope / value
	elif field == "basic":
		if base_vector is None:
			base_vector = np.eye(b.base_dimension)[0]
		turn = b.connection_along(p, base_vector)
		W = _embed(b, base=base_vector, fiber=-turn @ v)
		along = _embed(b, fiber=-turn @ unit)
		expected = -b.L * r / (1 - b.L * r**2)
	else:
		raise ValueError(f"field must be 'vertical' or 'basic', not {field!r}")

	radial = _embed(b, fiber=unit)
	D = along + np.einsum("lij,i,j->l", christoffel(b.chart(), x), radial, W)

	norm2 = float(W @ g @ W)
	ratio = float(D @ g @ W) / norm2
	rest = D - ratio * W

	return RadialDerivativeReport(
			field=field,
			radius=r,
			ratio=ratio,
			expected=expected,
			residual=math.sqrt(max(float(rest @ g @ rest), 0.0) / norm2),
			radial_component=float(D @ g @ radial),
			)
