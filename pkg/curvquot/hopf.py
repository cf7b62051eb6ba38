#!/usr/bin/env python3
#
#  hopf.py
"""
The Hopf fibrations :math:`S^3 \\to S^2` and :math:`S^7 \\to S^4`, their quotient metrics,
and the homomorphisms they induce from the right action of :math:`Sp(2)`.

Ambient points are real vectors ``(q1, q2)`` whose halves are complex numbers (as ``(re, im)``)
or quaternions (as ``(w, x, y, z)``). The quotient map is

.. math::

	f(q_1, q_2) = \\frac{1}{|x|} \\left( 2 \\bar{q}_1 q_2, |q_1|^2 - |q_2|^2 \\right)

which is constant on the orbits :math:`g \\cdot (q_1, q_2) = (g q_1, g q_2)` of unit scalars ``g``.

.. code-block:: python

	>>> hopf_map(fibration("s7"), np.array([1.0, 0, 0, 0, 0, 0, 0, 0])).tolist()
	[0.0, 0.0, 0.0, 0.0, 1.0]

.. automodulesumm:: curvquot.hopf
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
from typing import Dict, NamedTuple, Optional, Tuple

# 3rd party
import numpy as np
from scipy.linalg import null_space

# this package
from curvquot.curvature import ChartMetric, round_sphere_chart, sectional
from curvquot.exceptions import ConfigError, DomainError, LiftError, PreconditionError, ResidualError
from curvquot.numerics import DEFAULT_POLICY, FDPolicy, fd_directional, hamilton, integrate, make_rng, random_unit_vector

__all__ = [
		"FIBRATIONS",
		"Fibration",
		"FibrationReport",
		"GeodesicLengthReport",
		"ONeillReport",
		"fibration",
		"fibration_suite",
		"hopf_differential",
		"hopf_map",
		"horizontal_space",
		"induced_so5",
		"induced_so5_alg",
		"inverse_stereographic",
		"kernel_defect",
		"left_action",
		"lift_point",
		"lift_vector",
		"oneill_check",
		"orbit_tangent",
		"projected_geodesic",
		"qmat_adjoint",
		"qmat_identity",
		"qmat_mul",
		"quotient_metric_chart",
		"radius_defect",
		"random_sp2",
		"random_sp2_algebra",
		"right_action",
		"sp2_exp",
		"stereographic",
		]

#: Tolerance on :math:`|x| = 1` for operations defined on the unit sphere.
UNIT_TOLERANCE = 1e-8


class Fibration(NamedTuple):
	"""
	One of the two Hopf fibrations.
	"""

	#: ``'complex'`` for :math:`S^3 \to S^2`, ``'quaternionic'`` for :math:`S^7 \to S^4`.
	kind: str

	@property
	def algebra_dimension(self) -> int:
		"""
		The real dimension of the scalars, ``2`` or ``4``.
		"""

		if self.kind == "complex":
			return 2
		elif self.kind == "quaternionic":
			return 4
		else:
			raise ValueError(f"Unknown fibration kind {self.kind!r}")

	@property
	def ambient_dimension(self) -> int:
		"""
		The dimension of the ambient vector space, ``4`` or ``8``.
		"""

		return 2 * self.algebra_dimension

	@property
	def target_dimension(self) -> int:
		"""
		The dimension of the vector space containing the target sphere, ``3`` or ``5``.
		"""

		return self.algebra_dimension + 1

	@property
	def fiber_dimension(self) -> int:
		"""
		The dimension of the orbits, ``1`` or ``3``.
		"""

		return self.algebra_dimension - 1

	def split(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
		"""
		Split an ambient vector into ``(q1, q2)``.

		:param x:
		"""

		x = np.asarray(x, dtype=float)
		if x.shape != (self.ambient_dimension, ):
			raise ValueError(f"Expected a vector of length {self.ambient_dimension}, got shape {x.shape}")
		d = self.algebra_dimension
		return x[:d], x[d:]


#: The fibrations by their command-line names.
FIBRATIONS: Dict[str, Fibration] = {
		"s3": Fibration("complex"),
		"s7": Fibration("quaternionic"),
		}


def fibration(name: str) -> Fibration:
	"""
	Returns the fibration called ``name``.

	:param name: ``'s3'`` or ``'s7'``.

	:raises curvquot.exceptions.ConfigError: if the name is not recognised.
	"""

	try:
		return FIBRATIONS[name]
	except KeyError:
		raise ConfigError(f"Unknown fibration {name!r}; expected one of {sorted(FIBRATIONS)}", field="fibration") from None


# ---------------------------------------------------------------------------
# Scalar arithmetic, shared by both kinds through the embedding ℂ ⊂ ℍ
# ---------------------------------------------------------------------------


def _pad(q: np.ndarray) -> np.ndarray:
	q = np.asarray(q, dtype=float)
	if q.shape[-1] == 4:
		return q
	widths = [(0, 0)] * (q.ndim - 1) + [(0, 4 - q.shape[-1])]
	return np.pad(q, widths)


def _mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
	d = np.shape(a)[-1]
	return hamilton(_pad(a), _pad(b))[..., :d]


def _conj(q: np.ndarray) -> np.ndarray:
	q = np.array(q, dtype=float)
	q[..., 1:] *= -1
	return q


def _require_unit(x: np.ndarray) -> np.ndarray:
	x = np.asarray(x, dtype=float)
	if abs(float(np.linalg.norm(x)) - 1) > UNIT_TOLERANCE:
		raise DomainError(f"Expected a unit vector, got norm {np.linalg.norm(x)!r}", point=x)
	return x


def _cone_numerator(fb: Fibration, x: np.ndarray) -> np.ndarray:
	q1, q2 = fb.split(x)
	return np.concatenate([2 * _mul(_conj(q1), q2), [q1 @ q1 - q2 @ q2]])


def hopf_map(fb: Fibration, x: np.ndarray) -> np.ndarray:
	"""
	Returns :math:`f(x)`, extended to a cone by homogeneity so that :math:`|f(x)| = |x|` and :math:`f(0) = 0`.

	:param fb:
	:param x: An ambient vector.
	"""

	x = np.asarray(x, dtype=float)
	radius = float(np.linalg.norm(x))
	if radius == 0:
		return np.zeros(fb.target_dimension)
	return _cone_numerator(fb, x) / radius


def hopf_differential(fb: Fibration, x: np.ndarray) -> np.ndarray:
	"""
	Returns the Jacobian matrix of :func:`~.hopf_map` at a nonzero ``x``, of shape ``(target, ambient)``.

	:param fb:
	:param x:
	"""

	x = np.asarray(x, dtype=float)
	radius = float(np.linalg.norm(x))
	if radius == 0:
		raise DomainError("The cone map is not differentiable at the origin", point=x)

	q1, q2 = fb.split(x)
	d = fb.algebra_dimension
	basis = np.eye(fb.ambient_dimension)
	v1, v2 = basis[:, :d], basis[:, d:]

	# one row per ambient basis vector
	numerator_rows = np.concatenate(
			[2 * (_mul(_conj(v1), q2) + _mul(_conj(q1), v2)), (2 * (v1 @ q1 - v2 @ q2))[:, None]],
			axis=1,
			)
	numerator = _cone_numerator(fb, x)
	return numerator_rows.T / radius - np.outer(numerator, x) / radius**3


def left_action(fb: Fibration, g: np.ndarray, x: np.ndarray) -> np.ndarray:
	"""
	Returns :math:`g \\cdot (q_1, q_2) = (g q_1, g q_2)`.

	:param fb:
	:param g: A unit scalar.
	:param x:
	"""

	q1, q2 = fb.split(x)
	return np.concatenate([_mul(g, q1), _mul(g, q2)])


def orbit_tangent(fb: Fibration, x: np.ndarray) -> np.ndarray:
	"""
	Returns the vectors :math:`\\xi \\cdot x` for the imaginary units :math:`\\xi`, which span the tangent space of the orbit.

	The rows of the result are the vectors.

	:param fb:
	:param x: A unit ambient vector.
	"""

	x = _require_unit(x)
	units = np.eye(fb.algebra_dimension)[1:]
	return np.stack([left_action(fb, unit, x) for unit in units])


def horizontal_space(fb: Fibration, x: np.ndarray) -> np.ndarray:
	"""
	Returns an orthonormal basis, as rows, of the complement of the orbit and of ``x`` itself.

	:param fb:
	:param x: A unit ambient vector.
	"""

	x = _require_unit(x)
	return null_space(np.vstack([x, orbit_tangent(fb, x)])).T


def lift_vector(fb: Fibration, x: np.ndarray, vector: np.ndarray, tol: float = 1e-9) -> np.ndarray:
	"""
	Returns the horizontal vector at ``x`` which :func:`~.hopf_map` takes to ``vector``.

	:param fb:
	:param x: A unit ambient vector.
	:param vector: A vector tangent to the target sphere at :math:`f(x)`.
	:param tol:

	:raises curvquot.exceptions.LiftError: if ``vector`` is not in the image of the horizontal space.
	"""

	horizontal = horizontal_space(fb, x)
	image = hopf_differential(fb, x) @ horizontal.T
	coefficients, *_ = np.linalg.lstsq(image, vector, rcond=None)
	residual = float(np.linalg.norm(image @ coefficients - vector))
	if residual > tol * max(1.0, float(np.linalg.norm(vector))):
		raise LiftError(f"Could not lift a tangent vector at {x.tolist()} (residual {residual:.3g})", point=x)
	return horizontal.T @ coefficients


def lift_point(fb: Fibration, target: np.ndarray, tol: float = 1e-12, max_iter: int = 8) -> np.ndarray:
	"""
	Returns a unit ambient vector ``x`` with :math:`f(x) =` ``target``.

	The seed :math:`q_1 = \\sqrt{(1 + s)/2}`, :math:`q_2 = w / 2q_1` for ``target = (w, s)`` is refined
	by Newton steps within the horizontal space.

	:param fb:
	:param target: A point of the unit target sphere.
	:param tol:
	:param max_iter:

	:raises curvquot.exceptions.LiftError: at the antipode of :math:`(0, \\ldots, 0, 1)`, or if Newton's method stalls.
	"""

	target = np.asarray(target, dtype=float)
	d = fb.algebra_dimension
	w, s = target[:d], float(target[-1])

	if 1 + s < 1e-8:
		raise LiftError("Cannot lift the antipode of the chart centre", point=target)

	q1 = np.zeros(d)
	q1[0] = math.sqrt((1 + s) / 2)
	x = np.concatenate([q1, w / (2 * q1[0])])
	x /= np.linalg.norm(x)

	for _ in range(max_iter):
		residual = hopf_map(fb, x) - target
		if np.linalg.norm(residual) <= tol:
			return x
		horizontal = horizontal_space(fb, x)
		step, *_ = np.linalg.lstsq(hopf_differential(fb, x) @ horizontal.T, -residual, rcond=None)
		x = x + horizontal.T @ step
		x /= np.linalg.norm(x)

	residual = float(np.linalg.norm(hopf_map(fb, x) - target))
	if residual > tol:
		raise LiftError(f"Newton's method did not converge (residual {residual:.3g})", point=target)
	return x


# ---------------------------------------------------------------------------
# Quotient metric
# ---------------------------------------------------------------------------


def stereographic(point: np.ndarray) -> np.ndarray:
	"""
	Returns the stereographic coordinates of a point of a unit sphere, projecting from :math:`(0, \\ldots, 0, -1)`.

	:param point:
	"""

	point = np.asarray(point, dtype=float)
	denominator = 1 + point[-1]
	if denominator < 1e-12:
		raise DomainError("The projection point has no stereographic coordinates", point=point)
	return point[:-1] / denominator


def inverse_stereographic(y: np.ndarray) -> np.ndarray:
	"""
	Returns the point of the unit sphere with stereographic coordinates ``y``.

	:param y:
	"""

	y = np.asarray(y, dtype=float)
	rho = float(y @ y)
	return np.concatenate([2 * y, [1 - rho]]) / (1 + rho)


def _inverse_stereographic_jacobian(y: np.ndarray) -> np.ndarray:
	rho = float(y @ y)
	top = 2 * np.eye(len(y)) / (1 + rho) - 4 * np.outer(y, y) / (1 + rho)**2
	return np.vstack([top, -4 * y / (1 + rho)**2])


def _stereographic_pushforward(point: np.ndarray, vector: np.ndarray) -> np.ndarray:
	denominator = 1 + point[-1]
	return vector[:-1] / denominator - point[:-1] * vector[-1] / denominator**2


def quotient_metric_chart(
		fb: Fibration,
		chart_radius: float = 2.0,
		policy: FDPolicy = DEFAULT_POLICY,
		) -> ChartMetric:
	"""
	The quotient metric of the unit sphere in stereographic coordinates on the target sphere.

	At a chart point the coordinate vectors are lifted horizontally through :func:`~.lift_point`,
	and the metric is the Gram matrix of the lifts.

	:param fb:
	:param chart_radius: The chart is the ball of this radius, which excludes the antipode of its centre.
	:param policy:
	"""

	def evaluator(y: np.ndarray) -> np.ndarray:
		x = lift_point(fb, inverse_stereographic(y))
		jacobian = _inverse_stereographic_jacobian(y)
		lifts = np.column_stack([lift_vector(fb, x, column) for column in jacobian.T])
		return lifts.T @ lifts

	def domain(y: np.ndarray) -> bool:
		return float(np.linalg.norm(y)) <= chart_radius

	return ChartMetric(fb.algebra_dimension, evaluator, domain, policy, name=f"quotient:{fb.kind}")


def radius_defect(fb: Fibration, points) -> float:
	"""
	Returns the largest difference between the quotient metric and the sphere of radius ``1/2``,
	:math:`(1 + |y|^2)^{-2} I` in these coordinates, over ``points``.

	:param fb:
	:param points: Chart points.
	"""

	chart = quotient_metric_chart(fb)
	worst = 0.0
	for y in points:
		y = np.asarray(y, dtype=float)
		expected = np.eye(len(y)) / (1 + y @ y)**2
		worst = max(worst, float(np.abs(chart.tensor(y) - expected).max()))
	return worst


class GeodesicLengthReport(NamedTuple):
	"""
	The projection of the great circle :math:`c(\\phi) = (\\cos\\phi, \\sin\\phi)`, :math:`0 \\le \\phi \\le \\pi`.
	"""

	#: The length of the projected curve in the quotient metric.
	length: float

	#: :math:`|f(c(\pi)) - f(c(0))|`.
	closure_defect: float

	#: The largest component of :math:`c'` along the orbits.
	horizontality_defect: float


def _great_circle(fb: Fibration, phi: float) -> Tuple[np.ndarray, np.ndarray]:
	d = fb.algebra_dimension
	point = np.zeros(fb.ambient_dimension)
	velocity = np.zeros(fb.ambient_dimension)
	point[0], point[d] = math.cos(phi), math.sin(phi)
	velocity[0], velocity[d] = -math.sin(phi), math.cos(phi)
	return point, velocity


def projected_geodesic(fb: Fibration, grid: int = 64) -> GeodesicLengthReport:
	"""
	Measure the projection of a horizontal great circle.

	:param fb:
	:param grid: The number of points at which horizontality is checked.
	"""

	def speed(phi: float) -> float:
		point, velocity = _great_circle(fb, phi)
		image = hopf_differential(fb, point) @ velocity
		return float(np.linalg.norm(lift_vector(fb, point, image)))

	length = integrate(speed, 0.0, math.pi)
	closure = float(np.linalg.norm(hopf_map(fb, _great_circle(fb, math.pi)[0]) - hopf_map(fb, _great_circle(fb, 0)[0])))

	horizontality = 0.0
	for phi in np.linspace(0, math.pi, grid):
		point, velocity = _great_circle(fb, float(phi))
		horizontality = max(horizontality, float(np.abs(orbit_tangent(fb, point) @ velocity).max()))

	return GeodesicLengthReport(length=length, closure_defect=closure, horizontality_defect=horizontality)


class ONeillReport(NamedTuple):
	"""
	Sectional curvatures of matched planes upstairs and downstairs.
	"""

	#: Curvatures of horizontal planes in the unit sphere.
	ambient: Tuple[float, ...]

	#: Curvatures of their images in the quotient.
	quotient: Tuple[float, ...]

	@property
	def min_gap(self) -> float:
		"""
		The smallest difference ``quotient - ambient``, which is never negative.
		"""

		return min(q - a for q, a in zip(self.quotient, self.ambient))


def _chart_friendly_point(fb: Fibration, rng: np.random.Generator) -> np.ndarray:
	while True:
		x = random_unit_vector(rng, fb.ambient_dimension)
		if x[-1] > -0.5 and hopf_map(fb, x)[-1] > -0.5:
			return x


def oneill_check(fb: Fibration, samples: int = 20, seed: Optional[int] = 0) -> ONeillReport:
	"""
	Compare the sectional curvature of random horizontal planes of the unit sphere
	with that of their images under the quotient map, both from the finite-difference oracle.

	:param fb:
	:param samples:
	:param seed:
	"""

	rng = make_rng(seed)
	ambient_chart = round_sphere_chart(1.0, fb.ambient_dimension - 1)
	quotient_chart = quotient_metric_chart(fb)
	ambient, quotient = [], []

	for _ in range(samples):
		x = _chart_friendly_point(fb, rng)
		horizontal = horizontal_space(fb, x)
		coefficients, _ = np.linalg.qr(rng.standard_normal((len(horizontal), 2)))
		X, Y = horizontal.T @ coefficients[:, 0], horizontal.T @ coefficients[:, 1]

		u = stereographic(x)
		ambient.append(
				sectional(ambient_chart, u, _stereographic_pushforward(x, X), _stereographic_pushforward(x, Y))
				)

		image = hopf_map(fb, x)
		differential = hopf_differential(fb, x)
		quotient.append(
				sectional(
						quotient_chart,
						stereographic(image),
						_stereographic_pushforward(image, differential @ X),
						_stereographic_pushforward(image, differential @ Y),
						)
				)

	return ONeillReport(ambient=tuple(ambient), quotient=tuple(quotient))


class FibrationReport(NamedTuple):
	"""
	Result of :func:`~.fibration_suite`.
	"""

	#: The largest :math:`|f(g \cdot x) - f(x)|`.
	invariance: float

	#: The largest :math:`\big||f(x)| - |x|\big|`.
	norm: float

	#: The largest :math:`|f(tx) - tf(x)|`.
	homogeneity: float

	#: The largest finite-difference derivative of ``f`` along an orbit.
	orbit_annihilation: float

	#: The largest inner product between a horizontal vector and ``x`` or an orbit vector.
	horizontal_orthogonality: float

	#: The largest :math:`\big||df(v)| - 2|v|\big|` over horizontal unit vectors.
	horizontal_stretch: float


def fibration_suite(fb: Fibration, samples: int = 1000, seed: Optional[int] = 0) -> FibrationReport:
	"""
	Check the algebraic properties of the quotient map at random points.

	:param fb:
	:param samples:
	:param seed:
	"""

	rng = make_rng(seed)
	invariance = norm = homogeneity = annihilation = orthogonality = stretch = 0.0

	for _ in range(samples):
		x = random_unit_vector(rng, fb.ambient_dimension)
		g = random_unit_vector(rng, fb.algebra_dimension)
		scale = float(rng.uniform(0.1, 10))
		image = hopf_map(fb, x)

		invariance = max(invariance, float(np.abs(hopf_map(fb, left_action(fb, g, x)) - image).max()))
		norm = max(norm, abs(float(np.linalg.norm(hopf_map(fb, scale * x))) - scale))
		homogeneity = max(homogeneity, float(np.abs(hopf_map(fb, scale * x) - scale * image).max()))

	# the differential checks are costlier, so use fewer points
	for _ in range(max(1, samples // 20)):
		x = random_unit_vector(rng, fb.ambient_dimension)
		orbit = orbit_tangent(fb, x)
		horizontal = horizontal_space(fb, x)

		for vector in orbit:
			derivative = fd_directional(lambda z: hopf_map(fb, z), x, vector)
			annihilation = max(annihilation, float(np.abs(derivative).max()))

		orthogonality = max(orthogonality, float(np.abs(np.vstack([x, orbit]) @ horizontal.T).max()))
		differential = hopf_differential(fb, x)
		for vector in horizontal:
			stretch = max(stretch, abs(float(np.linalg.norm(differential @ vector)) - 2))

	return FibrationReport(
			invariance=invariance,
			norm=norm,
			homogeneity=homogeneity,
			orbit_annihilation=annihilation,
			horizontal_orthogonality=orthogonality,
			horizontal_stretch=stretch,
			)


# ---------------------------------------------------------------------------
# 2 × 2 matrices over the scalars, and the induced homomorphisms
# ---------------------------------------------------------------------------


def qmat_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
	"""
	Product of two scalar matrices of shape ``(n, n, d)``.

	:param A:
	:param B:
	"""

	return _mul(np.asarray(A)[:, :, None, :], np.asarray(B)[None, :, :, :]).sum(axis=1)


def qmat_adjoint(A: np.ndarray) -> np.ndarray:
	"""
	Returns the conjugate transpose :math:`\\bar{A}^T`.

	:param A:
	"""

	return _conj(np.asarray(A)).transpose(1, 0, 2)


def qmat_identity(fb: Fibration, size: int = 2) -> np.ndarray:
	"""
	Returns the identity matrix.

	:param fb:
	:param size:
	"""

	identity = np.zeros((size, size, fb.algebra_dimension))
	identity[np.arange(size), np.arange(size), 0] = 1
	return identity


def sp2_exp(B: np.ndarray, terms: int = 24) -> np.ndarray:
	"""
	Matrix exponential of a scalar matrix, by scaling and squaring a Taylor series.

	:param B:
	:param terms:
	"""

	B = np.asarray(B, dtype=float)
	size = float(np.linalg.norm(B))
	squarings = max(0, math.ceil(math.log2(size / 0.5))) if size > 0 else 0
	scaled = B / 2**squarings

	identity = np.zeros_like(B)
	identity[np.arange(B.shape[0]), np.arange(B.shape[0]), 0] = 1

	result = identity.copy()
	term = identity.copy()
	for n in range(1, terms + 1):
		term = qmat_mul(term, scaled) / n
		result = result + term

	for _ in range(squarings):
		result = qmat_mul(result, result)

	return result


def random_sp2_algebra(fb: Fibration, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
	"""
	Returns a random matrix ``B`` with :math:`B + \\bar{B}^T = 0`.

	:param fb:
	:param rng:
	:param scale:
	"""

	M = scale * rng.standard_normal((2, 2, fb.algebra_dimension))
	return (M - qmat_adjoint(M)) / 2


def random_sp2(fb: Fibration, rng: np.random.Generator) -> np.ndarray:
	"""
	Returns a random matrix ``A`` with :math:`A \\bar{A}^T = I`.

	:param fb:
	:param rng:
	"""

	return sp2_exp(random_sp2_algebra(fb, rng))


def right_action(fb: Fibration, x: np.ndarray, A: np.ndarray) -> np.ndarray:
	"""
	Returns :math:`x \\cdot A`, treating ``x = (q1, q2)`` as a row vector.

	:param fb:
	:param x:
	:param A:
	"""

	rows = np.stack(fb.split(x))
	return _mul(rows[:, None, :], np.asarray(A, dtype=float)).sum(axis=0).ravel()


def _sample_points(fb: Fibration, samples: int, seed: Optional[int]) -> np.ndarray:
	if samples < 25:
		raise ValueError(f"At least 25 sample points are required, not {samples!r}")
	rng = make_rng(seed)
	return np.stack([random_unit_vector(rng, fb.ambient_dimension) for _ in range(samples)])


def _fit(images: np.ndarray, values: np.ndarray, tol: float, what: str) -> np.ndarray:
	solution, *_ = np.linalg.lstsq(images, values, rcond=None)
	residual = float(np.abs(images @ solution - values).max())
	if residual > tol:
		raise ResidualError(f"The {what} fit left a residual of {residual:.3g}", residual=residual)
	return solution


def induced_so5(
		fb: Fibration,
		A: np.ndarray,
		samples: int = 32,
		seed: Optional[int] = 0,
		tol: float = 1e-8,
		) -> np.ndarray:
	"""
	Returns the rotation :math:`\\gamma(A)` with :math:`f(x \\cdot A) = f(x) \\gamma(A)`, fitted by least squares.

	For the quaternionic fibration this is the homomorphism :math:`Sp(2) \\to SO(5)`;
	the complex fibration gives :math:`U(2) \\to SO(3)` in the same way.

	:param fb:
	:param A: A matrix of shape ``(2, 2, d)`` with :math:`A \\bar{A}^T = I`.
	:param samples: The number of sample points, at least 25.
	:param seed:
	:param tol: The largest acceptable residual.

	:raises curvquot.exceptions.PreconditionError: if ``A`` is not unitary to ``1e-10``.
	:raises curvquot.exceptions.ResidualError: if no linear map fits.
	"""

	A = np.asarray(A, dtype=float)
	defect = float(np.abs(qmat_mul(A, qmat_adjoint(A)) - qmat_identity(fb)).max())
	if defect > 1e-10:
		raise PreconditionError(f"The matrix is not unitary (defect {defect:.3g})", bound="sp2")

	points = _sample_points(fb, samples, seed)
	images = np.stack([hopf_map(fb, x) for x in points])
	moved = np.stack([hopf_map(fb, right_action(fb, x, A)) for x in points])
	return _fit(images, moved, tol, "group")


def induced_so5_alg(
		fb: Fibration,
		B: np.ndarray,
		samples: int = 32,
		seed: Optional[int] = 0,
		tol: float = 1e-6,
		) -> np.ndarray:
	"""
	Returns :math:`\\gamma_*(B)` with :math:`df_x(x \\cdot B) = f(x) \\gamma_*(B)`,
	fitted by least squares to finite-difference differentials.

	:param fb:
	:param B: A matrix of shape ``(2, 2, d)`` with :math:`B + \\bar{B}^T = 0`.
	:param samples: The number of sample points, at least 25.
	:param seed:
	:param tol: The largest acceptable residual.

	:raises curvquot.exceptions.PreconditionError: if ``B`` is not antihermitian to ``1e-10``.
	:raises curvquot.exceptions.ResidualError: if no linear map fits.
	"""

	B = np.asarray(B, dtype=float)
	defect = float(np.abs(B + qmat_adjoint(B)).max())
	if defect > 1e-10:
		raise PreconditionError(f"The matrix is not antihermitian (defect {defect:.3g})", bound="sp2-algebra")

	points = _sample_points(fb, samples, seed)
	images = np.stack([hopf_map(fb, x) for x in points])
	derivatives = np.stack([
			fd_directional(lambda z: hopf_map(fb, z), x, right_action(fb, x, B)) for x in points
			])
	return _fit(images, derivatives, tol, "algebra")


def kernel_defect(fb: Fibration, samples: int = 32, seed: Optional[int] = 0) -> float:
	"""
	Returns :math:`\\max|\\gamma(-I) - I|`; the matrix :math:`-I` acts trivially on the target sphere.

	:param fb:
	:param samples:
	:param seed:
	"""

	gamma = induced_so5(fb, -qmat_identity(fb), samples=samples, seed=seed)
	return float(np.abs(gamma - np.eye(fb.target_dimension)).max())
