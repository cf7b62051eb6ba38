#!/usr/bin/env python3
#
#  curvature.py
"""
Finite-difference curvature of a metric given in a coordinate chart.

Every quantity here is computed directly from the coordinate formulae for the
Christoffel symbols and the Riemann tensor, so it serves as an independent
reference for the closed-form curvature expressions elsewhere in ``curvquot``.

.. automodulesumm:: curvquot.curvature
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
import logging
import math
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

# 3rd party
import numpy as np

# this package
from curvquot.exceptions import DegeneratePlaneError, DomainError, GeodesicExitError, SingularMetricError
from curvquot.numerics import DEFAULT_POLICY, FDPolicy, SymMatrix, fd_derivative, make_rng, sym_eig_min

__all__ = [
		"ChartMetric",
		"CurvatureReport",
		"GeodesicPath",
		"Sampler",
		"ball_sampler",
		"bianchi_defect",
		"box_sampler",
		"christoffel",
		"curvature_form",
		"euclidean_chart",
		"geodesic",
		"metric_derivatives",
		"min_sectional_scan",
		"plane_volume",
		"polar_plane_chart",
		"riemann",
		"round_sphere_chart",
		"sectional",
		"shell_sampler",
		"symmetry_defect",
		]

_log = logging.getLogger(__name__)

#: A function drawing sample points from a region, given a random generator.
Sampler = Callable[[np.random.Generator], Sequence[np.ndarray]]

#: Planes whose Gram determinant falls below this are rejected.
DEGENERATE_VOLUME = 1e-10

_GOLDEN = (1 + math.sqrt(5)) / 2


class ChartMetric:
	"""
	A Riemannian metric on an open subset of :math:`\\mathbb{R}^d`, given by its component matrix.

	:param dimension: The chart dimension ``d``.
	:param evaluator: Maps a point to the ``d × d`` matrix :math:`g_{ij}(x)`.
	:param domain: Predicate accepting the points at which ``evaluator`` may be called.
		Defaults to accepting every point.
	:param policy: The finite-difference policy used for derivatives of the metric.
	:param name: A short description, for logs and reports.
	"""

	#: The chart dimension.
	dimension: int

	#: The finite-difference policy used for derivatives of the metric.
	policy: FDPolicy

	#: A short description.
	name: str

	def __init__(
			self,
			dimension: int,
			evaluator: Callable[[np.ndarray], Any],
			domain: Optional[Callable[[np.ndarray], bool]] = None,
			policy: FDPolicy = DEFAULT_POLICY,
			name: str = "chart",
			):
		if dimension < 1:
			raise ValueError(f"The chart dimension must be positive, not {dimension!r}")

		self.dimension = int(dimension)
		self._evaluator = evaluator
		self._domain = domain
		self.policy = policy.validate()
		self.name = str(name)

	def __repr__(self) -> str:
		return f"<{self.__class__.__name__} {self.name!r} (d={self.dimension})>"

	def contains(self, x: np.ndarray) -> bool:
		"""
		Returns whether ``x`` lies in the chart domain.

		:param x:
		"""

		if self._domain is None:
			return True
		return bool(self._domain(np.asarray(x, dtype=float)))

	def tensor(self, x: np.ndarray) -> np.ndarray:
		"""
		Returns the symmetrised component matrix at ``x``.

		:param x:

		:raises curvquot.exceptions.DomainError: if ``x`` is outside the chart domain.
		"""

		x = np.asarray(x, dtype=float)
		if not self.contains(x):
			raise DomainError(f"{self.name}: point {x.tolist()} is outside the chart domain", point=x)

		g = np.asarray(self._evaluator(x), dtype=float)
		if g.shape != (self.dimension, self.dimension):
			raise ValueError(f"{self.name}: expected a {self.dimension}×{self.dimension} matrix, got {g.shape}")
		return 0.5 * (g + g.T)

	def metric(self, x: np.ndarray) -> SymMatrix:
		"""
		Returns the metric at ``x`` as a :class:`~.SymMatrix`.

		:param x:
		"""

		return SymMatrix(self.tensor(x))

	def inner(self, x: np.ndarray, u: np.ndarray, v: np.ndarray) -> float:
		"""
		Returns :math:`g_x(u, v)`.

		:param x:
		:param u:
		:param v:
		"""

		return float(np.asarray(u) @ self.tensor(x) @ np.asarray(v))

	def with_policy(self, policy: FDPolicy) -> "ChartMetric":
		"""
		Returns the same metric with a different finite-difference policy.

		:param policy:
		"""

		return ChartMetric(self.dimension, self._evaluator, self._domain, policy, self.name)

	def scaled(self, factor: float) -> "ChartMetric":
		"""
		Returns the homothetic metric :math:`c^2 g`.

		:param factor: The scale ``c``.
		"""

		evaluator = self._evaluator
		square = float(factor)**2
		return ChartMetric(
				self.dimension,
				lambda x: square * np.asarray(evaluator(x), dtype=float),
				self._domain,
				self.policy,
				f"{factor}²·{self.name}",
				)


def _checked_inverse(m: ChartMetric, x: np.ndarray, g: np.ndarray) -> np.ndarray:
	scale = max(float(np.abs(g).max()), 1e-300)
	if sym_eig_min(g) <= 1e-14 * scale:
		raise SingularMetricError(f"{m.name}: metric is not positive definite at {x.tolist()}", point=x)
	return np.linalg.inv(g)


def metric_derivatives(m: ChartMetric, x: np.ndarray) -> np.ndarray:
	"""
	Returns the array ``dg`` with ``dg[k, i, j]`` the partial derivative of :math:`g_{ij}` along :math:`x^k`.

	:param m:
	:param x:
	"""

	x = np.asarray(x, dtype=float)
	basis = np.eye(m.dimension)
	return np.stack([
			fd_derivative(lambda t, e=e: m.tensor(x + t * e), 0.0, 1, m.policy)  # type: ignore[misc]
			for e in basis
			])


def christoffel(m: ChartMetric, x: np.ndarray) -> np.ndarray:
	"""
	Returns the Christoffel symbols at ``x`` as an array ``gamma`` with
	``gamma[l, i, j]`` the symbol :math:`\\Gamma^l_{ij}`.

	:param m:
	:param x: A point at least ``2h`` inside the domain.

	:raises curvquot.exceptions.SingularMetricError: if the metric at ``x`` is not positive definite.
	"""

	x = np.asarray(x, dtype=float)
	inverse = _checked_inverse(m, x, m.tensor(x))
	dg = metric_derivatives(m, x)

	# lowered[m, i, j] = ∂_i g_jm + ∂_j g_im - ∂_m g_ij
	lowered = np.einsum("ijm->mij", dg) + np.einsum("jim->mij", dg) - dg
	gamma = 0.5 * np.einsum("lm,mij->lij", inverse, lowered)
	return 0.5 * (gamma + np.swapaxes(gamma, 1, 2))


def _christoffel_derivatives(m: ChartMetric, x: np.ndarray) -> np.ndarray:
	basis = np.eye(m.dimension)
	return np.stack([
			fd_derivative(lambda t, e=e: christoffel(m, x + t * e), 0.0, 1, m.policy)  # type: ignore[misc]
			for e in basis
			])


def riemann(m: ChartMetric, x: np.ndarray) -> np.ndarray:
	"""
	Returns the lowered Riemann tensor at ``x``.

	The entry ``R[a, b, c, d]`` is :math:`g(R(\\partial_a, \\partial_b)\\partial_c, \\partial_d)`,
	so that :math:`R(X, Y, Y, X) > 0` for every plane of a round sphere.

	:param m:
	:param x: A point at least ``4h`` inside the domain.

	:raises curvquot.exceptions.SingularMetricError: if the metric at ``x`` is not positive definite.
	"""

	x = np.asarray(x, dtype=float)
	gamma = christoffel(m, x)
	d_gamma = _christoffel_derivatives(m, x)
	g = m.tensor(x)

	# upper[i, j, k, l] is the component along ∂_l of R(∂_j, ∂_k)∂_i
	upper = (
			np.einsum("jlik->ijkl", d_gamma) - np.einsum("klij->ijkl", d_gamma)
			+ np.einsum("lja,aik->ijkl", gamma, gamma) - np.einsum("lka,aij->ijkl", gamma, gamma)
			)
	return np.einsum("cabl,ld->abcd", upper, g)


def plane_volume(g: np.ndarray, X: np.ndarray, Y: np.ndarray) -> float:
	"""
	Returns the Gram determinant :math:`g(X,X)g(Y,Y) - g(X,Y)^2`.

	:param g: The metric components.
	:param X:
	:param Y:
	"""

	g = np.asarray(g, dtype=float)
	return float((X @ g @ X) * (Y @ g @ Y) - (X @ g @ Y)**2)


def curvature_form(tensor: np.ndarray, X: np.ndarray, Y: np.ndarray) -> float:
	"""
	Returns :math:`R(X, Y, Y, X)` for a lowered curvature tensor.

	:param tensor: The output of :func:`~.riemann`.
	:param X:
	:param Y:
	"""

	return float(np.einsum("abcd,a,b,c,d->", tensor, X, Y, Y, X))


def sectional(m: ChartMetric, x: np.ndarray, X: np.ndarray, Y: np.ndarray) -> float:
	"""
	Returns the sectional curvature of the plane spanned by ``X`` and ``Y`` at ``x``.

	:param m:
	:param x:
	:param X:
	:param Y:

	:raises curvquot.exceptions.DegeneratePlaneError: if ``X`` and ``Y`` do not span a plane.
	"""

	X = np.asarray(X, dtype=float)
	Y = np.asarray(Y, dtype=float)
	volume = plane_volume(m.tensor(x), X, Y)
	if volume <= DEGENERATE_VOLUME:
		raise DegeneratePlaneError(f"Plane volume {volume} is degenerate", volume=volume)

	return curvature_form(riemann(m, x), X, Y) / volume


def bianchi_defect(tensor: np.ndarray) -> float:
	"""
	Returns the largest component of :math:`R_{ijkl} + R_{iklj} + R_{iljk}`,
	relative to the largest component of ``tensor`` (or absolute, if that is below ``1``).

	:param tensor: The output of :func:`~.riemann`.
	"""

	tensor = np.asarray(tensor, dtype=float)
	cyclic = tensor + np.einsum("iklj->ijkl", tensor) + np.einsum("iljk->ijkl", tensor)
	return float(np.abs(cyclic).max() / max(1.0, float(np.abs(tensor).max())))


def symmetry_defect(tensor: np.ndarray) -> float:
	"""
	Returns the largest violation of :math:`R_{ijkl} = -R_{jikl} = R_{klij}`,
	relative in the same way as :func:`~.bianchi_defect`.

	:param tensor: The output of :func:`~.riemann`.
	"""

	tensor = np.asarray(tensor, dtype=float)
	scale = max(1.0, float(np.abs(tensor).max()))
	antisymmetry = np.abs(tensor + np.einsum("jikl->ijkl", tensor)).max()
	pairs = np.abs(tensor - np.einsum("klij->ijkl", tensor)).max()
	return float(max(antisymmetry, pairs) / scale)


class CurvatureReport(NamedTuple):
	"""
	Outcome of a minimum sectional curvature scan.
	"""

	#: The number of sample points.
	samples: int

	#: The number of planes tried at each point, before refinement.
	planes_per_point: int

	#: The smallest sectional curvature found, or ``nan`` for an empty region.
	min_value: float

	#: The point at which the minimum was found.
	witness_point: Tuple[float, ...]

	#: A basis of the plane at which the minimum was found.
	witness_plane: Tuple[Tuple[float, ...], Tuple[float, ...]]

	#: The number of refinement iterations performed.
	refine_iterations: int

	#: The value the minimum must exceed for the scan to pass.
	threshold: float

	#: The smallest value found at each sample point, before refinement.
	point_minima: Tuple[float, ...] = ()

	#: Whether the sampler produced no points.
	empty: bool = False

	@property
	def passed(self) -> bool:
		"""
		Whether the region was nonempty and the minimum exceeds the threshold.
		"""

		return not self.empty and self.min_value > self.threshold

	def as_dict(self, check: Optional[str] = None) -> Dict[str, Any]:
		"""
		Returns a JSON-serialisable representation of the report.

		:param check: The name of the check the scan belongs to.
			If given it is included under the ``check`` key, which is otherwise absent.
		"""

		data: Dict[str, Any] = {} if check is None else {"check": check}
		data.update({
				"samples": self.samples,
				"planes_per_point": self.planes_per_point,
				"min_value": None if self.empty else self.min_value,
				"witness_point": list(self.witness_point),
				"witness_plane": [list(v) for v in self.witness_plane],
				"refine_iterations": self.refine_iterations,
				"tolerance": self.threshold,
				"passed": self.passed,
				"empty": self.empty,
				})
		return data


def _whitening(g: np.ndarray) -> np.ndarray:
	# columns of the result are g-orthonormal
	return np.linalg.inv(np.linalg.cholesky(g)).T


def _deterministic_pairs(dimension: int, count: int) -> List[Tuple[np.ndarray, np.ndarray]]:
	pairs = []
	for i in range(dimension):
		for j in range(i + 1, dimension):
			pairs.append((np.eye(dimension)[i], np.eye(dimension)[j]))

	powers = _GOLDEN**np.arange(1, 2 * dimension + 1)
	for k in range(1, count + 1):
		phases = np.mod(k * powers, 1.0) - 0.5
		pairs.append((phases[:dimension], phases[dimension:]))

	return pairs


def _orthonormal_pair(u: np.ndarray, v: np.ndarray) -> Optional[Tuple[np.ndarray, np.ndarray]]:
	q, r = np.linalg.qr(np.column_stack([u, v]))
	if abs(r[0, 0]) < 1e-8 or abs(r[1, 1]) < 1e-8:
		return None
	return q[:, 0], q[:, 1]


def _refine(
		tensor: np.ndarray,
		pair: Tuple[np.ndarray, np.ndarray],
		iterations: int,
		) -> Tuple[float, Tuple[np.ndarray, np.ndarray]]:
	x, y = pair
	value = curvature_form(tensor, x, y)
	step = 0.5

	for _ in range(iterations):
		grad_x = 2 * np.einsum("abcd,b,c,d->a", tensor, y, y, x)
		grad_y = 2 * np.einsum("abcd,a,c,d->b", tensor, x, y, x)

		while step > 1e-12:
			candidate = _orthonormal_pair(x - step * grad_x, y - step * grad_y)
			if candidate is not None:
				trial = curvature_form(tensor, *candidate)
				if trial < value:
					value, (x, y) = trial, candidate
					step *= 2
					break
			step /= 2
		else:
			break

	return value, (x, y)


def min_sectional_scan(
		m: ChartMetric,
		sampler: Sampler,
		planes_per_point: int = 8,
		refine: int = 25,
		seed: Optional[int] = 0,
		threshold: float = 0.0,
		logger: Optional[logging.Logger] = None,
		) -> CurvatureReport:
	"""
	Search for the smallest sectional curvature of ``m`` over the points drawn by ``sampler``.

	At each point a fixed set of planes (the coordinate planes and a golden-ratio sequence)
	is tried together with seeded random planes.
	The worst plane found is then improved by projected gradient descent over orthonormal pairs.
	Ties are broken by the lexicographic order of the point coordinates,
	so the result does not depend on the order in which points are visited.

	:param m:
	:param sampler: Draws the sample points.
	:param planes_per_point: The number of planes tried at each point, in addition to the coordinate planes.
	:param refine: The number of descent iterations applied to the worst plane.
	:param seed: Seed for the plane and point sampling.
	:param threshold: The value the minimum must exceed for the scan to pass.
	:param logger: Optional logger. Defaults to this module's logger.
	:no-default logger:
	"""

	if logger is None:
		logger_ = _log
	else:
		logger_ = logger

	rng = make_rng(seed)
	points = [np.asarray(p, dtype=float) for p in sampler(rng)]
	d = m.dimension

	if not points:
		logger_.warning("%s: the sampled region is empty", m.name)
		return CurvatureReport(
				samples=0,
				planes_per_point=planes_per_point,
				min_value=math.nan,
				witness_point=(),
				witness_plane=((), ()),
				refine_iterations=0,
				threshold=threshold,
				empty=True,
				)

	fixed = _deterministic_pairs(d, planes_per_point // 2)
	point_minima = []
	best: Optional[Tuple[float, Tuple[float, ...], np.ndarray, Tuple[np.ndarray, np.ndarray], np.ndarray]] = None

	for point in points:
		tensor = riemann(m, point)
		frame = _whitening(m.tensor(point))
		whitened = np.einsum("abcd,ai,bj,ck,dl->ijkl", tensor, frame, frame, frame, frame)

		candidates = list(fixed)
		for _ in range(planes_per_point - planes_per_point // 2):
			candidates.append((rng.standard_normal(d), rng.standard_normal(d)))

		local: Optional[Tuple[float, Tuple[np.ndarray, np.ndarray]]] = None
		for u, v in candidates:
			pair = _orthonormal_pair(u, v) if d > 1 else None
			if pair is None:
				continue
			value = curvature_form(whitened, *pair)
			if local is None or value < local[0]:
				local = (value, pair)

		if local is None:
			continue

		point_minima.append(local[0])
		key = (local[0], tuple(point.tolist()))
		if best is None or key < best[:2]:
			best = (local[0], key[1], whitened, local[1], frame)

	if best is None:
		raise DegeneratePlaneError(f"{m.name}: no planes exist in dimension {d}")

	value, point, whitened, pair, frame = best
	refined, pair = _refine(whitened, pair, refine)
	minimum = min(value, refined)

	witness = (tuple((frame @ pair[0]).tolist()), tuple((frame @ pair[1]).tolist()))
	logger_.debug("%s: minimum sectional curvature %.6g at %s", m.name, minimum, point)

	return CurvatureReport(
			samples=len(points),
			planes_per_point=planes_per_point,
			min_value=float(minimum),
			witness_point=point,
			witness_plane=witness,
			refine_iterations=refine,
			threshold=threshold,
			point_minima=tuple(point_minima),
			)


class GeodesicPath(NamedTuple):
	"""
	A discretised geodesic.
	"""

	#: The parameter values.
	times: np.ndarray

	#: The points, one row per parameter value.
	points: np.ndarray

	#: The velocities, one row per parameter value.
	velocities: np.ndarray

	def speeds(self, m: ChartMetric) -> np.ndarray:
		"""
		Returns the metric speed at each parameter value.

		:param m:
		"""

		return np.array([math.sqrt(m.inner(x, v, v)) for x, v in zip(self.points, self.velocities)])

	def length(self, m: ChartMetric) -> float:
		"""
		Returns the metric length of the path, by the trapezoidal rule on the speeds.

		:param m:
		"""

		speeds = self.speeds(m)
		return float(0.5 * np.sum((speeds[1:] + speeds[:-1]) * np.diff(self.times)))


def geodesic(m: ChartMetric, x0: np.ndarray, v0: np.ndarray, T: float, steps: int) -> GeodesicPath:
	"""
	Integrate the geodesic equation from ``x0`` with initial velocity ``v0`` using the classical
	fourth-order Runge–Kutta scheme.

	:param m:
	:param x0:
	:param v0:
	:param T: The final parameter value.
	:param steps: The number of steps.

	:raises curvquot.exceptions.GeodesicExitError: if the path leaves the chart domain.
	"""

	if steps < 1:
		raise ValueError("At least one step is required.")

	def rhs(x: np.ndarray, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
		if not m.contains(x):
			raise GeodesicExitError(f"{m.name}: geodesic left the chart at {x.tolist()}", point=x)
		return v, -np.einsum("kij,i,j->k", christoffel(m, x), v, v)

	dt = T / steps
	x = np.asarray(x0, dtype=float)
	v = np.asarray(v0, dtype=float)
	points, velocities = [x], [v]

	for _ in range(steps):
		k1x, k1v = rhs(x, v)
		k2x, k2v = rhs(x + dt / 2 * k1x, v + dt / 2 * k1v)
		k3x, k3v = rhs(x + dt / 2 * k2x, v + dt / 2 * k2v)
		k4x, k4v = rhs(x + dt * k3x, v + dt * k3v)
		x = x + dt / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
		v = v + dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
		if not m.contains(x):
			raise GeodesicExitError(f"{m.name}: geodesic left the chart at {x.tolist()}", point=x, time=len(points) * dt)
		points.append(x)
		velocities.append(v)

	return GeodesicPath(np.linspace(0, T, steps + 1), np.array(points), np.array(velocities))


# ---------------------------------------------------------------------------
# Reference charts and samplers
# ---------------------------------------------------------------------------


def euclidean_chart(dimension: int, policy: FDPolicy = DEFAULT_POLICY) -> ChartMetric:
	"""
	The flat metric on :math:`\\mathbb{R}^d`.

	:param dimension:
	:param policy:
	"""

	identity = np.eye(dimension)
	return ChartMetric(dimension, lambda x: identity, policy=policy, name=f"euclidean{dimension}")


def round_sphere_chart(radius: float = 1.0, dimension: int = 2, policy: FDPolicy = DEFAULT_POLICY) -> ChartMetric:
	"""
	The round sphere of the given radius in stereographic coordinates,
	:math:`g = 4\\rho^2 (1 + |x|^2)^{-2} \\delta`, with sectional curvature :math:`1/\\rho^2`.

	:param radius:
	:param dimension:
	:param policy:
	"""

	identity = np.eye(dimension)

	def evaluator(x: np.ndarray) -> np.ndarray:
		return 4 * radius**2 / (1 + x @ x)**2 * identity

	return ChartMetric(dimension, evaluator, policy=policy, name=f"sphere{dimension}(radius={radius})")


def polar_plane_chart(policy: FDPolicy = DEFAULT_POLICY) -> ChartMetric:
	"""
	The flat plane in polar coordinates, :math:`g = \\mathrm{diag}(1, x_1^2)`, for :math:`x_1 > 0`.

	:param policy:
	"""

	return ChartMetric(
			2,
			lambda x: np.diag([1.0, x[0]**2]),
			domain=lambda x: x[0] > 0,
			policy=policy,
			name="polar-plane",
			)


def box_sampler(lower: Sequence[float], upper: Sequence[float], count: int) -> Sampler:
	"""
	Returns a sampler drawing ``count`` points uniformly from a box.

	:param lower:
	:param upper:
	:param count:
	"""

	lo = np.asarray(lower, dtype=float)
	hi = np.asarray(upper, dtype=float)

	def sampler(rng: np.random.Generator) -> List[np.ndarray]:
		return [lo + (hi - lo) * rng.random(lo.shape) for _ in range(count)]

	return sampler


def shell_sampler(r_lo: float, r_hi: float, dimension: int, count: int) -> Sampler:
	"""
	Returns a sampler drawing ``count`` points from the shell :math:`r_{lo} \\le |x| \\le r_{hi}`,
	with radii spread evenly and uniformly random directions.

	:param r_lo:
	:param r_hi:
	:param dimension:
	:param count:
	"""

	def sampler(rng: np.random.Generator) -> List[np.ndarray]:
		points = []
		for k in range(count):
			radius = r_lo + (r_hi - r_lo) * (k + rng.random()) / count
			direction = rng.standard_normal(dimension)
			points.append(radius * direction / np.linalg.norm(direction))
		return points

	return sampler


def ball_sampler(radius: float, dimension: int, count: int) -> Sampler:
	"""
	Returns a sampler drawing ``count`` points uniformly from the ball of the given radius.

	:param radius:
	:param dimension:
	:param count:
	"""

	def sampler(rng: np.random.Generator) -> List[np.ndarray]:
		points = []
		for _ in range(count):
			direction = rng.standard_normal(dimension)
			scale = radius * rng.random()**(1 / dimension)
			points.append(scale * direction / np.linalg.norm(direction))
		return points

	return sampler
