#!/usr/bin/env python3
#
#  gluing.py
"""
Slowly varying cutoffs and the blending of two metrics which agree to first order along a submanifold.

.. automodulesumm:: curvquot.gluing
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
import functools
import logging
import math
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple, Union

# 3rd party
import numpy as np

# this package
from curvquot.bundle import ModelBundle, bundle_sampler, model_bundle, select_L
from curvquot.curvature import ChartMetric, CurvatureReport, Sampler, metric_derivatives, min_sectional_scan, riemann
from curvquot.exceptions import BudgetExhaustedError, DomainError, JetMismatchError
from curvquot.numerics import fd_derivative, make_rng, random_unit_vector
from curvquot.smoothing import smooth_step

__all__ = [
		"Cutoff",
		"CutoffReport",
		"DEFAULT_SCHEDULE",
		"GlueDemoReport",
		"GlueScene",
		"RadialCutoffReport",
		"blend_defect",
		"blend_weight",
		"blended_riemann",
		"build_cutoff",
		"canonical_scene",
		"convexity_defect",
		"glue_metrics",
		"glued_positivity_demo",
		"radial_cutoff_check",
		"verify_cutoff",
		]

_log = logging.getLogger(__name__)

#: The values of :math:`\varepsilon` tried by :func:`~.glued_positivity_demo`, in order.
DEFAULT_SCHEDULE: Tuple[float, ...] = (0.2, 0.1, 0.05, 0.02)


@functools.lru_cache(1)
def _step_derivative_bound() -> float:
	grid = np.linspace(1, 2, 20001)
	_, first, second, _ = smooth_step().jet(grid)
	# slightly inflated so the grid maximum bounds the true maximum
	return 1.001 * float(max(np.abs(first).max(), np.abs(second).max()))


class Cutoff(NamedTuple):
	"""
	The function :math:`\\varphi(x) = f(x^\\lambda / \\delta)`, equal to ``1`` for :math:`x \\le \\delta_1`
	and ``0`` for :math:`x \\ge \\delta_2`, with :math:`|x\\varphi'| \\le \\varepsilon` and :math:`|x^2\\varphi''| \\le \\varepsilon`.

	The thresholds are held as logarithms since :math:`\\delta_1` is far below the smallest positive float
	for small :math:`\\varepsilon`.
	"""

	#: The target :math:`\varepsilon`.
	eps: float

	#: The exponent :math:`\lambda`.
	lam: float

	#: :math:`\log \delta`.
	log_delta: float

	#: The bound on :math:`|f'|` and :math:`|f''|`.
	N: float

	@property
	def log_delta1(self) -> float:
		"""
		:math:`\\log \\delta_1`, below which :math:`\\varphi = 1`.
		"""

		return self.log_delta / self.lam

	@property
	def log_delta2(self) -> float:
		"""
		:math:`\\log \\delta_2`, above which :math:`\\varphi = 0`.
		"""

		return (self.log_delta + math.log(2)) / self.lam

	@property
	def delta1(self) -> float:
		"""
		:math:`\\delta_1`, which may underflow to zero.
		"""

		return math.exp(self.log_delta1)

	@property
	def delta2(self) -> float:
		"""
		:math:`\\delta_2`.
		"""

		return math.exp(self.log_delta2)

	def _argument(self, log_x: np.ndarray) -> np.ndarray:
		with np.errstate(over="ignore"):
			return np.exp(self.lam * log_x - self.log_delta)

	def scaled_derivatives(self, log_x: Union[float, np.ndarray]) -> Tuple:
		"""
		Returns :math:`\\varphi`, :math:`x\\varphi'` and :math:`x^2\\varphi''` at :math:`x = e^{\\log x}`.

		:param log_x:
		"""

		log_x = np.asarray(log_x, dtype=float)
		y = np.clip(self._argument(log_x), 0, 3)
		value, first, second, _ = smooth_step().jet(y)
		lam = self.lam
		return value, lam * y * first, lam**2 * y**2 * second + lam * (lam - 1) * y * first

	def value_log(self, log_x: Union[float, np.ndarray]):
		"""
		Returns :math:`\\varphi(e^{\\log x})`.

		:param log_x:
		"""

		return self.scaled_derivatives(log_x)[0]

	def __call__(self, x: Union[float, np.ndarray]):
		x = np.asarray(x, dtype=float)
		if np.any(x < 0):
			raise DomainError("The cutoff is defined for x >= 0", point=x)
		with np.errstate(divide="ignore"):
			value = self.value_log(np.log(x))
		return float(value) if np.ndim(value) == 0 else value


def build_cutoff(eps: float) -> Cutoff:
	"""
	Construct the cutoff for ``eps``.

	With ``N`` bounding :math:`|f'|` and :math:`|f''|`, the exponent solves :math:`2N\\lambda(1 + \\lambda) = \\varepsilon`
	(capped at ``1/2``) and :math:`\\delta = \\varepsilon^\\lambda / 2`, so that :math:`\\delta_2 = \\varepsilon`.

	:param eps: A positive number.
	"""

	if not eps > 0:
		raise DomainError(f"eps must be positive, got {eps!r}", point=eps)

	N = _step_derivative_bound()
	lam = min(0.5, (-1 + math.sqrt(1 + 2 * eps / N)) / 2)
	return Cutoff(eps=float(eps), lam=lam, log_delta=lam * math.log(eps) - math.log(2), N=N)


class CutoffReport(NamedTuple):
	"""
	Result of :func:`~.verify_cutoff`.
	"""

	#: The target :math:`\varepsilon`.
	eps: float

	#: The largest :math:`|x\varphi'(x)|` on the grid.
	max_first: float

	#: The largest :math:`|x^2\varphi''(x)|` on the grid.
	max_second: float

	#: Whether :math:`0 \le \varphi \le 1` on the grid.
	bounded: bool

	#: Whether :math:`\varphi = 1` at every grid point below :math:`\delta_1`.
	flat_below: bool

	#: Whether :math:`\varphi = 0` at every grid point above :math:`\delta_2`.
	zero_above: bool

	#: Whether :math:`0 < \delta_1 < \delta_2 \le \varepsilon`, compared in logarithms.
	ordered: bool

	@property
	def passed(self) -> bool:
		"""
		Whether every property holds, including both derivative bounds.
		"""

		within_bounds = self.max_first <= self.eps and self.max_second <= self.eps
		return within_bounds and self.bounded and self.flat_below and self.zero_above and self.ordered


def verify_cutoff(c: Cutoff, grid: int = 4001) -> CutoffReport:
	"""
	Check the cutoff on a grid equally spaced in :math:`\\log x`, spanning a margin either side of the thresholds.

	:param c:
	:param grid:
	"""

	margin = 0.25 * (c.log_delta2 - c.log_delta1) + 1
	log_x = np.linspace(c.log_delta1 - margin, c.log_delta2 + margin, grid)
	value, first, second = c.scaled_derivatives(log_x)

	return CutoffReport(
			eps=c.eps,
			max_first=float(np.abs(first).max()),
			max_second=float(np.abs(second).max()),
			bounded=bool(np.all((value >= 0) & (value <= 1))),
			flat_below=bool(np.all(value[log_x <= c.log_delta1] == 1)),
			zero_above=bool(np.all(value[log_x >= c.log_delta2] == 0)),
			ordered=c.log_delta1 < c.log_delta2 <= math.log(c.eps) + 1e-12,
			)


class RadialCutoffReport(NamedTuple):
	"""
	Result of :func:`~.radial_cutoff_check`.
	"""

	#: The largest :math:`|x||\nabla\psi(x)|` over the samples.
	max_gradient: float

	#: The largest :math:`|x|^2 \|\nabla^2\psi(x)\|` over the samples, using the spectral norm.
	max_hessian: float

	#: The largest :math:`|\psi(Rx) - \psi(x)|` over the samples and random rotations ``R``.
	rotation_defect: float

	#: The number of samples.
	samples: int

	#: The target :math:`\varepsilon`.
	eps: float


def _random_rotation(rng: np.random.Generator, dimension: int) -> np.ndarray:
	q, r = np.linalg.qr(rng.standard_normal((dimension, dimension)))
	return q * np.sign(np.diag(r))


def radial_cutoff_check(
		c: Cutoff,
		dimension: int,
		samples: int = 1000,
		seed: Optional[int] = 0,
		h: float = 1e-3,
		) -> RadialCutoffReport:
	"""
	Check the gradient and Hessian bounds of :math:`\\psi(x) = \\varphi(|x|)` on :math:`\\mathbb{R}^n` by finite differences.

	At a sample :math:`x = \\rho u` the function :math:`\\chi(z) = \\psi(\\rho z)` is differentiated at ``u``,
	since :math:`\\nabla\\chi(u) = \\rho\\nabla\\psi(x)` and :math:`\\nabla^2\\chi(u) = \\rho^2\\nabla^2\\psi(x)`.
	This keeps the steps meaningful at radii far below the smallest positive float.

	:param c:
	:param dimension:
	:param samples:
	:param seed:
	:param h: Finite-difference step in the scaled variable.
	"""

	if dimension < 1:
		raise ValueError(f"The dimension must be positive, not {dimension!r}")

	rng = make_rng(seed)
	span = c.log_delta2 - c.log_delta1
	basis = np.eye(dimension)

	max_gradient = max_hessian = rotation_defect = 0.0

	for _ in range(samples):
		log_radius = rng.uniform(c.log_delta1 - 0.1 * span, c.log_delta2 + 0.1 * span)
		u = random_unit_vector(rng, dimension)

		def chi(z: np.ndarray) -> float:
			return float(c.value_log(log_radius + math.log(np.linalg.norm(z))))

		gradient = np.array([fd_derivative(lambda t, e=e: chi(u + t * e), 0.0) for e in basis])

		hessian = np.empty((dimension, dimension))
		for i in range(dimension):
			for j in range(i, dimension):
				ei, ej = h * basis[i], h * basis[j]
				mixed = (chi(u + ei + ej) - chi(u + ei - ej) - chi(u - ei + ej) + chi(u - ei - ej)) / (4 * h**2)
				hessian[i, j] = hessian[j, i] = mixed

		rotation = _random_rotation(rng, dimension)
		rotated = rotation @ u

		max_gradient = max(max_gradient, float(np.linalg.norm(gradient)))
		max_hessian = max(max_hessian, float(np.linalg.norm(hessian, 2)))
		rotation_defect = max(rotation_defect, abs(chi(rotated) - chi(u)))

	return RadialCutoffReport(
			max_gradient=max_gradient,
			max_hessian=max_hessian,
			rotation_defect=rotation_defect,
			samples=samples,
			eps=c.eps,
			)


def blend_weight(c: Cutoff, r: float) -> float:
	"""
	Returns the weight :math:`\\varphi(r)` given to the metric near the submanifold.

	:param c:
	:param r: The distance to the submanifold.
	"""

	r = float(r)
	if r == 0:
		return 1.0
	return float(c.value_log(math.log(r)))


def glue_metrics(
		m0: ChartMetric,
		m1: ChartMetric,
		distance: Callable[[np.ndarray], float],
		c: Cutoff,
		anchors: Sequence[np.ndarray] = (),
		tol: float = 1e-6,
		) -> ChartMetric:
	"""
	Blend two metrics as :math:`(1 - s) g_0 + s g_1` with weight :math:`s = \\varphi(r(x))`.

	The result equals ``m1`` where :math:`r \\le \\delta_1` and ``m0`` where :math:`r \\ge \\delta_2`.

	:param m0: The metric away from the submanifold.
	:param m1: The metric near the submanifold.
	:param distance: The distance ``r`` to the submanifold.
	:param c:
	:param anchors: Points of the submanifold at which the values and first derivatives of the two metrics are compared.
	:param tol:

	:raises curvquot.exceptions.JetMismatchError: if the metrics differ to first order at an anchor.
	"""

	if m0.dimension != m1.dimension:
		raise ValueError(f"Cannot blend metrics of dimensions {m0.dimension} and {m1.dimension}")

	for anchor in anchors:
		anchor = np.asarray(anchor, dtype=float)
		value_defect = float(np.abs(m0.tensor(anchor) - m1.tensor(anchor)).max())
		slope_defect = float(np.abs(metric_derivatives(m0, anchor) - metric_derivatives(m1, anchor)).max())
		if max(value_defect, slope_defect) > tol:
			raise JetMismatchError(
					f"Metrics differ to first order at {anchor.tolist()} "
					f"(values {value_defect:.3g}, derivatives {slope_defect:.3g})",
					point=anchor,
					bound="jet",
					defect=max(value_defect, slope_defect),
					)

	def evaluator(x: np.ndarray) -> np.ndarray:
		s = blend_weight(c, distance(x))
		if s == 0:
			return m0.tensor(x)
		elif s == 1:
			return m1.tensor(x)
		return (1 - s) * m0.tensor(x) + s * m1.tensor(x)

	def domain(x: np.ndarray) -> bool:
		return m0.contains(x) and m1.contains(x)

	return ChartMetric(m0.dimension, evaluator, domain, m0.policy, name=f"glue[{m0.name}|{m1.name}; eps={c.eps}]")


def blended_riemann(m0: ChartMetric, m1: ChartMetric, s: float, x: np.ndarray) -> np.ndarray:
	"""
	Returns the curvature tensor at ``x`` of the fixed-weight blend :math:`(1 - s) g_0 + s g_1`.

	:param m0:
	:param m1:
	:param s:
	:param x:
	"""

	blend = ChartMetric(
			m0.dimension,
			lambda y: (1 - s) * m0.tensor(y) + s * m1.tensor(y),
			lambda y: m0.contains(y) and m1.contains(y),
			m0.policy,
			name=f"blend(s={s})",
			)
	return riemann(blend, x)


def convexity_defect(
		m0: ChartMetric,
		m1: ChartMetric,
		points: Sequence[np.ndarray],
		weights: Sequence[float] = (0.0, 0.25, 0.5, 0.75, 1.0),
		) -> float:
	"""
	Returns the largest difference between the curvature tensor of the fixed-weight blend
	and the same blend of the two curvature tensors, over ``points`` and ``weights``.

	Where the metrics share their 1-jets the curvature is affine in the second derivatives,
	so the difference vanishes there up to finite-difference error.

	:param m0:
	:param m1:
	:param points:
	:param weights:
	"""

	worst = 0.0
	for x in points:
		x = np.asarray(x, dtype=float)
		r0, r1 = riemann(m0, x), riemann(m1, x)
		for s in weights:
			defect = np.abs(blended_riemann(m0, m1, s, x) - ((1 - s) * r0 + s * r1)).max()
			worst = max(worst, float(defect))
	return worst


class GlueScene(NamedTuple):
	"""
	Two metrics agreeing to first order along a submanifold, with the means to sample near it.
	"""

	#: The metric away from the submanifold.
	m0: ChartMetric

	#: The metric near the submanifold.
	m1: ChartMetric

	#: The distance to the submanifold.
	distance: Callable[[np.ndarray], float]

	#: Points on the submanifold.
	anchors: Tuple[np.ndarray, ...]

	#: ``(r_lo, r_hi, count)`` to a sampler of points at distance between ``r_lo`` and ``r_hi``.
	sampler: Callable[[float, float, int], Sampler]

	#: The smallest distance at which curvature is sampled.
	r_min: float = 1e-2


def canonical_scene(
		base: str = "sphere2",
		rank: int = 2,
		connection: str = "varying",
		warp: str = "g0",
		seed: Optional[int] = 0,
		) -> GlueScene:
	"""
	The model bundle with :math:`L_0` from :func:`~curvquot.bundle.select_L` as ``m0``
	and with :math:`2L_0` as ``m1``. The two share their value and first derivatives along the zero section,
	since :math:`L` enters the metric through :math:`1 - Lr^2`.

	Both members must be positively curved near the zero section. With :math:`L = 0` the planes spanned by
	a fibre vector and a base vector have curvature :math:`L\\,W = 0` there when the connection is flat,
	so the unbent bundle cannot serve as ``m0``.

	:param base:
	:param rank:
	:param connection:
	:param warp:
	:param seed:
	"""

	bundle = model_bundle(base=base, rank=rank, connection=connection, warp=warp)
	L0 = select_L(bundle, seed=seed)
	near: ModelBundle = bundle.with_L(2 * L0)
	far: ModelBundle = bundle.with_L(L0)

	rng = make_rng(seed)
	n = bundle.base_dimension
	anchors = tuple(
			bundle.join(0.5 * bundle.base_radius * random_unit_vector(rng, n), np.zeros(rank)) for _ in range(2)
			)

	def distance(x: np.ndarray) -> float:
		return float(np.linalg.norm(bundle.split(x)[1]))

	return GlueScene(
			m0=far.chart(),
			m1=near.chart(),
			distance=distance,
			anchors=anchors,
			sampler=lambda lo, hi, count: bundle_sampler(near, lo, hi, count),
			)


def blend_defect(scene: GlueScene, c: Cutoff, x: np.ndarray) -> float:
	"""
	Returns the largest difference between the curvature tensor of the glued metric at ``x``
	and that of the fixed-weight blend with the same weight.

	:param scene:
	:param c:
	:param x:
	"""

	glued = glue_metrics(scene.m0, scene.m1, scene.distance, c)
	s = blend_weight(c, scene.distance(x))
	return float(np.abs(riemann(glued, x) - blended_riemann(scene.m0, scene.m1, s, x)).max())


class GlueDemoReport(NamedTuple):
	"""
	Result of :func:`~.glued_positivity_demo`.
	"""

	#: The first :math:`\varepsilon` in the schedule for which the scan was positive.
	eps: float

	#: The scan for that :math:`\varepsilon`.
	report: CurvatureReport

	#: ``(eps, minimum)`` for every value tried.
	attempts: Tuple[Tuple[float, float], ...]


def glued_positivity_demo(
		scene: GlueScene,
		schedule: Sequence[float] = DEFAULT_SCHEDULE,
		samples: int = 12,
		planes_per_point: int = 8,
		refine: int = 15,
		seed: Optional[int] = 0,
		logger: Optional[logging.Logger] = None,
		) -> GlueDemoReport:
	"""
	Glue the scene for each :math:`\\varepsilon` in ``schedule`` in turn, and scan the sectional curvature
	over the blend annulus :math:`\\max(\\delta_1, r_{min}) \\le r \\le \\delta_2`,
	stopping at the first :math:`\\varepsilon` for which the minimum is positive.

	:param scene:
	:param schedule:
	:param samples:
	:param planes_per_point:
	:param refine:
	:param seed:
	:param logger: Optional logger. Defaults to this module's logger.
	:no-default logger:

	:raises curvquot.exceptions.BudgetExhaustedError: if no value in the schedule succeeds.
	"""

	if logger is None:
		logger_ = _log
	else:
		logger_ = logger

	attempts: List[Tuple[float, float]] = []
	worst: Optional[CurvatureReport] = None

	for eps in schedule:
		c = build_cutoff(eps)
		glued = glue_metrics(scene.m0, scene.m1, scene.distance, c, anchors=scene.anchors)
		r_lo = max(c.delta1, scene.r_min)
		r_hi = c.delta2

		report = min_sectional_scan(
				glued,
				scene.sampler(r_lo, r_hi, samples),
				planes_per_point=planes_per_point,
				refine=refine,
				seed=seed,
				)
		attempts.append((float(eps), report.min_value))
		logger_.info("eps=%s: minimum sectional curvature %.6g on [%.3g, %.3g]", eps, report.min_value, r_lo, r_hi)

		if report.passed:
			return GlueDemoReport(eps=float(eps), report=report, attempts=tuple(attempts))
		if worst is None or report.empty or report.min_value < worst.min_value:
			worst = report

	raise BudgetExhaustedError(
			f"No eps in {list(schedule)} gave positive curvature",
			attempts=tuple(attempts),
			witness=None if worst is None else worst.witness_point,
			)
