#!/usr/bin/env python3
#
#  selection.py
"""
Bracket bounds, the choice of ``L``, and positivity scans near the zero section.
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
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

# 3rd party
import numpy as np

# this package
from curvquot.bundle._model import ModelBundle, bracket_operator, total_tensor
from curvquot.curvature import CurvatureReport, ball_sampler, metric_derivatives, min_sectional_scan
from curvquot.exceptions import PreconditionError
from curvquot.numerics import make_rng, random_unit_vector
from curvquot.smoothing import build_g_eps, require_positive_third_derivative_bound

__all__ = [
		"FamilyScanReport",
		"base_curvature_minimum",
		"bundle_sampler",
		"estimate_M1",
		"jet_agreement",
		"positivity_scan_family",
		"select_L",
		]

_log = logging.getLogger(__name__)

#: Allowance for finite-difference noise when comparing ``delta`` with the scanned base curvature.
BASE_CURVATURE_SLACK = 1e-3


def estimate_M1(b: ModelBundle, samples: int = 200, seed: Optional[int] = 0, radius: float = 0.25) -> float:
	"""
	Estimate the smallest constant :math:`M_1` with :math:`|[X, Y]'| \\le M_1 G(r) |X||Y| / (1 - Lr^2)`
	for basic lifts ``X`` and ``Y``, where :math:`[X, Y]'` is the fibre part of their bracket
	and all lengths are taken in the total metric.

	The ratio does not depend on ``L`` or the warp, and the sample points depend only on ``seed``,
	``radius`` and the base dimension and rank, so estimates for different ``L`` and warps are comparable.
	Samples are drawn one at a time, so the estimate never decreases as ``samples`` grows.

	:param b:
	:param samples: The number of random points and base vector pairs.
	:param seed:
	:param radius: Fibre points are drawn with :math:`0 < |v| \\le` ``radius``.
	"""

	if b.L * radius**2 >= 1:
		raise PreconditionError(f"L·radius² = {b.L * radius**2} is not below 1", bound="L")

	rng = make_rng(seed)
	n, k = b.base_dimension, b.rank
	estimate = 0.0

	for _ in range(samples):
		p = b.base_radius * rng.random()**(1 / n) * random_unit_vector(rng, n)
		v = radius * (1 - rng.random()) * random_unit_vector(rng, k)
		X = rng.standard_normal(n)
		Y = rng.standard_normal(n)

		g = total_tensor(b, p, v)
		r = float(np.linalg.norm(v))
		vertical = np.concatenate([np.zeros(n), bracket_operator(b, p, X, Y) @ v])
		lift_x = np.concatenate([X, -b.connection_along(p, X) @ v])
		lift_y = np.concatenate([Y, -b.connection_along(p, Y) @ v])

		def length(u: np.ndarray) -> float:
			return math.sqrt(max(float(u @ g @ u), 0.0))

		ratio = length(vertical) * (1 - b.L * r**2) / (b.profile(r) * length(lift_x) * length(lift_y))
		estimate = max(estimate, ratio)

	return estimate


def base_curvature_minimum(b: ModelBundle, samples: int = 16, seed: Optional[int] = 0) -> float:
	"""
	Returns the smallest sectional curvature of the base found by a scan of the ball of radius ``b.base_radius``.

	:param b:
	:param samples:
	:param seed:
	"""

	if b.base_dimension < 2:
		return math.inf

	report = min_sectional_scan(
			b.base,
			ball_sampler(b.base_radius, b.base_dimension, samples),
			planes_per_point=6,
			refine=10,
			seed=seed,
			)
	return report.min_value


def select_L(
		b: ModelBundle,
		delta: Optional[float] = None,
		samples: int = 200,
		seed: Optional[int] = 0,
		logger: Optional[logging.Logger] = None,
		) -> float:
	"""
	Returns :math:`L = 2 M_1 + \\delta`, which makes the metric positively curved along the zero section.

	``delta`` may not exceed :math:`-G'''(0)` nor the scanned minimum of the base sectional curvature.
	It defaults to half the smaller of the two.

	:param b:
	:param delta:
	:param samples: Passed to :func:`~.estimate_M1`.
	:param seed:
	:param logger: Optional logger. Defaults to this module's logger.
	:no-default logger:

	:raises curvquot.exceptions.PreconditionError: naming the bound ``delta`` violates.
	"""

	if logger is None:
		logger_ = _log
	else:
		logger_ = logger

	third = require_positive_third_derivative_bound(b.profile, 0.0 if delta is None else delta)
	base_minimum = base_curvature_minimum(b, seed=seed)

	if delta is None:
		delta = min(third, base_minimum) / 2

	if not delta > 0:
		raise PreconditionError(
				f"delta = {delta} is not positive (base curvature minimum {base_minimum})",
				bound="base-curvature",
				)
	if delta > base_minimum + BASE_CURVATURE_SLACK:
		raise PreconditionError(
				f"delta = {delta} exceeds the base curvature minimum {base_minimum}",
				bound="base-curvature",
				)

	m1 = estimate_M1(b.with_L(0.0), samples=samples, seed=seed)
	L = 2 * m1 + delta
	logger_.debug("select_L: M1=%.6g delta=%.6g -> L=%.6g", m1, delta, L)
	return L


def bundle_sampler(b: ModelBundle, r_lo: float, r_hi: float, count: int):
	"""
	Returns a sampler of total-space points with base part in the ball of radius ``b.base_radius``
	and fibre radius in ``(r_lo, r_hi)``.

	:param b:
	:param r_lo:
	:param r_hi:
	:param count:
	"""

	n, k = b.base_dimension, b.rank

	def sampler(rng: np.random.Generator) -> List[np.ndarray]:
		points = []
		if r_hi <= r_lo:
			return points
		for i in range(count):
			p = b.base_radius * rng.random()**(1 / n) * random_unit_vector(rng, n)
			radius = r_lo + (r_hi - r_lo) * (i + rng.uniform(0.05, 0.95)) / count
			points.append(b.join(p, radius * random_unit_vector(rng, k)))
		return points

	return sampler


def jet_agreement(bundles: Sequence[ModelBundle], points: Iterable[np.ndarray]) -> float:
	"""
	Returns the largest difference between the first derivatives of the total metrics of ``bundles``
	at the zero-section points ``(p, 0)``.

	Steps are kept below the feature scale of every warp involved.

	:param bundles:
	:param points: Base points.
	"""

	if not bundles:
		return 0.0

	h = min(b.policy.h for b in bundles)
	h = min([h, *(b.profile.feature_scale / 8 for b in bundles)])

	worst = 0.0
	for p in points:
		jets = []
		for b in bundles:
			chart = b.chart().with_policy(b.policy._replace(h=h))
			jets.append(metric_derivatives(chart, b.join(p, np.zeros(b.rank))))
		for jet in jets[1:]:
			worst = max(worst, float(np.abs(jet - jets[0]).max()))

	return worst


class FamilyScanReport(NamedTuple):
	"""
	Result of :func:`~.positivity_scan_family`.
	"""

	#: One ``(eps, report)`` pair per value of :math:`\varepsilon`.
	reports: Tuple[Tuple[float, CurvatureReport], ...]

	#: The largest difference between first derivatives of the metrics at the zero section.
	jet_defect: float

	#: The upper end :math:`\rho_0/L` of the scanned fibre radii.
	r_max: float

	@property
	def empty(self) -> bool:
		"""
		Whether the scanned region was empty.
		"""

		return all(report.empty for _, report in self.reports)

	@property
	def min_value(self) -> float:
		"""
		The smallest curvature over all values of :math:`\varepsilon`.
		"""

		values = [report.min_value for _, report in self.reports if not report.empty]
		return min(values) if values else math.nan


def positivity_scan_family(
		b: ModelBundle,
		eps_list: Sequence[float],
		L: float,
		rho0: float,
		r_min: float = 1e-2,
		samples: int = 16,
		planes_per_point: int = 8,
		refine: int = 15,
		seed: Optional[int] = 0,
		jet_points: int = 3,
		) -> FamilyScanReport:
	"""
	For each :math:`\\varepsilon`, scan the sectional curvature of ``b`` with warp :math:`g_\\varepsilon`
	and constant ``L`` over fibre radii :math:`r_{min} < r < \\rho_0/L`.

	Also measures how far apart the first derivatives of the metrics are at the zero section,
	which should be zero since every :math:`g_\\varepsilon` agrees with :math:`g_0` near the origin.

	:param b:
	:param eps_list:
	:param L:
	:param rho0:
	:param r_min: The inner radius of the scanned region.
	:param samples: Points per value of :math:`\\varepsilon`.
	:param planes_per_point:
	:param refine:
	:param seed:
	:param jet_points: The number of base points at which the jets are compared.
	"""

	r_max = rho0 / L if L > 0 else math.inf
	r_max = min(r_max, 0.5)

	bundles = [b.with_L(L).with_profile(build_g_eps(float(eps))) for eps in eps_list]
	reports = []
	for eps, bundle in zip(eps_list, bundles):
		report = min_sectional_scan(
				bundle.chart(),
				bundle_sampler(bundle, r_min, r_max, samples),
				planes_per_point=planes_per_point,
				refine=refine,
				seed=seed,
				)
		_log.debug("eps=%s: minimum %.6g over %d points", eps, report.min_value, report.samples)
		reports.append((float(eps), report))

	rng = make_rng(seed)
	n = b.base_dimension
	base_points = [b.base_radius * rng.random() * random_unit_vector(rng, n) for _ in range(jet_points)]

	return FamilyScanReport(
			reports=tuple(reports),
			jet_defect=jet_agreement(bundles, base_points),
			r_max=r_max,
			)
