#!/usr/bin/env python3
#
#  conic.py
"""
Rotationally symmetric metrics :math:`dr^2 + G(r)^2 d\\varphi^2` on :math:`\\mathbb{R}^n`,
realised in Cartesian coordinates.

.. automodulesumm:: curvquot.conic
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
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

# 3rd party
import numpy as np

# this package
from curvquot.curvature import ChartMetric, CurvatureReport, min_sectional_scan, sectional, shell_sampler
from curvquot.exceptions import DomainError
from curvquot.numerics import DEFAULT_POLICY, FDPolicy, SymMatrix, make_rng, random_unit_vector
from curvquot.smoothing import SmoothFunction1D

__all__ = [
		"ConicMetric",
		"ConicPositivityReport",
		"PlaneFamilyValue",
		"conic_chart_tensor",
		"conic_positivity_check",
		"conic_tensor_array",
		"radial_plane_candidate",
		"tangent_plane_candidate",
		"tip_continuity_defect",
		]


class ConicMetric(NamedTuple):
	"""
	The metric :math:`dr^2 + G(r)^2 d\\varphi^2` on :math:`\\mathbb{R}^n` minus a small ball.
	"""

	#: The ambient dimension ``n``.
	dimension: int

	#: The warp profile ``G``.
	profile: SmoothFunction1D

	#: Points closer than this to the origin are excluded from the chart.
	r_min: float = 1e-3

	#: The finite-difference policy for the curvature oracle.
	policy: FDPolicy = DEFAULT_POLICY

	def contains(self, x: np.ndarray) -> bool:
		"""
		Returns whether ``x`` lies in the chart.

		:param x:
		"""

		r = float(np.linalg.norm(x))
		return self.r_min <= r <= self.profile.domain[1]

	def chart(self) -> ChartMetric:
		"""
		Returns the metric as a :class:`~.ChartMetric`.
		"""

		return ChartMetric(
				self.dimension,
				lambda x: conic_tensor_array(self, x),
				domain=self.contains,
				policy=self.policy,
				name=f"conic{self.dimension}[{self.profile.name}]",
				)


def conic_tensor_array(c: ConicMetric, x: np.ndarray) -> np.ndarray:
	"""
	Returns the components :math:`P + (G(r)/r)^2 (I - P)` with :math:`P = x x^T / r^2`.

	:param c:
	:param x:

	:raises curvquot.exceptions.DomainError: if ``x`` is inside the excluded ball.
	"""

	x = np.asarray(x, dtype=float)
	r = float(np.linalg.norm(x))
	if r < c.r_min:
		raise DomainError(f"|x| = {r} is inside the excluded ball of radius {c.r_min}", point=x)

	projection = np.outer(x, x) / r**2
	ratio = c.profile(r) / r
	return projection + ratio**2 * (np.eye(len(x)) - projection)


def conic_chart_tensor(c: ConicMetric, x: np.ndarray) -> SymMatrix:
	"""
	Returns the metric components at ``x``.

	The radial direction has eigenvalue ``1`` and the orthogonal directions eigenvalue :math:`G(r)^2/r^2`.

	:param c:
	:param x: A point with :math:`|x| \\ge r_{min}`.

	:raises curvquot.exceptions.DomainError: if ``x`` is inside the excluded ball.
	"""

	return SymMatrix(conic_tensor_array(c, x))


def radial_plane_candidate(profile: SmoothFunction1D, r: float) -> float:
	"""
	Returns :math:`-G''(r)/G(r)`, the curvature of planes containing the radial direction.

	:param profile:
	:param r:
	"""

	value, _, second, _ = profile.jet(float(r))
	return -second / value


def tangent_plane_candidate(profile: SmoothFunction1D, r: float) -> float:
	"""
	Returns :math:`(1 - G'(r)^2)/G(r)^2`, the curvature of planes tangent to the sphere of radius ``r``.

	:param profile:
	:param r:
	"""

	value, slope, _, _ = profile.jet(float(r))
	return (1 - slope**2) / value**2


class PlaneFamilyValue(NamedTuple):
	"""
	Oracle curvature of a distinguished plane compared with its closed-form candidate.
	"""

	#: ``'radial'`` or ``'tangent'``.
	family: str

	#: The radius at which the plane was placed.
	radius: float

	#: The finite-difference value.
	oracle: float

	#: The closed-form value.
	candidate: float

	@property
	def deviation(self) -> float:
		"""
		The deviation of the oracle from the candidate, relative to :math:`\\max(|c|, 1)`.
		"""

		return abs(self.oracle - self.candidate) / max(abs(self.candidate), 1.0)


class ConicPositivityReport(NamedTuple):
	"""
	Result of :func:`~.conic_positivity_check`.
	"""

	#: The minimum curvature scan over the annulus.
	scan: CurvatureReport

	#: Oracle values on the radial and sphere-tangent plane families.
	families: Tuple[PlaneFamilyValue, ...]

	@property
	def min_value(self) -> float:
		"""
		The smallest curvature seen, over the scan and the plane families.
		"""

		return min([self.scan.min_value, *(f.oracle for f in self.families)])

	@property
	def passed(self) -> bool:
		"""
		Whether every sampled curvature exceeds the scan threshold.
		"""

		return self.scan.passed and self.min_value > self.scan.threshold

	@property
	def worst_deviation(self) -> float:
		"""
		The largest relative deviation between oracle and candidate over the plane families.
		"""

		return max((f.deviation for f in self.families), default=0.0)


def _family_planes(c: ConicMetric, radius: float, rng: np.random.Generator) -> Iterable[PlaneFamilyValue]:
	chart = c.chart()
	direction = random_unit_vector(rng, c.dimension)
	point = radius * direction

	# a Euclidean orthonormal frame completing the radial direction
	frame = np.linalg.qr(np.column_stack([direction, rng.standard_normal((c.dimension, c.dimension - 1))]))[0]
	first, second = frame[:, 1], frame[:, min(2, c.dimension - 1)]

	yield PlaneFamilyValue(
			"radial",
			radius,
			sectional(chart, point, direction, first),
			radial_plane_candidate(c.profile, radius),
			)

	if c.dimension >= 3:
		yield PlaneFamilyValue(
				"tangent",
				radius,
				sectional(chart, point, first, second),
				tangent_plane_candidate(c.profile, radius),
				)


def conic_positivity_check(
		c: ConicMetric,
		annulus: Tuple[float, float],
		samples: int = 24,
		planes_per_point: int = 8,
		refine: int = 25,
		family_radii: Optional[Sequence[float]] = None,
		seed: Optional[int] = 0,
		threshold: float = 0.0,
		) -> ConicPositivityReport:
	"""
	Scan the sectional curvature of a conic metric over an annulus, and evaluate the
	radial and sphere-tangent plane families against their closed-form candidates.

	:param c:
	:param annulus: The radii ``(r_lo, r_hi)``.
	:param samples: The number of scan points.
	:param planes_per_point:
	:param refine:
	:param family_radii: Radii at which to place the distinguished planes.
		Defaults to five radii spread across the annulus.
	:param seed:
	:param threshold:
	"""

	r_lo, r_hi = map(float, annulus)
	if not 0 < r_lo < r_hi or r_hi > c.profile.domain[1]:
		raise DomainError(f"Invalid annulus [{r_lo}, {r_hi}] for {c.profile.name}", point=(r_lo, r_hi))

	scan = min_sectional_scan(
			c.chart(),
			shell_sampler(r_lo, r_hi, c.dimension, samples),
			planes_per_point=planes_per_point,
			refine=refine,
			seed=seed,
			threshold=threshold,
			)

	if family_radii is None:
		family_radii = np.linspace(r_lo, r_hi, 5).tolist()

	rng = make_rng(seed)
	families: List[PlaneFamilyValue] = []
	for radius in family_radii:
		families.extend(_family_planes(c, float(radius), rng))

	return ConicPositivityReport(scan=scan, families=tuple(families))


def tip_continuity_defect(c: ConicMetric, radii: Sequence[float] = (1e-1, 3e-2, 1e-2, 3e-3, 1e-3)) -> float:
	"""
	Returns the largest deviation of the metric from the identity at the sampled radii.

	Where :math:`G(0) = 0` and :math:`G'(0) = 1` this tends to zero with the radius,
	which is how the metric extends continuously over the excluded ball.

	:param c:
	:param radii: Radii no smaller than ``c.r_min``.
	"""

	rng = make_rng(0)
	worst = 0.0
	for radius in radii:
		point = radius * random_unit_vector(rng, c.dimension)
		deviation = np.abs(conic_tensor_array(c, point) - np.eye(c.dimension)).max()
		worst = max(worst, float(deviation))
	return worst if math.isfinite(worst) else math.inf
