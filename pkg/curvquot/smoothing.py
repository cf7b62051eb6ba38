#!/usr/bin/env python3
#
#  smoothing.py
"""
One-dimensional warp profiles: the cubic profile :math:`g_0(r) = r - r^3`,
mollifiers, convolution smoothing, the halved family :math:`g_\\varepsilon`
and the inequalities those profiles are required to satisfy.

.. automodulesumm:: curvquot.smoothing
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
from typing import Callable, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

# 3rd party
import numpy as np
from scipy import optimize
from scipy.interpolate import CubicHermiteSpline, CubicSpline
from scipy.special import expit

# this package
from curvquot.exceptions import (
		BracketError,
		DomainError,
		InfeasibleConstructionError,
		PreconditionError,
		QuadratureError
		)
from curvquot.numerics import DEFAULT_POLICY, FDPolicy, fd_derivative, integrate

__all__ = [
		"BracketReport",
		"CLOSED_FORM",
		"ComparisonResult",
		"GEpsConstruction",
		"G0",
		"MOLLIFIED_PIECEWISE",
		"SPLINE_SAMPLED",
		"ShapeReport",
		"SmoothFunction1D",
		"bracket_bounds_check",
		"build_g_eps",
		"check_shape_conditions",
		"comparison_check",
		"construct_g_eps",
		"convolve",
		"fd_consistency",
		"g0_eval",
		"linear_profile",
		"mollifier",
		"profile_from_name",
		"sine_profile",
		"smooth_step",
		]

_log = logging.getLogger(__name__)

#: Representation tag for profiles given by explicit formulae.
CLOSED_FORM = "closed-form"

#: Representation tag for profiles assembled from mollified pieces.
MOLLIFIED_PIECEWISE = "mollified-piecewise"

#: Representation tag for profiles interpolated from samples.
SPLINE_SAMPLED = "spline-sampled"

Jet = Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
Evaluator = Callable[[np.ndarray], Jet]


class SmoothFunction1D:
	"""
	A real function of one real variable together with its first three derivatives.

	:param domain: The closed interval ``(a, b)`` on which the function may be evaluated.
	:param evaluator: Function mapping an array of abscissae to the tuple
		``(value, first, second, third)`` of arrays of the same shape.
	:param representation: One of :data:`~.CLOSED_FORM`, :data:`~.MOLLIFIED_PIECEWISE`
		or :data:`~.SPLINE_SAMPLED`.
	:param name: A short identifier, used in reports and CSV exports.
	:param feature_scale: The length scale of the finest structure of the function.
		Finite differences of quantities built from the profile should use steps well below this.
	:param parameters: Construction parameters, for reporting.
	"""

	__slots__ = ("domain", "_evaluator", "representation", "name", "feature_scale", "parameters", "nodes")

	#: The closed interval on which the function may be evaluated.
	domain: Tuple[float, float]

	#: One of :data:`~.CLOSED_FORM`, :data:`~.MOLLIFIED_PIECEWISE` or :data:`~.SPLINE_SAMPLED`.
	representation: str

	#: A short identifier.
	name: str

	#: The length scale of the finest structure of the function.
	feature_scale: float

	#: Construction parameters.
	parameters: Mapping[str, float]

	#: Sample abscissae, for spline-sampled functions.
	nodes: Optional[np.ndarray]

	def __init__(
			self,
			domain: Tuple[float, float],
			evaluator: Evaluator,
			representation: str = CLOSED_FORM,
			name: str = "anonymous",
			feature_scale: float = 1.0,
			parameters: Optional[Mapping[str, float]] = None,
			nodes: Optional[np.ndarray] = None,
			):
		a, b = float(domain[0]), float(domain[1])
		if not a < b:
			raise ValueError(f"Empty domain [{a}, {b}]")

		self.domain = (a, b)
		self._evaluator = evaluator
		self.representation = str(representation)
		self.name = str(name)
		self.feature_scale = float(feature_scale)
		self.parameters = dict(parameters or {})
		self.nodes = nodes

	def __repr__(self) -> str:
		return f"<{self.__class__.__name__} {self.name!r} on [{self.domain[0]}, {self.domain[1]}]>"

	def contains(self, r: Union[float, np.ndarray]) -> bool:
		"""
		Returns whether every abscissa in ``r`` lies in the domain.

		:param r:
		"""

		r = np.asarray(r, dtype=float)
		return bool(np.all((r >= self.domain[0]) & (r <= self.domain[1])))

	def _check(self, r: np.ndarray) -> None:
		if not self.contains(r):
			raise DomainError(
					f"{self.name}: abscissa outside [{self.domain[0]}, {self.domain[1]}]",
					point=r,
					)

	def jet(self, r: Union[float, np.ndarray]) -> Tuple:
		"""
		Returns ``(value, first, second, third)`` at ``r``.

		Scalars in give floats out, arrays give arrays of the same shape.

		:param r:
		"""

		array = np.asarray(r, dtype=float)
		self._check(array)
		channels = self._evaluator(np.atleast_1d(array))

		if array.ndim == 0:
			return tuple(float(np.asarray(c).reshape(-1)[0]) for c in channels)
		return tuple(np.asarray(c).reshape(array.shape) for c in channels)

	def derivative(self, r: Union[float, np.ndarray], order: int = 1):
		"""
		Returns the ``order``-th derivative at ``r``, for ``order`` in ``0 .. 3``.

		:param r:
		:param order:
		"""

		if order not in {0, 1, 2, 3}:
			raise ValueError(f"Derivative order must be between 0 and 3, not {order!r}")
		return self.jet(r)[order]

	def __call__(self, r: Union[float, np.ndarray]):
		return self.jet(r)[0]

	def to_table(self, grid: int) -> np.ndarray:
		"""
		Sample the function on ``grid`` equally spaced points spanning the domain.

		Returns an array with the columns ``r, g, g', g'', g'''``.

		:param grid:
		"""

		if grid < 2:
			raise ValueError("At least two grid points are required.")

		a, b = self.domain
		if math.isinf(b):
			b = a + 1.0
		r = np.linspace(a, b, grid)
		return np.column_stack([r, *self.jet(r)])


# ---------------------------------------------------------------------------
# Closed-form profiles
# ---------------------------------------------------------------------------


def _g0_channels(r: np.ndarray) -> Jet:
	return r - r**3, 1 - 3 * r**2, -6 * r, np.full_like(r, -6.0)


#: The cubic profile :math:`g_0(r) = r - r^3`, positive on ``[0, 1)``.
G0 = SmoothFunction1D((0.0, 1.0), _g0_channels, CLOSED_FORM, name="g0")


def g0_eval(r: float) -> Tuple[float, float, float, float]:
	"""
	Returns the value and first three derivatives of :math:`g_0(r) = r - r^3`.

	.. code-block:: python

		>>> g0_eval(0.1)[2]
		-0.6000000000000001

	:param r: A radius in ``[0, 1/2)``.

	:raises curvquot.exceptions.DomainError: if ``r`` is outside ``[0, 1/2)``.
	"""

	if not 0 <= r < 0.5:
		raise DomainError(f"g0 is evaluated on [0, 1/2), got {r!r}", point=r)

	return G0.jet(float(r))


def linear_profile() -> SmoothFunction1D:
	"""
	The identity profile :math:`G(r) = r`, which makes the conic metric Euclidean.
	"""

	def channels(r: np.ndarray) -> Jet:
		return r.copy(), np.ones_like(r), np.zeros_like(r), np.zeros_like(r)

	return SmoothFunction1D((0.0, 1.0), channels, CLOSED_FORM, name="linear")


def sine_profile() -> SmoothFunction1D:
	"""
	The profile :math:`G(r) = \\sin r` on :math:`[0, \\pi/2]`, the warp of the round sphere.
	"""

	def channels(r: np.ndarray) -> Jet:
		return np.sin(r), np.cos(r), -np.sin(r), -np.cos(r)

	return SmoothFunction1D((0.0, math.pi / 2), channels, CLOSED_FORM, name="sin")


# ---------------------------------------------------------------------------
# Bumps and steps
# ---------------------------------------------------------------------------


def _step_channels(x: np.ndarray) -> Jet:
	value = np.where(x <= 1.5, 1.0, 0.0)
	d1 = np.zeros_like(x)
	d2 = np.zeros_like(x)
	d3 = np.zeros_like(x)

	# outside this window the transition is flat to below 1e-70
	inside = (x > 1.005) & (x < 1.995)
	if np.any(inside):
		t = x[inside]
		left, right = t - 1, 2 - t
		q = 1 / right - 1 / left
		q1 = 1 / right**2 + 1 / left**2
		q2 = 2 / right**3 - 2 / left**3
		q3 = 6 / right**4 + 6 / left**4

		s = expit(-q)
		p = expit(-q) * expit(q)
		f1 = -p
		f2 = p * (1 - 2 * s)
		f3 = -p * (1 - 6 * s + 6 * s**2)

		value[inside] = s
		d1[inside] = f1 * q1
		d2[inside] = f2 * q1**2 + f1 * q2
		d3[inside] = f3 * q1**3 + 3 * f2 * q1 * q2 + f1 * q3

	return value, d1, d2, d3


@functools.lru_cache(1)
def smooth_step() -> SmoothFunction1D:
	"""
	The smooth step which equals ``1`` on :math:`(-\\infty, 1]` and ``0`` on :math:`[2, \\infty)`,
	built from :math:`e^{-1/x}` pieces.
	"""

	return SmoothFunction1D((-math.inf, math.inf), _step_channels, CLOSED_FORM, name="step")


def _unit_bump(s: np.ndarray) -> Jet:
	value = np.zeros_like(s)
	d1 = np.zeros_like(s)
	d2 = np.zeros_like(s)
	d3 = np.zeros_like(s)

	u = 1 - s**2
	inside = u > 1e-12
	if np.any(inside):
		t = s[inside]
		w = u[inside]
		b = np.exp(-1 / w)
		h1 = -2 * t / w**2
		h2 = -2 / w**2 - 8 * t**2 / w**3
		h3 = -24 * t / w**3 - 48 * t**3 / w**4
		value[inside] = b
		d1[inside] = h1 * b
		d2[inside] = (h2 + h1**2) * b
		d3[inside] = (h3 + 3 * h1 * h2 + h1**3) * b

	return value, d1, d2, d3


@functools.lru_cache(1)
def _unit_bump_mass() -> float:
	return integrate(lambda s: math.exp(-1 / (1 - s * s)) if abs(s) < 1 else 0.0, -1, 1, tol=1e-14)


def mollifier(delta: float) -> SmoothFunction1D:
	"""
	The standard mollifier :math:`\\omega_\\delta`: an even, nonnegative smooth bump
	supported on :math:`[-\\delta, \\delta]` with unit integral.

	:param delta: The support radius.
	"""

	if not delta > 0:
		raise DomainError(f"The mollifier radius must be positive, got {delta!r}", point=delta)

	delta = float(delta)
	mass = _unit_bump_mass()

	def channels(x: np.ndarray) -> Jet:
		b, b1, b2, b3 = _unit_bump(x / delta)
		return b / (delta * mass), b1 / (delta**2 * mass), b2 / (delta**3 * mass), b3 / (delta**4 * mass)

	return SmoothFunction1D(
			(-math.inf, math.inf),
			channels,
			CLOSED_FORM,
			name=f"mollifier:{delta}",
			feature_scale=delta,
			parameters={"delta": delta},
			)


def convolve(
		f: SmoothFunction1D,
		delta: float,
		grid: int = 4096,
		domain: Optional[Tuple[float, float]] = None,
		nodes: int = 256,
		) -> SmoothFunction1D:
	"""
	Numerical convolution :math:`f * \\omega_\\delta`, sampled on ``grid`` points and spline-represented.

	The first and second derivative channels are convolved directly,
	and the third derivative is taken from the spline of the second derivative channel.

	:param f:
	:param delta: The mollifier radius.
	:param grid: The number of sample points.
	:param domain: The domain of the result. Defaults to the domain of ``f`` shrunk by ``delta``.
	:param nodes: The number of Gauss–Legendre nodes across the mollifier support.

	:raises curvquot.exceptions.DomainError: if ``f`` cannot be evaluated on the enlarged domain.
	:raises curvquot.exceptions.QuadratureError: if the discrete kernel is not normalised.
	"""

	if domain is None:
		domain = (f.domain[0] + delta, f.domain[1] - delta)

	lo, hi = float(domain[0]), float(domain[1])
	if not (f.contains(lo - delta) and f.contains(hi + delta)) or not lo < hi:
		raise DomainError(
				f"{f.name} cannot be convolved on [{lo}, {hi}] with radius {delta}",
				point=(lo, hi),
				)

	abscissae, gauss_weights = np.polynomial.legendre.leggauss(nodes)
	shifts = delta * abscissae
	weights = mollifier(delta)(shifts) * delta * gauss_weights

	total = float(weights.sum())
	if abs(total - 1) > 1e-6:
		raise QuadratureError(f"Discrete mollifier mass is {total}, not 1")
	weights = weights / total

	x = np.linspace(lo, hi, grid)
	sample_points = np.clip(x[:, None] - shifts[None, :], f.domain[0], f.domain[1])
	value, d1, d2, _ = f.jet(sample_points)

	splines = [CubicSpline(x, channel @ weights) for channel in (value, d1, d2)]
	third = splines[2].derivative()

	def channels(r: np.ndarray) -> Jet:
		return splines[0](r), splines[1](r), splines[2](r), third(r)

	return SmoothFunction1D(
			(lo, hi),
			channels,
			SPLINE_SAMPLED,
			name=f"{f.name}*mollifier:{delta}",
			feature_scale=min(f.feature_scale, delta),
			parameters={"delta": float(delta), "grid": grid},
			nodes=x,
			)


# ---------------------------------------------------------------------------
# The family g_eps
# ---------------------------------------------------------------------------


#: Gauss–Legendre nodes per piece when mollifying the piecewise profile.
_GL_NODES = 128

#: Abscissae mollified per batch.
_BATCH = 512


class GEpsConstruction(NamedTuple):
	"""
	The data from which a profile :math:`g_\\varepsilon` is assembled.

	The endpoint data is :math:`(b_0, b_1, b_2) = (g_0, g_0', g_0'')(\\varepsilon)/2`,
	and the slope :math:`b_3` at the origin exceeds ``1`` by three times the second moment of the mollifier,
	which the mollification takes back off. With :math:`\\varphi(r) = (r^3 - 3\\varepsilon^2 r + 2\\varepsilon^3)/6` and

	.. math::

		g_1(r) = b_0 + b_1(r - \\varepsilon) - \\int_0^{\\varepsilon - r} u(t)\\,dt,

	the piecewise profile is

	.. math::

		g_2(r) = \\begin{cases}
			(b_3 - 1)r + g_0(r), & r < r_0, \\\\
			g_1(r) - \\varphi(r), & r_0 \\le r < \\varepsilon, \\\\
			b_0 + b_1(r - \\varepsilon) + b_2(r - \\varepsilon)^2/2, & r \\ge \\varepsilon,
		\\end{cases}

	where the first two pieces meet at the corner :math:`r_0`.
	The profile :math:`g_\\varepsilon` is :math:`g_2 * \\omega_\\delta` on :math:`[0, \\varepsilon)`,
	plus a correction polynomial on :math:`[\\varepsilon/2, \\varepsilon)` which restores the value
	and first two derivatives of :math:`g_0/2` at :math:`\\varepsilon`. From :math:`\\varepsilon` on it is :math:`g_0/2`.
	"""

	#: The parameter :math:`\varepsilon`.
	eps: float

	#: Value, slope and second derivative of :math:`g_0/2` at :math:`\varepsilon`.
	target: Tuple[float, float, float]

	#: The slope :math:`b_3` of the innermost piece.
	slope: float

	#: Where the auxiliary profile :math:`u` stops rising.
	knee: float

	#: The corner :math:`r_0`.
	corner: float

	#: The mollifier radius.
	delta: float

	#: Coefficients of :math:`x^3, x^4, x^5` in the correction, with :math:`x = r - \varepsilon/2`.
	correction: Tuple[float, float, float]

	def auxiliary(self) -> CubicHermiteSpline:
		"""
		The auxiliary profile :math:`u` on :math:`[0, \\varepsilon]`: a cubic spline rising from ``0``
		with slope :math:`-(b_2 + \\varepsilon)` and level from :attr:`knee` on.
		"""

		return _auxiliary(self.eps, self.target[2], self.knee)

	def breakpoints(self) -> Tuple[float, float, float]:
		"""
		The abscissae at which the pieces of :math:`g_2` change.
		"""

		return (self.corner, self.eps - self.knee, self.eps)

	def piecewise_jet(self, r: Union[float, np.ndarray]) -> Jet:
		"""
		Returns :math:`g_2` and its first three derivatives at ``r``.

		At a breakpoint the piece to the right is used.

		:param r:
		"""

		r = np.asarray(r, dtype=float)
		pieces = _pieces(self, self.auxiliary(), r)
		return _select(self, r, pieces)

	def mollified_jet(self, r: Union[float, np.ndarray]) -> Jet:
		"""
		Returns :math:`g_2 * \\omega_\\delta` and its first three derivatives at ``r``.

		The derivatives of the convolution pick up the jumps of :math:`g_2'` and :math:`g_2''`
		at the breakpoints, so they are exact rather than differenced.

		:param r:
		"""

		return _mollify(self, np.asarray(r, dtype=float))

	def profile(self) -> SmoothFunction1D:
		"""
		Assemble the profile :math:`g_\\varepsilon` on ``[0, 1/2]``.
		"""

		return _assemble_g_eps(self)


def _phi(r: np.ndarray, eps: float) -> Jet:
	return (r**3 - 3 * eps**2 * r + 2 * eps**3) / 6, (r**2 - eps**2) / 2, r, np.ones_like(r)


def _auxiliary(eps: float, b2: float, knee: float) -> CubicHermiteSpline:
	rise = -(b2 + eps)
	height = rise * knee / 2
	return CubicHermiteSpline([0.0, knee, eps], [0.0, height, height], [rise, 0.0, 0.0])


def _pieces(c: GEpsConstruction, u: CubicHermiteSpline, r: np.ndarray) -> Tuple[Jet, Jet, Jet]:
	b0, b1, b2 = c.target
	eps = c.eps
	z = eps - r
	antiderivative = u.antiderivative()
	phi = _phi(r, eps)

	inner = (c.slope * r - r**3, c.slope - 3 * r**2, -6 * r, np.full_like(r, -6.0))
	middle = (
			b0 + b1 * (r - eps) - (antiderivative(z) - antiderivative(0.0)) - phi[0],
			b1 + u(z) - phi[1],
			-u(z, 1) - phi[2],
			u(z, 2) - phi[3],
			)
	x = r - eps
	outer = (b0 + b1 * x + b2 * x**2 / 2, b1 + b2 * x, np.full_like(r, b2), np.zeros_like(r))
	return inner, middle, outer


def _select(c: GEpsConstruction, r: np.ndarray, pieces: Tuple[Jet, Jet, Jet]) -> Jet:
	inner, middle, outer = pieces
	left, right = r < c.corner, r >= c.eps
	return tuple(np.where(left, a, np.where(right, o, m)) for a, m, o in zip(inner, middle, outer))


def _jumps(c: GEpsConstruction, u: CubicHermiteSpline) -> np.ndarray:
	# rows: jumps of g2' and g2'' at each breakpoint
	breaks = np.asarray(c.breakpoints())
	inner, middle, outer = _pieces(c, u, breaks)
	jumps = np.zeros((2, 3))
	for row, order in enumerate((1, 2)):
		jumps[row, 0] = middle[order][0] - inner[order][0]
		jumps[row, 2] = outer[order][2] - middle[order][2]
	return jumps


def _second_moment(delta: float) -> float:
	abscissae, gauss_weights = np.polynomial.legendre.leggauss(_GL_NODES)
	s = delta * abscissae
	weights = mollifier(delta)(s) * gauss_weights
	return float((s**2 * weights).sum() / weights.sum())


def _mollify(c: GEpsConstruction, r: np.ndarray) -> Jet:
	kernel = mollifier(c.delta)
	u = c.auxiliary()
	breaks = np.asarray(c.breakpoints())
	jumps = _jumps(c, u)
	abscissae, gauss_weights = np.polynomial.legendre.leggauss(_GL_NODES)

	flat = r.reshape(-1)
	channels = [np.empty_like(flat) for _ in range(4)]

	for start in range(0, flat.size, _BATCH):
		x = flat[start:start + _BATCH]

		# split the kernel support where r - s crosses a breakpoint
		ends = np.full((x.size, 1), c.delta)
		cuts = np.clip(x[:, None] - breaks[None, :], -c.delta, c.delta)
		edges = np.sort(np.hstack([-ends, cuts, ends]), axis=1)
		half = (edges[:, 1:] - edges[:, :-1]) / 2
		middle = (edges[:, 1:] + edges[:, :-1]) / 2

		s = middle[..., None] + half[..., None] * abscissae
		weights = half[..., None] * gauss_weights * kernel(s)
		total = weights.sum(axis=(1, 2), keepdims=True)
		if np.any(np.abs(total - 1) > 1e-6):
			raise QuadratureError(f"Discrete mollifier mass is {float(total.min())}, not 1")
		weights = weights / total

		t = x[:, None, None] - s
		smooth = [(channel * weights).sum(axis=(1, 2)) for channel in _select(c, t, _pieces(c, u, t))]

		w0, w1, *_ = kernel.jet(x[:, None] - breaks[None, :])
		smooth[2] = smooth[2] + w0 @ jumps[0]
		smooth[3] = smooth[3] + w1 @ jumps[0] + w0 @ jumps[1]

		for channel, values in zip(channels, smooth):
			channel[start:start + _BATCH] = values

	return tuple(channel.reshape(r.shape) for channel in channels)


def _correction_jet(coefficients: Sequence[float], x: np.ndarray) -> Jet:
	c3, c4, c5 = coefficients
	return (
			x**3 * (c3 + c4 * x + c5 * x**2),
			x**2 * (3 * c3 + 4 * c4 * x + 5 * c5 * x**2),
			x * (6 * c3 + 12 * c4 * x + 20 * c5 * x**2),
			6 * c3 + 24 * c4 * x + 60 * c5 * x**2,
			)


def _check_endpoint_data(eps: float, target: Tuple[float, float, float], slope: float) -> None:
	b0, b1, b2 = target
	g0_value, g0_slope, *_ = G0.jet(eps)

	if not b2 + eps < 0:
		raise InfeasibleConstructionError(f"b2 + eps = {b2 + eps} is not negative", constraint="endpoint-data")
	if not eps * b1 + eps**3 / 3 < b0 < (slope - 1) * eps + g0_value:
		raise InfeasibleConstructionError(f"b0 = {b0} is outside the admissible window", constraint="endpoint-data")
	if not b1 < slope - 1 + g0_slope:
		raise InfeasibleConstructionError(f"b1 = {b1} is not below the slope of g0", constraint="endpoint-data")


def _check_auxiliary(c: GEpsConstruction, u: CubicHermiteSpline) -> None:
	b0, b1, b2 = c.target
	eps = c.eps
	rise = -(b2 + eps)
	t = np.linspace(0.0, eps, 513)

	if float(u(0.0)) != 0:
		raise InfeasibleConstructionError(f"u(0) = {float(u(0.0))}, not 0", constraint="u-origin")
	if not math.isclose(float(u(0.0, 1)), rise, rel_tol=1e-12):
		raise InfeasibleConstructionError(f"u'(0) = {float(u(0.0, 1))}, not {rise}", constraint="u-slope")
	if np.any(u(t, 1) < -1e-12 * rise):
		raise InfeasibleConstructionError("u is not nondecreasing", constraint="u-monotone")

	mass = float(u.integrate(0.0, eps))
	bound = b0 - b1 * eps - eps**3 / 3
	if not mass < bound:
		raise InfeasibleConstructionError(f"The integral of u is {mass}, not below {bound}", constraint="u-mass")

	r = eps - t
	ceiling = (r**2 - eps**2) / 2 + (1 - 3 * r**2) + c.slope - 1 - b1
	if np.any(u(t) > ceiling):
		raise InfeasibleConstructionError("u exceeds the slope allowance of g0", constraint="u-ceiling")


def _find_corner(c: GEpsConstruction, u: CubicHermiteSpline) -> float:

	def gap(r: float) -> float:
		inner, middle, _ = _pieces(c, u, np.array([r]))
		return float(middle[0][0] - inner[0][0])

	lo, hi = 0.0, c.eps
	if not gap(lo) > 0 > gap(hi):
		raise InfeasibleConstructionError(f"The pieces of g2 do not cross on (0, {hi})", constraint="corner")

	return float(optimize.brentq(gap, lo, hi, xtol=1e-16, maxiter=200))


def construct_g_eps(eps: float, logger: Optional[logging.Logger] = None) -> GEpsConstruction:
	"""
	Solve for the data of :math:`g_\\varepsilon`.

	:param eps: A value in ``(0, 1/2)``.
	:param logger: Optional logger to log the construction to. Defaults to this module's logger.
	:no-default logger:

	:raises curvquot.exceptions.DomainError: if ``eps`` is outside ``(0, 1/2)``.
	:raises curvquot.exceptions.InfeasibleConstructionError: if a constraint cannot be met.
		The ``constraint`` attribute is one of ``'endpoint-data'``, ``'u-origin'``, ``'u-slope'``,
		``'u-monotone'``, ``'u-mass'``, ``'u-ceiling'``, ``'corner'``, ``'tip-window'`` or ``'correction'``.
	"""

	if logger is None:
		logger_ = _log
	else:
		logger_ = logger

	if not 0 < eps < 0.5:
		raise DomainError(f"eps must lie in (0, 1/2), got {eps!r}", point=eps)

	eps = float(eps)
	g0_value, g0_slope, g0_curvature, _ = G0.jet(eps)
	construction = GEpsConstruction(
			eps=eps,
			target=(g0_value / 2, g0_slope / 2, g0_curvature / 2),
			slope=1.0,
			knee=eps / 2,
			corner=0.0,
			delta=0.0,
			correction=(0.0, 0.0, 0.0),
			)
	u = construction.auxiliary()

	# the mollifier radius depends on the corner, and the slope on the radius
	_check_endpoint_data(eps, construction.target, construction.slope)
	_check_auxiliary(construction, u)
	delta = min(eps / 16, _find_corner(construction, u) / 4)
	construction = construction._replace(slope=1 + 3 * _second_moment(delta), delta=delta)

	_check_endpoint_data(eps, construction.target, construction.slope)
	_check_auxiliary(construction, u)
	construction = construction._replace(corner=_find_corner(construction, u))
	if not construction.corner > 2 * delta:
		raise InfeasibleConstructionError(
				f"The corner {construction.corner} is within {2 * delta} of the origin",
				constraint="tip-window",
				)

	half = eps / 2
	value, slope, second, _ = construction.mollified_jet(np.array([eps]))
	defect = np.array(construction.target) - np.array([value[0], slope[0], second[0]])
	system = np.array([
			[half**3, half**4, half**5],
			[3 * half**2, 4 * half**3, 5 * half**4],
			[6 * half, 12 * half**2, 20 * half**3],
			])
	coefficients = np.linalg.solve(system, defect)
	construction = construction._replace(correction=tuple(float(x) for x in coefficients))

	r = np.linspace(half, eps, 257)
	_, slope, second, _ = construction.mollified_jet(r)
	_, extra_slope, extra_second, _ = _correction_jet(construction.correction, r - half)
	concavity = float((second + extra_second + r).max())
	slope_excess = float((slope + extra_slope - (1 - 3 * r**2)).max())
	if concavity > 1e-10 or slope_excess > 1e-10:
		raise InfeasibleConstructionError(
				f"The correction breaks g'' <= -r ({concavity}) or g' <= g0' ({slope_excess})",
				constraint="correction",
				)

	logger_.debug(
			"g_eps(%s): corner=%.3e delta=%.3e slope=%.15f correction=%s",
			eps,
			construction.corner,
			construction.delta,
			construction.slope,
			construction.correction,
			)

	return construction


def _assemble_g_eps(c: GEpsConstruction) -> SmoothFunction1D:
	half = c.eps / 2

	def channels(r: np.ndarray) -> Jet:
		value, d1, d2, d3 = (channel / 2 for channel in _g0_channels(r))

		inner = r < c.eps
		if np.any(inner):
			x = r[inner]
			smooth = c.mollified_jet(x)
			extra = _correction_jet(c.correction, x - half)
			for channel, part, added in zip((value, d1, d2, d3), smooth, extra):
				channel[inner] = part + np.where(x >= half, added, 0.0)

		return value, d1, d2, d3

	return SmoothFunction1D(
			(0.0, 0.5),
			channels,
			MOLLIFIED_PIECEWISE,
			name=f"geps:{c.eps}",
			feature_scale=c.delta,
			parameters={
					"eps": c.eps,
					"slope": c.slope,
					"knee": c.knee,
					"corner": c.corner,
					"delta": c.delta,
					},
			)


@functools.lru_cache(16)
def build_g_eps(eps: float, logger: Optional[logging.Logger] = None) -> SmoothFunction1D:
	"""
	Construct the profile :math:`g_\\varepsilon` on ``[0, 1/2]``.

	The result satisfies :math:`g(0) = 0`, :math:`g'(0) = 1`, :math:`g''(0) = 0`,
	:math:`g''(r) \\le -r`, :math:`g' \\le g_0'`, and equals :math:`g_0/2` exactly for :math:`r \\ge \\varepsilon`.

	:param eps: A value in ``(0, 1/2)``.
	:param logger: Optional logger to log the construction to. Defaults to this module's logger.
	:no-default logger:

	:raises curvquot.exceptions.InfeasibleConstructionError: if a constraint cannot be met.
	"""

	return construct_g_eps(eps, logger=logger).profile()


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


class ShapeReport(NamedTuple):
	"""
	Verdict of :func:`~.check_shape_conditions`.
	"""

	#: Whether :math:`g(0) = 0`, :math:`g'(0) = 1` and :math:`g''(0) = 0` hold.
	smooth_at_tip: bool

	#: Whether :math:`g'''(0) < 0` and :math:`g'' < 0` hold.
	positively_curved: bool

	#: The abscissa of the worst violation.
	worst_location: float

	#: The magnitude of the worst violation. Always nonnegative.
	worst_violation: float


def check_shape_conditions(g: SmoothFunction1D, grid: int = 1024, tol: float = 1e-6) -> ShapeReport:
	"""
	Check the smoothness and curvature conditions of a warp profile.

	The smoothness conditions are :math:`g(0) = 0`, :math:`g'(0) = 1` and :math:`g''(0) = 0` (to ``tol``).
	The curvature conditions are :math:`g'''(0) < 0` and :math:`g''(r) < 0` on the interior grid points.

	:param g:
	:param grid: The number of interior sample points.
	:param tol: Tolerance for the smoothness conditions.
	"""

	upper = min(g.domain[1], 1.0)
	value, d1, d2, d3 = g.jet(0.0)

	tip_defect = max(abs(value), abs(d1 - 1), abs(d2))
	smooth_at_tip = tip_defect <= tol

	r = upper * np.arange(1, grid + 1) / (grid + 1)
	second = g.derivative(r, 2)
	index = int(np.argmax(second))

	positively_curved = bool(d3 < 0 and second[index] < 0)

	candidates = [
			(0.0, 0.0 if smooth_at_tip else tip_defect),
			(0.0, max(d3, 0.0)),
			(float(r[index]), max(float(second[index]), 0.0)),
			]
	worst_location, worst_violation = max(candidates, key=lambda c: c[1])

	return ShapeReport(
			smooth_at_tip=smooth_at_tip,
			positively_curved=positively_curved,
			worst_location=worst_location,
			worst_violation=float(worst_violation),
			)


class ComparisonResult(NamedTuple):
	"""
	Result of :func:`~.comparison_check`.
	"""

	#: The solution of :math:`g_0(t_0) = g_\varepsilon(t)`.
	t0: float

	#: Whether :math:`g_\varepsilon'(t) \le g_0'(t_0)`.
	slope_bound: bool

	#: Whether :math:`7t\,g_\varepsilon'(t) \ge t_0 g_0'(t_0) + g_\varepsilon(t)`.
	growth_bound: bool

	#: :math:`|g_0(t_0) - g_\varepsilon(t)|`.
	residual: float


def comparison_check(
		g_eps: SmoothFunction1D,
		t: float,
		xtol: float = 1e-13,
		tol: float = 1e-12,
		) -> ComparisonResult:
	"""
	Compare :math:`g_\\varepsilon` at ``t`` with :math:`g_0` at the radius of equal value.

	:param g_eps:
	:param t: A radius in ``(0, 1/3)``.
	:param xtol: Bisection tolerance.
	:param tol: Slack allowed on both inequalities, covering the bisection error.

	:raises curvquot.exceptions.DomainError: if ``t`` is outside ``(0, 1/3)``.
	:raises curvquot.exceptions.BracketError: if :math:`g_0 - g_\\varepsilon(t)` has no sign change on ``[0, 1/2]``.
	"""

	if not 0 < t < 1 / 3:
		raise DomainError(f"t must lie in (0, 1/3), got {t!r}", point=t)

	value, slope, *_ = g_eps.jet(float(t))

	def target(x: float) -> float:
		return x - x**3 - value

	lo, hi = 0.0, 0.5
	if target(lo) * target(hi) > 0:
		raise BracketError(f"g0 - {value} does not change sign on [{lo}, {hi}]", bracket=(lo, hi))

	t0 = float(optimize.bisect(target, lo, hi, xtol=xtol, maxiter=200))
	g0_slope = 1 - 3 * t0**2

	return ComparisonResult(
			t0=t0,
			slope_bound=bool(slope <= g0_slope + tol),
			growth_bound=bool(7 * t * slope >= t0 * g0_slope + value - tol),
			residual=abs(target(t0)),
			)


class BracketReport(NamedTuple):
	"""
	Result of :func:`~.bracket_bounds_check`.
	"""

	#: Whether all bounds hold on the grid.
	holds: bool

	#: The smallest margin by which any bound holds (negative if violated).
	worst_margin: float

	#: The abscissa of the smallest margin.
	worst_location: float


def bracket_bounds_check(g_eps: SmoothFunction1D, grid: int = 1024, tol: float = 1e-12) -> BracketReport:
	"""
	Check :math:`\\tfrac34 t \\le g_0(t) \\le t`, :math:`\\tfrac38 t \\le g_\\varepsilon(t) \\le t`
	and :math:`g_0'(t) \\ge \\tfrac14` on a grid of ``[0, 1/2]``.

	:param g_eps:
	:param grid:
	:param tol: Slack allowed on each bound.
	"""

	t = np.linspace(0, 0.5, grid)
	g0_value, g0_slope, _, _ = _g0_channels(t)
	value = g_eps(t)

	margins = np.stack([
			g0_value - 0.75 * t,
			t - g0_value,
			value - 0.375 * t,
			t - value,
			g0_slope - 0.25,
			])
	worst = margins.min(axis=0)
	index = int(np.argmin(worst))

	return BracketReport(
			holds=bool(worst[index] >= -tol),
			worst_margin=float(worst[index]),
			worst_location=float(t[index]),
			)


def fd_consistency(
		g: SmoothFunction1D,
		points: Sequence[float],
		policy: FDPolicy = DEFAULT_POLICY,
		) -> float:
	"""
	Returns the largest discrepancy between the derivative channels of ``g``
	and finite differences of its value channel at ``points``.

	:param g:
	:param points: Abscissae at least ``2h`` inside the domain.
	:param policy:
	"""

	worst = 0.0
	for r in points:
		channels = g.jet(float(r))
		for order in (1, 2, 3):
			estimate = fd_derivative(g, float(r), order, policy)
			worst = max(worst, abs(channels[order] - estimate))
	return worst


def profile_from_name(name: str) -> SmoothFunction1D:
	"""
	Returns the profile named by ``name``.

	Recognised names are ``'g0'``, ``'geps:<eps>'``, ``'linear'`` and ``'sin'``.

	:param name:

	:raises ValueError: if the name is not recognised.
	"""

	name = str(name).strip()

	if name == "g0":
		return G0
	elif name == "linear":
		return linear_profile()
	elif name == "sin":
		return sine_profile()
	elif name.startswith("geps:"):
		try:
			eps = float(name[5:])
		except ValueError:
			raise ValueError(f"Cannot parse eps in profile name {name!r}") from None
		return build_g_eps(eps)
	else:
		raise ValueError(f"Unknown profile {name!r}")


def require_positive_third_derivative_bound(g: SmoothFunction1D, delta: float) -> float:
	"""
	Returns :math:`-g'''(0)`, checking that ``delta`` does not exceed it.

	:param g:
	:param delta:

	:raises curvquot.exceptions.PreconditionError: if ``delta`` exceeds :math:`-g'''(0)`
		or :math:`g'''(0)` is not negative.
	"""

	bound = -g.derivative(0.0, 3)
	if not bound > 0:
		raise PreconditionError(f"{g.name} has g'''(0) = {-bound}, which is not negative", bound="third-derivative")
	if delta > bound:
		raise PreconditionError(f"delta = {delta} exceeds -g'''(0) = {bound}", bound="third-derivative")
	return bound
