#!/usr/bin/env python3
#
#  checks.py
"""
The registry of named verification checks.

Each check declares its default scene, tolerances and sample budgets,
all of which can be overridden from a :class:`~curvquot.config.CheckConfig`.

.. automodulesumm:: curvquot.checks
	:autosummary-sections: Classes ;; Functions
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
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

# 3rd party
import numpy as np

# this package
from curvquot.bundle import (
		ModelBundle,
		bundle_from_config,
		curvature_at_N,
		curvature_regular,
		extract_Q,
		fiber_geodesic_drift,
		positivity_scan_family,
		radial_derivative_check,
		select_L,
		zero_section_geodesic_drift,
		zero_section_oracle
		)
from curvquot.bundle.forms import v_form, w_form, w_lower_bound
from curvquot.bundle.presets import BASE_PRESETS, CURVED_BASES
from curvquot.config import CheckConfig
from curvquot.conic import ConicMetric, conic_positivity_check, tip_continuity_defect
from curvquot.curvature import (
		bianchi_defect,
		christoffel,
		curvature_form,
		euclidean_chart,
		geodesic,
		plane_volume,
		polar_plane_chart,
		riemann,
		round_sphere_chart,
		sectional,
		symmetry_defect
		)
from curvquot.exceptions import ConfigError, CurvquotError, UnknownCheckError
from curvquot.gluing import (
		DEFAULT_SCHEDULE,
		blend_defect,
		build_cutoff,
		canonical_scene,
		convexity_defect,
		glued_positivity_demo,
		radial_cutoff_check,
		verify_cutoff
		)
from curvquot.hopf import (
		Fibration,
		fibration,
		fibration_suite,
		induced_so5,
		induced_so5_alg,
		kernel_defect,
		oneill_check,
		projected_geodesic,
		qmat_identity,
		qmat_mul,
		quotient_metric_chart,
		radius_defect,
		random_sp2,
		random_sp2_algebra
		)
from curvquot.numerics import make_rng, metric_orthonormalize, random_unit_vector
from curvquot.smoothing import (
		G0,
		SmoothFunction1D,
		bracket_bounds_check,
		build_g_eps,
		check_shape_conditions,
		comparison_check,
		profile_from_name
		)

__all__ = [
		"Check",
		"CheckContext",
		"CheckResult",
		"get_check",
		"list_checks",
		"register",
		"run_check",
		]

_log = logging.getLogger(__name__)

_BUNDLE_KEYS = ("base", "n", "k", "Q", "warp", "L")

_SECTION_NOUNS = {"scene": "scene", "tolerances": "tolerance", "samples": "sample"}


class CheckResult(NamedTuple):
	"""
	The outcome of a check, before it is wrapped into a report.
	"""

	#: Whether every verified property held.
	passed: bool

	#: Check-specific measurements.
	details: Dict[str, Any]

	#: The smallest sectional curvature seen, for checks which scan for positivity.
	min_value: Optional[float] = None

	#: Where :attr:`~.CheckResult.min_value` was attained.
	witness_point: Optional[Sequence[float]] = None

	#: The plane at which :attr:`~.CheckResult.min_value` was attained.
	witness_plane: Optional[Sequence[Sequence[float]]] = None


class CheckContext(NamedTuple):
	"""
	Everything a check function receives.
	"""

	#: The configuration being run.
	config: CheckConfig

	#: The default scene updated with the configured values.
	scene: Dict[str, Any]

	#: The default tolerances updated with the configured values.
	tolerances: Dict[str, float]

	#: The default sample budgets updated with the configured values.
	samples: Dict[str, int]

	#: The logger to report progress to.
	logger: logging.Logger

	@property
	def seed(self) -> int:
		"""
		The configured seed.
		"""

		return self.config.seed

	def rng(self) -> np.random.Generator:
		"""
		Returns a fresh generator seeded with the configured seed.
		"""

		return make_rng(self.config.seed)

	def positive_floats(self, key: str) -> List[float]:
		"""
		Returns the scene value ``key`` as a list of positive floats.

		:param key:

		:raises curvquot.exceptions.ConfigError: naming the field if the value is unsuitable.
		"""

		value = self.scene[key]
		if isinstance(value, (int, float)) and not isinstance(value, bool):
			value = [value]

		try:
			values = [float(item) for item in value]
		except (TypeError, ValueError):
			raise ConfigError(f"scene.{key} must be a list of numbers, not {value!r}", field=f"scene.{key}") from None

		if not values or not all(math.isfinite(item) and item > 0 for item in values):
			raise ConfigError(f"scene.{key} must be a nonempty list of positive numbers", field=f"scene.{key}")

		return values

	def bundle(self, *, curved_base: bool = False, **overrides: Any) -> ModelBundle:
		"""
		Returns the model bundle described by the scene keys ``base``, ``n``, ``k``, ``Q``, ``warp`` and ``L``.

		:param curved_base: Reject bases without positive sectional curvature.
		:param overrides: Values to use instead of those in the scene.
		"""

		description = {key: self.scene[key] for key in _BUNDLE_KEYS if key in self.scene}
		description.update(overrides)

		base = description.get("base")
		if curved_base and isinstance(base, str) and base in BASE_PRESETS and base not in CURVED_BASES:
			raise ConfigError(
					f"Base {base!r} is not positively curved; choose one of {sorted(CURVED_BASES)}",
					field="scene.base",
					)

		try:
			return bundle_from_config(description)
		except ConfigError as e:
			raise ConfigError(str(e), field=f"scene.{e.field}") from None

	def fibration(self) -> Fibration:
		"""
		Returns the fibration named by the scene key ``fibration``.
		"""

		try:
			return fibration(self.scene["fibration"])
		except ConfigError as e:
			raise ConfigError(str(e), field="scene.fibration") from None

	def profile(self, name: str, key: str = "warp") -> SmoothFunction1D:
		"""
		Returns the profile called ``name``, reporting problems against the scene key ``key``.

		:param name:
		:param key:
		"""

		try:
			return profile_from_name(name)
		except (ValueError, CurvquotError) as e:
			raise ConfigError(str(e), field=f"scene.{key}") from None


#: The signature of a check function.
CheckFunction = Callable[[CheckContext], CheckResult]


@dataclass(frozen=True)
class Check:
	"""
	A named verification check.
	"""

	#: The name used on the command line and in configuration documents.
	name: str

	#: A one-line description.
	description: str

	#: The function which performs the check.
	function: CheckFunction

	#: The default scene.
	scene: Mapping[str, Any]

	#: The default tolerances.
	tolerances: Mapping[str, float]

	#: The default sample budgets.
	samples: Mapping[str, int]

	#: The tolerance reported as the report's headline ``tolerance``.
	primary: str

	def context(
			self,
			config: CheckConfig,
			logger: Optional[logging.Logger] = None,
			) -> CheckContext:
		"""
		Merge ``config`` into the defaults of this check.

		:param config:
		:param logger:

		:raises curvquot.exceptions.ConfigError: if ``config`` overrides a key this check does not have.
		"""

		for section, defaults in (("scene", self.scene), ("tolerances", self.tolerances), ("samples", self.samples)):
			for key in getattr(config, section):
				if key not in defaults:
					raise ConfigError(
							f"{self.name!r} has no {_SECTION_NOUNS[section]} called {key!r}",
							field=f"{section}.{key}",
							)

		return CheckContext(
				config=config,
				scene={**self.scene, **config.scene},
				tolerances={**self.tolerances, **config.tolerances},
				samples={**self.samples, **config.samples},
				logger=_log if logger is None else logger,
				)


_REGISTRY: Dict[str, Check] = {}


def register(
		name: str,
		description: str,
		*,
		scene: Optional[Mapping[str, Any]] = None,
		tolerances: Mapping[str, float],
		samples: Optional[Mapping[str, int]] = None,
		primary: Optional[str] = None,
		) -> Callable[[CheckFunction], CheckFunction]:
	"""
	Decorator to register a check function under ``name``.

	:param name:
	:param description: A one-line description.
	:param scene: The default scene.
	:param tolerances: The default tolerances.
	:param samples: The default sample budgets.
	:param primary: The tolerance reported as the headline ``tolerance``. Defaults to the first one.
	"""

	if name in _REGISTRY:
		raise ValueError(f"A check called {name!r} is already registered")

	def deco(function: CheckFunction) -> CheckFunction:
		_REGISTRY[name] = Check(
				name=name,
				description=description,
				function=function,
				scene=dict(scene or {}),
				tolerances=dict(tolerances),
				samples=dict(samples or {}),
				primary=primary or next(iter(tolerances)),
				)
		return function

	return deco


def list_checks() -> List[Tuple[str, str]]:
	"""
	Returns ``(name, description)`` for every registered check, in registration order.
	"""

	return [(check.name, check.description) for check in _REGISTRY.values()]


def get_check(name: str) -> Check:
	"""
	Returns the check called ``name``.

	:param name:

	:raises curvquot.exceptions.UnknownCheckError: if there is no such check.
	"""

	try:
		return _REGISTRY[name]
	except KeyError:
		raise UnknownCheckError(name) from None


def run_check(
		config: CheckConfig,
		logger: Optional[logging.Logger] = None,
		) -> Dict[str, Any]:
	"""
	Run the check named by ``config`` and return its report.

	The report has the keys ``check``, ``passed``, ``min_value``, ``witness_point``, ``witness_plane``,
	``samples``, ``tolerance``, ``tolerances``, ``details``, ``seed`` and ``duration``.
	Apart from ``duration`` it depends only on ``config``.

	Numerical failures raised by the library, such as an exhausted retry budget,
	are recorded in ``details`` and fail the check.

	:param config:
	:param logger: Optional logger. Defaults to this module's logger.
	:no-default logger:

	:raises curvquot.exceptions.ConfigError: if the configuration does not fit the check.
	"""

	if logger is None:
		logger_ = _log
	else:
		logger_ = logger

	check = get_check(config.check)
	ctx = check.context(config, logger_)

	logger_.info("Running %s with seed %d", check.name, config.seed)
	start = time.perf_counter()

	try:
		result = check.function(ctx)
	except ConfigError:
		raise
	except CurvquotError as e:
		logger_.warning("%s failed: %s", check.name, e)
		result = CheckResult(passed=False, details={"error": type(e).__name__, "message": str(e)})

	duration = time.perf_counter() - start
	logger_.info("%s %s in %.1f s", check.name, "passed" if result.passed else "FAILED", duration)

	return {
			"check": check.name,
			"passed": bool(result.passed),
			"min_value": result.min_value,
			"witness_point": result.witness_point,
			"witness_plane": result.witness_plane,
			"samples": dict(ctx.samples),
			"tolerance": ctx.tolerances[check.primary],
			"tolerances": dict(ctx.tolerances),
			"details": result.details,
			"seed": config.seed,
			"duration": duration,
			}


def _relative(value: float, expected: float) -> float:
	return abs(value - expected) / max(abs(expected), 1.0)


def _random_plane(rng: np.random.Generator, g: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
	d = len(g)
	e, f = metric_orthonormalize(g, [rng.standard_normal(d), rng.standard_normal(d)])
	return e, f


# ---------------------------------------------------------------------------
# Warp profiles
# ---------------------------------------------------------------------------


@register(
		"smoothing-lemma12",
		"g_eps is smooth at the tip, has g'' <= -r and g' <= g0', and equals g0/2 beyond eps.",
		scene={"eps": [0.02, 0.05, 0.1]},
		tolerances={"grid": 1e-8, "tip": 1e-6, "exact": 0.0},
		samples={"grid": 1024},
		)
def _smoothing_shape(ctx: CheckContext) -> CheckResult:
	grid = ctx.samples["grid"]
	tol = ctx.tolerances["grid"]
	r = np.linspace(0.0, 0.5, grid)
	g0_value, g0_slope, *_ = G0.jet(r)

	passed = True
	details: Dict[str, Any] = {}

	for eps in ctx.positive_floats("eps"):
		g = build_g_eps(eps, logger=ctx.logger)
		value, slope, second, _ = g.jet(r)
		shape = check_shape_conditions(g, grid=grid, tol=ctx.tolerances["tip"])

		tip_value, tip_slope, tip_second, tip_third = g.jet(0.0)
		tip_defect = max(abs(tip_value), abs(tip_slope - 1), abs(tip_second))
		concavity = float((second + r).max())
		slope_excess = float((slope - g0_slope).max())
		beyond = r >= eps
		exact_defect = float(np.abs(value[beyond] - g0_value[beyond] / 2).max(initial=0.0))

		ok = (
				shape.smooth_at_tip and shape.positively_curved and tip_defect <= ctx.tolerances["tip"]
				and concavity <= tol and slope_excess <= tol and exact_defect <= ctx.tolerances["exact"]
				)
		passed = passed and ok

		details[repr(eps)] = {
				"passed": ok,
				"tip_defect": tip_defect,
				"third_derivative_at_tip": tip_third,
				"max_second_plus_r": concavity,
				"max_slope_excess": slope_excess,
				"exact_region_defect": exact_defect,
				"worst_location": shape.worst_location,
				}

	return CheckResult(passed=passed, details=details)


@register(
		"smoothing-lemma13",
		"Compare g_eps(t) with g0 at the radius of equal value, and check the bracketing bounds.",
		scene={"eps": [0.02, 0.05, 0.1]},
		tolerances={"bisection": 1e-12, "bounds": 1e-12},
		samples={"t": 100, "grid": 1024},
		)
def _smoothing_comparison(ctx: CheckContext) -> CheckResult:
	t_values = np.linspace(0.01, 0.33, ctx.samples["t"])
	tol = ctx.tolerances["bisection"]

	passed = True
	details: Dict[str, Any] = {}

	for eps in ctx.positive_floats("eps"):
		g = build_g_eps(eps, logger=ctx.logger)
		failures: List[float] = []
		worst_residual = 0.0

		for t in t_values:
			result = comparison_check(g, float(t), xtol=tol / 10, tol=tol)
			worst_residual = max(worst_residual, result.residual)
			if not (result.slope_bound and result.growth_bound and result.residual <= tol):
				failures.append(float(t))

		bracket = bracket_bounds_check(g, grid=ctx.samples["grid"], tol=ctx.tolerances["bounds"])
		ok = not failures and bracket.holds
		passed = passed and ok

		details[repr(eps)] = {
				"passed": ok,
				"failures": failures,
				"worst_residual": worst_residual,
				"bracket_margin": bracket.worst_margin,
				"bracket_location": bracket.worst_location,
				}

	return CheckResult(passed=passed, details=details)


# ---------------------------------------------------------------------------
# Curvature oracle
# ---------------------------------------------------------------------------


@register(
		"oracle-sanity",
		"The finite-difference oracle reproduces the curvature of round spheres, flat space and polar coordinates.",
		scene={"dimension": 3},
		tolerances={"sphere": 1e-4, "flat": 1e-7, "bianchi": 1e-6, "christoffel": 1e-6, "closure": 1e-4, "speed": 1e-8},
		samples={"points": 5, "planes": 4, "steps": 2000},
		)
def _oracle_sanity(ctx: CheckContext) -> CheckResult:
	dimension = ctx.scene["dimension"]
	if not isinstance(dimension, int) or isinstance(dimension, bool) or dimension < 2:
		raise ConfigError(f"scene.dimension must be an integer of at least 2, not {dimension!r}", field="scene.dimension")

	tol = ctx.tolerances
	rng = ctx.rng()
	cases = [
			("unit-sphere", round_sphere_chart(1.0, dimension), 1.0, tol["sphere"]),
			("sphere-radius-2", round_sphere_chart(2.0, dimension), 0.25, tol["sphere"]),
			("flat", euclidean_chart(dimension), 0.0, tol["flat"]),
			]

	details: Dict[str, Any] = {}
	passed = True
	worst_bianchi = 0.0

	for name, chart, expected, allowed in cases:
		worst = 0.0
		for _ in range(ctx.samples["points"]):
			x = 0.5 * rng.random() * random_unit_vector(rng, dimension)
			tensor = riemann(chart, x)
			g = chart.tensor(x)
			worst_bianchi = max(worst_bianchi, bianchi_defect(tensor), symmetry_defect(tensor))
			for _ in range(ctx.samples["planes"]):
				e, f = _random_plane(rng, g)
				worst = max(worst, abs(curvature_form(tensor, e, f) / plane_volume(g, e, f) - expected))
		details[name] = {"expected": expected, "worst_deviation": worst}
		passed = passed and worst <= allowed

	polar = polar_plane_chart()
	christoffel_defect = 0.0
	for _ in range(ctx.samples["points"]):
		x = np.array([rng.uniform(0.5, 2.0), rng.uniform(-math.pi, math.pi)])
		gamma = christoffel(polar, x)
		christoffel_defect = max(
				christoffel_defect,
				abs(gamma[0, 1, 1] + x[0]),
				abs(gamma[1, 0, 1] - 1 / x[0]),
				abs(gamma[1, 1, 0] - 1 / x[0]),
				)
		worst_bianchi = max(worst_bianchi, bianchi_defect(riemann(polar, x)))

	# the equator of the unit sphere is the unit circle of the chart, traversed at unit speed
	circle = round_sphere_chart(1.0, 2)
	path = geodesic(circle, np.array([1.0, 0.0]), np.array([0.0, 1.0]), 2 * math.pi, ctx.samples["steps"])
	closure = float(np.linalg.norm(path.points[-1] - path.points[0]))
	speed_drift = float(np.abs(path.speeds(circle) - 1).max())

	details["polar_christoffel_defect"] = christoffel_defect
	details["bianchi_defect"] = worst_bianchi
	details["great_circle_closure"] = closure
	details["great_circle_speed_drift"] = speed_drift

	passed = (
			passed and christoffel_defect <= tol["christoffel"] and worst_bianchi <= tol["bianchi"]
			and closure <= tol["closure"] and speed_drift <= tol["speed"]
			)

	return CheckResult(passed=passed, details=details)


# ---------------------------------------------------------------------------
# Conic metrics
# ---------------------------------------------------------------------------


@register(
		"conic-equivalence",
		"Radial and tangent plane curvatures of conic metrics match -G''/G and (1 - G'^2)/G^2.",
		scene={"profiles": ["g0", "geps:0.05"], "dimension": 3, "annulus": [0.05, 0.45]},
		tolerances={"relative": 1e-3, "threshold": 0.0},
		samples={"points": 12, "planes": 8, "refine": 15},
		)
def _conic_equivalence(ctx: CheckContext) -> CheckResult:
	dimension = ctx.scene["dimension"]
	if not isinstance(dimension, int) or isinstance(dimension, bool) or dimension < 2:
		raise ConfigError(f"scene.dimension must be an integer of at least 2, not {dimension!r}", field="scene.dimension")

	annulus = ctx.positive_floats("annulus")
	if len(annulus) != 2 or annulus[0] >= annulus[1]:
		raise ConfigError("scene.annulus must be [r_lo, r_hi] with r_lo < r_hi", field="scene.annulus")

	profiles = ctx.scene["profiles"]
	if isinstance(profiles, str):
		profiles = [profiles]

	passed = True
	details: Dict[str, Any] = {}
	worst = None

	for name in profiles:
		c = ConicMetric(dimension, ctx.profile(name, "profiles"))
		report = conic_positivity_check(
				c,
				(annulus[0], annulus[1]),
				samples=ctx.samples["points"],
				planes_per_point=ctx.samples["planes"],
				refine=ctx.samples["refine"],
				seed=ctx.seed,
				threshold=ctx.tolerances["threshold"],
				)
		ok = report.passed and report.worst_deviation <= ctx.tolerances["relative"]
		passed = passed and ok

		details[name] = {
				"passed": ok,
				"min_value": report.min_value,
				"worst_deviation": report.worst_deviation,
				"tip_continuity_defect": tip_continuity_defect(c),
				"families": [[f.family, f.radius, f.oracle, f.candidate] for f in report.families],
				}
		if worst is None or report.scan.min_value < worst.min_value:
			worst = report.scan

	return CheckResult(
			passed=passed,
			details=details,
			min_value=None if worst is None else worst.min_value,
			witness_point=None if worst is None else list(worst.witness_point),
			witness_plane=None if worst is None else [list(v) for v in worst.witness_plane],
			)


# ---------------------------------------------------------------------------
# Model bundles
# ---------------------------------------------------------------------------


def _regular_point(b: ModelBundle, rng: np.random.Generator, r_lo: float, r_hi: float) -> Tuple[np.ndarray, np.ndarray]:
	n = b.base_dimension
	p = b.base_radius * rng.random()**(1 / n) * random_unit_vector(rng, n)
	v = rng.uniform(r_lo, r_hi) * random_unit_vector(rng, b.rank)
	return p, v


@register(
		"bundle-formula-vs-oracle",
		"The assembled curvature formula at regular points agrees with the finite-difference oracle.",
		scene={"base": "sphere2", "k": 2, "Q": "varying", "warp": "g0", "L": 1.0, "radii": [0.05, 0.3]},
		tolerances={"relative": 1e-3, "radial_ratio": 1e-3, "radial_component": 1e-6, "radial_plane": 1e-2},
		samples={"points": 30, "planes": 10},
		)
def _bundle_formula(ctx: CheckContext) -> CheckResult:
	b = ctx.bundle(curved_base=True)
	radii = ctx.positive_floats("radii")
	if len(radii) != 2 or radii[0] >= radii[1]:
		raise ConfigError("scene.radii must be [r_lo, r_hi] with r_lo < r_hi", field="scene.radii")

	rng = ctx.rng()
	chart = b.chart()
	n = b.base_dimension
	tol = ctx.tolerances

	worst = 0.0
	witness: Optional[Tuple[List[float], List[List[float]]]] = None
	ratio_defect = radial_component = 0.0

	for _ in range(ctx.samples["points"]):
		p, v = _regular_point(b, rng, *radii)
		x = b.join(p, v)
		tensor = riemann(chart, x)
		g = chart.tensor(x)

		for _ in range(ctx.samples["planes"]):
			E, F = _random_plane(rng, g)
			oracle = curvature_form(tensor, E, F) / plane_volume(g, E, F)
			deviation = _relative(curvature_regular(b, p, v, E, F), oracle)
			if deviation > worst:
				worst = deviation
				witness = (x.tolist(), [E.tolist(), F.tolist()])

		for field in ("vertical", "basic"):
			report = radial_derivative_check(b, p, v, field)
			ratio_defect = max(ratio_defect, _relative(report.ratio, report.expected))
			if field == "vertical":
				radial_component = max(radial_component, abs(report.radial_component))

	# the plane of the radial direction and a turn direction, at r = 0.2 along the first fibre axis
	p0 = np.zeros(n)
	v0 = np.zeros(b.rank)
	v0[0] = 0.2
	turn = np.zeros(b.rank)
	turn[1] = 1.0
	radial_plane = curvature_regular(b, p0, v0, b.join(np.zeros(n), v0), b.join(np.zeros(n), turn))
	_, _, second, _ = b.profile.jet(0.2)
	expected_radial = -second / b.profile(0.2)

	passed = (
			worst <= tol["relative"] and ratio_defect <= tol["radial_ratio"]
			and radial_component <= tol["radial_component"]
			and abs(radial_plane - expected_radial) <= tol["radial_plane"]
			)

	details = {
			"bundle": b.name,
			"worst_relative_error": worst,
			"radial_ratio_defect": ratio_defect,
			"radial_component": radial_component,
			"radial_plane": radial_plane,
			"radial_plane_expected": expected_radial,
			}

	return CheckResult(
			passed=passed,
			details=details,
			witness_point=None if witness is None else witness[0],
			witness_plane=None if witness is None else witness[1],
			)


@register(
		"bundle-zero-section",
		"Curvature along the zero section matches the oracle, and the fibres and zero section are totally geodesic.",
		scene={"base": "sphere2", "k": 2, "Q": "varying", "warp": "g0", "L": 1.0, "extrapolate": False},
		tolerances={"relative": 1e-3, "vertical": 1e-3, "geodesic": 1e-6},
		samples={"configurations": 10, "geodesics": 3, "steps": 100},
		)
def _bundle_zero_section(ctx: CheckContext) -> CheckResult:
	b = ctx.bundle(curved_base=True)
	extrapolate = ctx.scene["extrapolate"]
	if not isinstance(extrapolate, bool):
		raise ConfigError(f"scene.extrapolate must be true or false, not {extrapolate!r}", field="scene.extrapolate")

	rng = ctx.rng()
	n, k = b.base_dimension, b.rank
	tol = ctx.tolerances

	# a purely vertical plane first, where the value is -G'''(0)
	A, B = np.eye(k)[0], np.eye(k)[1 % k]
	vertical = curvature_at_N(b, np.zeros(n), A, B, np.zeros(n), np.zeros(n))
	_, _, _, third = b.profile.jet(0.0)

	worst = 0.0
	configurations = [(np.zeros(n), A, B, np.zeros(n), np.zeros(n))]
	for _ in range(ctx.samples["configurations"] - 1):
		p = 0.5 * b.base_radius * rng.random() * random_unit_vector(rng, n)
		configurations.append((p, rng.standard_normal(k), rng.standard_normal(k), rng.standard_normal(n), rng.standard_normal(n)))

	values = []
	for p, A_, B_, X, Y in configurations:
		formula = curvature_at_N(b, p, A_, B_, X, Y)
		oracle = zero_section_oracle(b, p, A_, B_, X, Y, extrapolate=extrapolate)
		values.append([formula, oracle])
		worst = max(worst, _relative(formula, oracle))

	fiber_drift = section_drift = 0.0
	T = 0.2
	for _ in range(ctx.samples["geodesics"]):
		p = 0.5 * b.base_radius * rng.random() * random_unit_vector(rng, n)
		v = 0.1 * random_unit_vector(rng, k)
		fiber_drift = max(
				fiber_drift,
				fiber_geodesic_drift(b, p, v, random_unit_vector(rng, k), T=T, steps=ctx.samples["steps"]),
				)
		section_drift = max(
				section_drift,
				zero_section_geodesic_drift(b, p, random_unit_vector(rng, n), T=T, steps=ctx.samples["steps"]),
				)

	passed = (
			worst <= tol["relative"] and abs(vertical + third) <= tol["vertical"]
			and max(fiber_drift, section_drift) <= tol["geodesic"]
			)

	details = {
			"bundle": b.name,
			"vertical_plane": vertical,
			"vertical_plane_expected": -third,
			"worst_relative_error": worst,
			"values": values,
			"fiber_geodesic_drift": fiber_drift,
			"zero_section_geodesic_drift": section_drift,
			}

	return CheckResult(passed=passed, details=details)


@register(
		"bundle-vw-identities",
		"The split identity for V and the lower bound for W hold on random draws.",
		scene={"base_dimension": 3, "rank": 3},
		tolerances={"identity": 1e-12, "bound": 1e-12},
		samples={"draws": 100000},
		)
def _bundle_vw(ctx: CheckContext) -> CheckResult:
	n, k = ctx.scene["base_dimension"], ctx.scene["rank"]
	for key, value in (("base_dimension", n), ("rank", k)):
		if not isinstance(value, int) or isinstance(value, bool) or value < 2:
			raise ConfigError(f"scene.{key} must be an integer of at least 2, not {value!r}", field=f"scene.{key}")

	rng = ctx.rng()
	draws = ctx.samples["draws"]
	m = n + k

	def split(u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
		# vertical parts in the last k coordinates, horizontal in the first n
		vertical = np.zeros_like(u)
		vertical[:, n:] = u[:, n:]
		return vertical, u - vertical

	E = rng.standard_normal((draws, m))
	F = rng.standard_normal((draws, m))
	A, X = split(E)
	B, Y = split(F)

	lhs = v_form(A + X, B + Y)
	rhs = v_form(A, B) + v_form(X, Y) + w_form(A, B, X, Y)
	scale = np.maximum(1.0, np.abs(lhs))
	identity_defect = float((np.abs(lhs - rhs) / scale).max())

	# orthonormal pairs for the lower bound
	frames = np.linalg.qr(rng.standard_normal((draws, m, 2)))[0]
	A, X = split(frames[:, :, 0])
	B, Y = split(frames[:, :, 1])
	W = w_form(A, B, X, Y)
	bound = w_lower_bound(A, B, X, Y)
	negativity = float(max(0.0, -W.min()))
	bound_violation = float(max(0.0, (bound - W).max()))

	passed = (
			identity_defect <= ctx.tolerances["identity"] and negativity <= ctx.tolerances["bound"]
			and bound_violation <= ctx.tolerances["bound"]
			)

	details = {
			"identity_defect": identity_defect,
			"w_negativity": negativity,
			"lower_bound_violation": bound_violation,
			"min_w": float(W.min()),
			}

	return CheckResult(passed=passed, details=details)


@register(
		"bundle-positivity-pipeline",
		"select_L then scan the family of g_eps warps near the zero section for positive curvature.",
		scene={"base": "sphere2", "k": 2, "Q": "varying", "warp": "g0", "eps": [0.02, 0.05], "rho0": 0.1},
		tolerances={"jet": 1e-6, "threshold": 0.0},
		samples={"points": 16, "planes": 8, "refine": 15, "M1": 200},
		)
def _bundle_pipeline(ctx: CheckContext) -> CheckResult:
	b = ctx.bundle()
	rho0 = ctx.positive_floats("rho0")
	if len(rho0) != 1:
		raise ConfigError("scene.rho0 must be a single number", field="scene.rho0")

	L = select_L(b, samples=ctx.samples["M1"], seed=ctx.seed, logger=ctx.logger)
	family = positivity_scan_family(
			b,
			ctx.positive_floats("eps"),
			L,
			rho0[0],
			samples=ctx.samples["points"],
			planes_per_point=ctx.samples["planes"],
			refine=ctx.samples["refine"],
			seed=ctx.seed,
			)

	threshold = ctx.tolerances["threshold"]
	scanned = [report for _, report in family.reports if not report.empty]
	worst = min(scanned, key=lambda report: report.min_value, default=None)

	passed = (
			not family.empty and all(report.min_value > threshold for report in scanned)
			and family.jet_defect <= ctx.tolerances["jet"]
			)

	details = {
			"bundle": b.name,
			"L": L,
			"r_max": family.r_max,
			"jet_defect": family.jet_defect,
			"minima": {repr(eps): report.as_dict()["min_value"] for eps, report in family.reports},
			}

	return CheckResult(
			passed=passed,
			details=details,
			min_value=None if worst is None else worst.min_value,
			witness_point=None if worst is None else list(worst.witness_point),
			witness_plane=None if worst is None else [list(v) for v in worst.witness_plane],
			)


# ---------------------------------------------------------------------------
# Gluing
# ---------------------------------------------------------------------------


@register(
		"glue-cutoff-bounds",
		"The cutoff and its radial extension obey the derivative bounds used for gluing.",
		scene={"eps": list(DEFAULT_SCHEDULE), "dimension": 4},
		tolerances={"gradient": 1e-6, "hessian": 1e-5, "rotation": 1e-12},
		samples={"radial": 1000, "grid": 4001},
		)
def _glue_cutoff(ctx: CheckContext) -> CheckResult:
	dimension = ctx.scene["dimension"]
	if not isinstance(dimension, int) or isinstance(dimension, bool) or dimension < 1:
		raise ConfigError(f"scene.dimension must be a positive integer, not {dimension!r}", field="scene.dimension")

	passed = True
	details: Dict[str, Any] = {}

	for eps in ctx.positive_floats("eps"):
		c = build_cutoff(eps)
		report = verify_cutoff(c, grid=ctx.samples["grid"])
		radial = radial_cutoff_check(c, dimension, samples=ctx.samples["radial"], seed=ctx.seed)

		ok = (
				report.passed and radial.max_gradient <= eps + ctx.tolerances["gradient"]
				and radial.max_hessian <= 2 * eps + ctx.tolerances["hessian"]
				and radial.rotation_defect <= ctx.tolerances["rotation"]
				)
		passed = passed and ok

		details[repr(eps)] = {
				"passed": ok,
				"lambda": c.lam,
				"log_delta1": c.log_delta1,
				"delta2": c.delta2,
				"max_first": report.max_first,
				"max_second": report.max_second,
				"max_gradient": radial.max_gradient,
				"max_hessian": radial.max_hessian,
				"rotation_defect": radial.rotation_defect,
				}

	return CheckResult(passed=passed, details=details)


@register(
		"glue-positivity-demo",
		"Glue the canonical scene over the retry schedule until the blend annulus is positively curved.",
		scene={"base": "sphere2", "k": 2, "Q": "varying", "warp": "g0", "schedule": list(DEFAULT_SCHEDULE)},
		tolerances={"convexity": 1e-4, "monotone": 1e-8},
		samples={"points": 12, "planes": 8, "refine": 15},
		)
def _glue_demo(ctx: CheckContext) -> CheckResult:
	schedule = ctx.positive_floats("schedule")
	bundle = ctx.bundle()

	scene = canonical_scene(
			base=str(ctx.scene["base"]),
			rank=bundle.rank,
			connection=str(ctx.scene["Q"]),
			warp=str(ctx.scene["warp"]),
			seed=ctx.seed,
			)

	convexity = convexity_defect(scene.m0, scene.m1, scene.anchors)

	# defects of the glued curvature at a fixed point just off the zero section
	sample = np.array(scene.anchors[0], dtype=float)
	sample[-1] += scene.r_min
	defects = [blend_defect(scene, build_cutoff(eps), sample) for eps in schedule]
	monotone = all(later <= earlier + ctx.tolerances["monotone"] for earlier, later in zip(defects, defects[1:]))

	details: Dict[str, Any] = {"convexity_defect": convexity, "blend_defects": defects, "monotone": monotone}

	try:
		demo = glued_positivity_demo(
				scene,
				schedule,
				samples=ctx.samples["points"],
				planes_per_point=ctx.samples["planes"],
				refine=ctx.samples["refine"],
				seed=ctx.seed,
				logger=ctx.logger,
				)
	except CurvquotError as e:
		details["error"] = type(e).__name__
		details["message"] = str(e)
		details["attempts"] = getattr(e, "attempts", ())
		witness = getattr(e, "witness", None)
		return CheckResult(passed=False, details=details, witness_point=None if witness is None else list(witness))

	details["eps"] = demo.eps
	details["attempts"] = demo.attempts

	return CheckResult(
			passed=convexity <= ctx.tolerances["convexity"] and monotone,
			details=details,
			min_value=demo.report.min_value,
			witness_point=list(demo.report.witness_point),
			witness_plane=[list(v) for v in demo.report.witness_plane],
			)


# ---------------------------------------------------------------------------
# Hopf fibrations
# ---------------------------------------------------------------------------


@register(
		"hopf-radius-half",
		"The quotient metric of the Hopf map is the round sphere of radius 1/2.",
		scene={"fibration": "s7"},
		tolerances={
				"invariance": 1e-12,
				"stretch": 1e-8,
				"annihilation": 1e-8,
				"orthogonality": 1e-12,
				"radius": 1e-9,
				"curvature": 1e-3,
				"length": 1e-3,
				"closure": 1e-10,
				},
		samples={"suite": 1000, "chart": 20, "oneill": 10},
		primary="stretch",
		)
def _hopf_radius(ctx: CheckContext) -> CheckResult:
	fb = ctx.fibration()
	tol = ctx.tolerances
	rng = ctx.rng()

	suite = fibration_suite(fb, samples=ctx.samples["suite"], seed=ctx.seed)

	chart = quotient_metric_chart(fb)
	d = fb.algebra_dimension
	points = [rng.random() * random_unit_vector(rng, d) for _ in range(ctx.samples["chart"])]
	radius = radius_defect(fb, points)

	curvature_defect = 0.0
	for y in points:
		e, f = _random_plane(rng, chart.tensor(y))
		curvature_defect = max(curvature_defect, abs(sectional(chart, y, e, f) - 4.0))

	path = projected_geodesic(fb)
	oneill = oneill_check(fb, samples=ctx.samples["oneill"], seed=ctx.seed)
	oneill_defect = max(
			max(abs(value - 1.0) for value in oneill.ambient),
			max(abs(value - 4.0) for value in oneill.quotient),
			)

	passed = (
			suite.invariance <= tol["invariance"] and suite.norm <= tol["invariance"]
			and suite.homogeneity <= tol["invariance"] and suite.horizontal_stretch <= tol["stretch"]
			and suite.orbit_annihilation <= tol["annihilation"]
			and suite.horizontal_orthogonality <= tol["orthogonality"] and radius <= tol["radius"]
			and curvature_defect <= tol["curvature"] and abs(path.length - math.pi) <= tol["length"]
			and path.closure_defect <= tol["closure"] and path.horizontality_defect <= tol["orthogonality"]
			and oneill.min_gap >= 0 and oneill_defect <= tol["curvature"]
			)

	details = {
			"fibration": fb.kind,
			**suite._asdict(),
			"radius_defect": radius,
			"curvature_defect": curvature_defect,
			"geodesic_length": path.length,
			"geodesic_closure": path.closure_defect,
			"geodesic_horizontality": path.horizontality_defect,
			"oneill_min_gap": oneill.min_gap,
			"oneill_defect": oneill_defect,
			}

	return CheckResult(passed=passed, details=details)


@register(
		"hopf-homomorphisms",
		"The induced maps into the rotations of the target sphere are orthogonal homomorphisms.",
		scene={"fibration": "s7"},
		tolerances={
				"orthogonality": 1e-7,
				"homomorphism": 1e-7,
				"kernel": 1e-10,
				"antisymmetry": 1e-6,
				"bracket": 1e-5,
				},
		samples={"pairs": 5, "fit": 32},
		primary="homomorphism",
		)
def _hopf_homomorphisms(ctx: CheckContext) -> CheckResult:
	fb = ctx.fibration()
	tol = ctx.tolerances
	rng = ctx.rng()
	fit = ctx.samples["fit"]
	identity = np.eye(fb.target_dimension)

	orthogonality = homomorphism = antisymmetry = bracket = 0.0

	for _ in range(ctx.samples["pairs"]):
		A, B = random_sp2(fb, rng), random_sp2(fb, rng)
		gamma_a = induced_so5(fb, A, samples=fit, seed=ctx.seed)
		gamma_b = induced_so5(fb, B, samples=fit, seed=ctx.seed)
		gamma_ab = induced_so5(fb, qmat_mul(A, B), samples=fit, seed=ctx.seed)

		orthogonality = max(
				orthogonality,
				float(np.abs(gamma_a.T @ gamma_a - identity).max()),
				abs(float(np.linalg.det(gamma_a)) - 1),
				)
		homomorphism = max(homomorphism, float(np.abs(gamma_ab - gamma_a @ gamma_b).max()))

		U, V = random_sp2_algebra(fb, rng, 0.5), random_sp2_algebra(fb, rng, 0.5)
		gamma_u = induced_so5_alg(fb, U, samples=fit, seed=ctx.seed)
		gamma_v = induced_so5_alg(fb, V, samples=fit, seed=ctx.seed)
		gamma_uv = induced_so5_alg(fb, qmat_mul(U, V) - qmat_mul(V, U), samples=fit, seed=ctx.seed)

		antisymmetry = max(antisymmetry, float(np.abs(gamma_u + gamma_u.T).max()))
		bracket = max(bracket, float(np.abs(gamma_uv - (gamma_u @ gamma_v - gamma_v @ gamma_u)).max()))

	kernel = kernel_defect(fb, samples=fit, seed=ctx.seed)
	unit = float(np.abs(induced_so5(fb, qmat_identity(fb), samples=fit, seed=ctx.seed) - identity).max())

	passed = (
			orthogonality <= tol["orthogonality"] and homomorphism <= tol["homomorphism"]
			and kernel <= tol["kernel"] and unit <= tol["kernel"] and antisymmetry <= tol["antisymmetry"]
			and bracket <= tol["bracket"]
			)

	details = {
			"fibration": fb.kind,
			"orthogonality_defect": orthogonality,
			"homomorphism_defect": homomorphism,
			"kernel_defect": kernel,
			"identity_defect": unit,
			"algebra_antisymmetry": antisymmetry,
			"algebra_bracket_defect": bracket,
			}

	return CheckResult(passed=passed, details=details)


@register(
		"bundle-q-roundtrip",
		"extract_Q recovers the connection matrices of every connection preset.",
		scene={"base": "sphere2", "k": 2, "connections": ["zero", "constant", "varying"]},
		tolerances={"roundtrip": 1e-5},
		samples={"points": 3},
		)
def _bundle_roundtrip(ctx: CheckContext) -> CheckResult:
	connections = ctx.scene["connections"]
	if isinstance(connections, str):
		connections = [connections]

	rng = ctx.rng()
	passed = True
	details: Dict[str, Any] = {}

	for name in connections:
		b = ctx.bundle(Q=name)
		chart = b.chart()
		worst = 0.0
		for _ in range(ctx.samples["points"]):
			p = b.base_radius * rng.random() * random_unit_vector(rng, b.base_dimension)
			extracted = extract_Q(chart, p, b.base_dimension)
			worst = max(worst, float(np.abs(extracted.matrices - b.connection_at(p)).max()))
		details[name] = worst
		passed = passed and worst <= ctx.tolerances["roundtrip"]

	return CheckResult(passed=passed, details=details)
