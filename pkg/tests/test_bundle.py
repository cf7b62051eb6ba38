# stdlib
import math

# 3rd party
import numpy as np
import pytest

# this package
from curvquot.bundle import (
		ModelBundle,
		TotalVector,
		base_curvature_minimum,
		base_preset,
		basic_lift,
		bracket_operator,
		bracket_vertical,
		bundle_from_config,
		bundle_sampler,
		connection_preset,
		curvature_at_N,
		curvature_regular,
		decompose,
		estimate_M1,
		extract_Q,
		fiber_geodesic_drift,
		fiber_tensor,
		jet_agreement,
		lift_bracket_fd,
		model_bundle,
		positivity_scan_family,
		radial_derivative_check,
		radial_fiber_chart,
		select_L,
		total_metric,
		total_tensor,
		zero_section_geodesic_drift,
		zero_section_oracle
		)
from curvquot.bundle.presets import rotation_generator
from curvquot.curvature import ChartMetric, sectional
from curvquot.exceptions import ConfigError, DomainError, PreconditionError
from curvquot.numerics import SymMatrix, make_rng
from curvquot.smoothing import G0, build_g_eps, linear_profile


# ranks where so(k) is not abelian, so the commutator of the connection matrices contributes
noncommuting = [
		pytest.param(3, "constant", id="rank3-constant"),
		pytest.param(3, "varying", id="rank3-varying"),
		pytest.param(4, "constant", id="rank4-constant"),
		pytest.param(4, "varying", id="rank4-varying"),
		]


@pytest.fixture(scope="module")
def twisted() -> ModelBundle:
	return model_bundle("sphere2", 2, "varying", "g0", L=1.0)


@pytest.fixture(scope="module")
def product() -> ModelBundle:
	return model_bundle("sphere2", 2, "zero", "g0", L=0.0)


class TestPresets:

	@pytest.mark.parametrize("name, dimension", [("sphere2", 2), ("sphere4", 4), ("torus", 2)])
	def test_base(self, name: str, dimension: int):
		base = base_preset(name)
		assert base.dimension == dimension
		assert base.name == name
		assert not base.contains(np.ones(dimension))

	def test_unknown_base(self):
		with pytest.raises(ConfigError, match="Unknown base 'klein'") as excinfo:
			base_preset("klein")
		assert excinfo.value.field == "base"

	def test_rotation_generator(self):
		assert rotation_generator(2, 0, 1).tolist() == [[0.0, -1.0], [1.0, 0.0]]

	@pytest.mark.parametrize("name", ["zero", "constant", "varying"])
	def test_connections_are_antisymmetric(self, name: str):
		matrices = connection_preset(name, 2, 3)(np.array([0.2, -0.1]))
		assert matrices.shape == (2, 3, 3)
		np.testing.assert_array_equal(matrices, -np.swapaxes(matrices, 1, 2))

	@pytest.mark.parametrize(
			"args, field",
			[
					pytest.param(("zero", 2, 1), 'k', id="rank"),
					pytest.param(("curly", 2, 2), 'Q', id="name"),
					]
			)
	def test_connection_errors(self, args, field: str):
		with pytest.raises(ConfigError) as excinfo:
			connection_preset(*args)
		assert excinfo.value.field == field

	def test_model_bundle(self, twisted: ModelBundle):
		assert twisted.name == "sphere2×R2[Q=varying, G=g0, L=1.0]"
		assert twisted.base_dimension == 2
		assert twisted.dimension == 4
		assert twisted.profile is G0

	@pytest.mark.parametrize(
			"kwargs, field",
			[
					pytest.param({"warp": "nope"}, "warp", id="warp"),
					pytest.param({"L": -1.0}, 'L', id="L"),
					pytest.param({"base": "klein"}, "base", id="base"),
					pytest.param({"connection": "curly"}, 'Q', id="connection"),
					]
			)
	def test_model_bundle_errors(self, kwargs, field: str):
		with pytest.raises(ConfigError) as excinfo:
			model_bundle(**kwargs)
		assert excinfo.value.field == field

	def test_from_config(self):
		b = bundle_from_config({"base": "sphere4", 'n': 4, 'k': 3, 'Q': "constant", "warp": "linear", 'L': 0.5})
		assert b.base_dimension == 4
		assert b.rank == 3
		assert b.L == 0.5
		assert b.profile.name == "linear"

	@pytest.mark.parametrize(
			"config, field",
			[
					pytest.param({"base": "sphere2", 'n': 3}, 'n', id="n"),
					pytest.param({'k': "two"}, 'k', id="k"),
					pytest.param({'L': "big"}, 'L', id="L"),
					pytest.param(["sphere2"], "bundle", id="not_mapping"),
					]
			)
	def test_from_config_errors(self, config, field: str):
		with pytest.raises(ConfigError) as excinfo:
			bundle_from_config(config)
		assert excinfo.value.field == field


class TestModelBundle:

	def test_split_join(self, twisted: ModelBundle):
		p, v = twisted.split([1, 2, 3, 4])
		assert p.tolist() == [1.0, 2.0]
		assert v.tolist() == [3.0, 4.0]
		assert twisted.join(p, v).tolist() == [1.0, 2.0, 3.0, 4.0]

	def test_total_vector(self):
		vector = TotalVector.from_array([1, 2, 3], 1)
		assert vector.base.tolist() == [1.0]
		assert vector.fiber.tolist() == [2.0, 3.0]
		assert vector.as_array().tolist() == [1.0, 2.0, 3.0]

	def test_contains(self, twisted: ModelBundle):
		assert twisted.contains([0.1, 0.1, 0.3, 0.4])
		assert not twisted.contains([0.1, 0.1, 0.8, 0.8])
		assert not twisted.contains([0.8, 0.1, 0.0, 0.0])

	def test_replace(self, twisted: ModelBundle):
		assert twisted.with_L(2).L == 2.0
		assert twisted.with_profile(linear_profile()).profile.name == "linear"
		assert twisted.L == 1.0

	def test_connection_shape(self):
		b = model_bundle()._replace(connection=lambda p: np.zeros((3, 2, 2)))

		with pytest.raises(ValueError, match="expected"):
			b.connection_at([0.0, 0.0])


class TestTotalMetric:

	def test_fiber_tensor(self):
		assert fiber_tensor(G0, [0.0, 0.0]).tolist() == [[1.0, 0.0], [0.0, 1.0]]

		g = fiber_tensor(G0, [0.2, 0.0])
		assert g[0, 0] == pytest.approx(1.0)
		assert g[1, 1] == pytest.approx(0.96**2)
		assert g[0, 1] == 0

	def test_zero_section(self, twisted: ModelBundle):
		p = np.array([0.1, -0.2])
		g = total_tensor(twisted, p, np.zeros(2))
		np.testing.assert_allclose(g[:2, :2], twisted.base.tensor(p))
		np.testing.assert_array_equal(g[:2, 2:], 0)
		np.testing.assert_array_equal(g[2:, 2:], np.eye(2))
		assert isinstance(total_metric(twisted, p, np.zeros(2)), SymMatrix)

	def test_basic_lift(self, twisted: ModelBundle):
		p, v = np.array([0.1, -0.2]), np.array([0.15, 0.1])
		X = np.array([0.7, -0.4])
		g = total_tensor(twisted, p, v)
		lift = basic_lift(twisted, p, v, X).as_array()

		for direction in np.eye(2):
			assert lift @ g @ np.concatenate([np.zeros(2), direction]) == pytest.approx(0, abs=1e-14)

		shrink = 1 - twisted.L * float(v @ v)
		assert lift @ g @ lift == pytest.approx(shrink * twisted.base.inner(p, X, X))

	def test_domain(self, twisted: ModelBundle):
		with pytest.raises(DomainError, match="is not below 1"):
			total_tensor(twisted.with_L(10), np.zeros(2), np.array([0.3, 0.2]))


class TestConnection:

	def test_commuting(self):
		b = model_bundle("sphere2", 2, "constant")
		assert not bracket_operator(b, np.zeros(2), [1, 0], [0, 1]).any()

	def test_constant_rank_three(self):
		b = model_bundle("sphere2", 3, "constant")
		Q0, Q1 = b.connection_at(np.zeros(2))
		expected = Q1 @ Q0 - Q0 @ Q1
		np.testing.assert_allclose(bracket_operator(b, np.zeros(2), [1, 0], [0, 1]), expected, atol=1e-12)

	@pytest.mark.parametrize("rank", [3, 4])
	def test_constant_does_not_commute(self, rank: int):
		b = model_bundle("sphere2", rank, "constant")
		assert np.abs(bracket_operator(b, np.array([0.1, -0.1]), [1, 0], [0, 1])).max() > 0.5

	def test_bracket_matches_finite_differences(self, twisted: ModelBundle):
		p, v = np.array([0.1, -0.2]), np.array([0.15, 0.1])
		n = twisted.base_dimension

		def lift(i: int):
			return lambda x: basic_lift(twisted, x[:n], x[n:], np.eye(n)[i]).as_array()

		bracket = lift_bracket_fd(lift(0), lift(1), twisted.join(p, v))
		np.testing.assert_allclose(bracket[:n], 0, atol=1e-10)
		np.testing.assert_allclose(bracket[n:], bracket_vertical(twisted, p, v, 0, 1), atol=1e-8)

	def test_extract_roundtrip(self, twisted: ModelBundle):
		p = np.array([0.1, -0.2])
		extracted = extract_Q(twisted.chart(), p, 2)

		np.testing.assert_allclose(extracted.matrices, twisted.connection_at(p), atol=1e-8)
		assert extracted.asymmetry_defect < 1e-8
		assert extracted.adaptation_defect == 0

	def test_extract_not_adapted(self):
		skew = np.eye(3)
		skew[0, 2] = skew[2, 0] = 0.1
		ambient = ChartMetric(3, lambda x: skew, name="skew")

		with pytest.raises(PreconditionError, match="not adapted") as excinfo:
			extract_Q(ambient, np.zeros(2), 2)
		assert excinfo.value.bound == "adapted-metric"


class TestZeroSection:

	def test_product(self, product: ModelBundle):
		A, B = np.array([1.0, 0.0]), np.array([0.0, 1.0])
		X, Y = np.array([1.0, 0.0]), np.array([0.0, 1.0])

		# the base is the unit sphere, with g = 4 at the origin of the chart
		assert curvature_at_N(product, np.zeros(2), A, B, X, Y) == pytest.approx(22.0, abs=1e-4)
		assert zero_section_oracle(product, np.zeros(2), A, B, X, Y) == pytest.approx(22.0, abs=1e-4)

	def test_twisted(self, twisted: ModelBundle):
		p = np.array([0.1, -0.1])
		A, B = np.array([0.6, 0.8]), np.array([-0.3, 0.5])
		X, Y = np.array([1.0, 0.2]), np.array([0.1, 0.7])

		formula = curvature_at_N(twisted, p, A, B, X, Y)
		oracle = zero_section_oracle(twisted, p, A, B, X, Y)
		assert formula == pytest.approx(oracle, rel=1e-3, abs=1e-4)

	def test_geodesic(self, twisted: ModelBundle):
		drift = zero_section_geodesic_drift(twisted, np.array([0.1, 0.0]), np.array([0.2, 0.1]), T=1.0, steps=20)
		assert drift < 1e-12

	@pytest.mark.parametrize("rank, connection", noncommuting)
	def test_noncommuting(self, rank: int, connection: str):
		b = model_bundle("sphere2", rank, connection, "g0", L=1.0)
		p = np.array([0.1, -0.1])
		A, B = np.array([0.6, 0.8, -0.3, 0.2])[:rank], np.array([-0.3, 0.5, 0.4, -0.1])[:rank]
		X, Y = np.array([1.0, 0.2]), np.array([0.1, 0.7])

		formula = curvature_at_N(b, p, A, B, X, Y)
		oracle = zero_section_oracle(b, p, A, B, X, Y)
		assert formula == pytest.approx(oracle, rel=1e-3, abs=1e-4)


class TestRegularPoints:

	def test_decompose(self, twisted: ModelBundle):
		p, v = np.array([0.1, -0.2]), np.array([0.15, 0.1])
		vector = np.array([1.0, 0.3, 0.2, -0.5])
		parts = decompose(twisted, p, v, vector)

		unit = np.concatenate([np.zeros(2), v / np.linalg.norm(v)])
		np.testing.assert_allclose(parts.radial * unit + parts.vertical + parts.basic, vector, atol=1e-14)
		assert parts.base.tolist() == [1.0, 0.3]
		assert parts.vertical[2:] @ v == pytest.approx(0, abs=1e-14)

		with pytest.raises(DomainError, match="regular points"):
			decompose(twisted, p, np.zeros(2), vector)

	def test_radial_fiber_chart(self, twisted: ModelBundle):
		chart, start, jacobian = radial_fiber_chart(twisted, np.array([0.1, -0.2]), np.array([0.15, 0.1]))
		assert chart.dimension == 3
		assert start.tolist() == [0.1, -0.2, math.pi / 2]
		assert jacobian.shape == (4, 3)

	def test_formula_matches_oracle(self, twisted: ModelBundle):
		p, v = np.array([0.1, -0.2]), np.array([0.15, 0.1])
		E = np.array([1.0, 0.3, 0.2, -0.5])
		F = np.array([-0.2, 1.0, 0.4, 0.3])

		formula = curvature_regular(twisted, p, v, E, F)
		oracle = sectional(twisted.chart(), twisted.join(p, v), E, F)
		assert formula == pytest.approx(oracle, rel=1e-3, abs=1e-4)

	@pytest.mark.parametrize("rank, connection", noncommuting)
	def test_formula_matches_oracle_noncommuting(self, rank: int, connection: str):
		b = model_bundle("sphere2", rank, connection, "g0", L=1.0)
		p, v = np.array([0.1, -0.2]), np.array([0.15, 0.1, -0.05, 0.08])[:rank]
		E = np.array([1.0, 0.3, 0.2, -0.5, 0.1, 0.3])[:2 + rank]
		F = np.array([-0.2, 1.0, 0.4, 0.3, -0.6, 0.2])[:2 + rank]

		formula = curvature_regular(b, p, v, E, F)
		oracle = sectional(b.chart(), b.join(p, v), E, F)
		assert formula == pytest.approx(oracle, rel=1e-3, abs=1e-4)

	@pytest.mark.parametrize(
			"field, expected",
			[
					pytest.param("vertical", 0.88 / 0.192, id="vertical"),
					pytest.param("basic", -0.2 / 0.96, id="basic"),
					]
			)
	def test_radial_derivative(self, twisted: ModelBundle, field: str, expected: float):
		report = radial_derivative_check(twisted, np.array([0.1, -0.2]), np.array([0.12, 0.16]), field)
		assert report.radius == pytest.approx(0.2)
		assert report.expected == pytest.approx(expected)
		assert report.ratio == pytest.approx(expected, rel=1e-5)

	def test_radial_derivative_errors(self, twisted: ModelBundle):
		with pytest.raises(ValueError, match="must be 'vertical' or 'basic'"):
			radial_derivative_check(twisted, np.zeros(2), np.array([0.1, 0.0]), "diagonal")

		with pytest.raises(DomainError, match="regular points"):
			radial_derivative_check(twisted, np.zeros(2), np.zeros(2))

	def test_fiber_geodesic(self, twisted: ModelBundle):
		drift = fiber_geodesic_drift(twisted, np.array([0.1, 0.2]), np.array([0.1, 0.0]), np.array([0.0, 0.1]), steps=50)
		assert drift < 1e-6


class TestSelection:

	def test_estimate_M1(self, twisted: ModelBundle):
		assert estimate_M1(model_bundle("sphere2", 2, "zero"), samples=5) == 0
		assert estimate_M1(model_bundle("sphere2", 2, "constant"), samples=5) == 0

		few = estimate_M1(twisted, samples=5)
		more = estimate_M1(twisted, samples=10)
		assert 0 < few <= more
		assert estimate_M1(twisted.with_L(0.0), samples=10) == pytest.approx(more)

	def test_estimate_M1_precondition(self, twisted: ModelBundle):
		with pytest.raises(PreconditionError, match="is not below 1") as excinfo:
			estimate_M1(twisted.with_L(20), samples=1)
		assert excinfo.value.bound == 'L'

	def test_base_curvature_minimum(self, product: ModelBundle):
		assert base_curvature_minimum(product, samples=4) == pytest.approx(1.0, abs=1e-4)
		assert base_curvature_minimum(model_bundle("torus"), samples=2) == 0

	def test_select_L(self, product: ModelBundle):
		assert select_L(product, samples=5) == pytest.approx(0.5, abs=1e-4)
		assert select_L(product, delta=0.25, samples=5) == 0.25

	@pytest.mark.parametrize(
			"base, delta",
			[
					pytest.param("sphere2", 2.0, id="base_curvature"),
					pytest.param("torus", None, id="flat_base"),
					]
			)
	def test_select_L_base_curvature(self, base: str, delta):
		with pytest.raises(PreconditionError) as excinfo:
			select_L(model_bundle(base), delta=delta, samples=5)
		assert excinfo.value.bound == "base-curvature"

	def test_select_L_third_derivative(self, product: ModelBundle):
		with pytest.raises(PreconditionError) as excinfo:
			select_L(product, delta=7.0, samples=5)
		assert excinfo.value.bound == "third-derivative"

	def test_bundle_sampler(self, twisted: ModelBundle):
		points = bundle_sampler(twisted, 0.1, 0.3, 6)(make_rng(0))
		assert len(points) == 6
		for point in points:
			p, v = twisted.split(point)
			assert np.linalg.norm(p) <= twisted.base_radius
			assert 0.1 < np.linalg.norm(v) < 0.3

		assert bundle_sampler(twisted, 0.3, 0.3, 6)(make_rng(0)) == []

	def test_jet_agreement(self, twisted: ModelBundle):
		assert jet_agreement([], [np.zeros(2)]) == 0.0

		bundles = [twisted, twisted.with_profile(build_g_eps(0.05))]
		assert jet_agreement(bundles, [np.array([0.1, 0.2])]) < 1e-6

	def test_positivity_scan_family(self, twisted: ModelBundle):
		report = positivity_scan_family(
				twisted,
				[0.05, 0.1],
				L=1.0,
				rho0=0.3,
				r_min=0.05,
				samples=2,
				planes_per_point=2,
				refine=0,
				jet_points=1,
				)

		assert report.r_max == pytest.approx(0.3)
		assert [eps for eps, _ in report.reports] == [0.05, 0.1]
		assert not report.empty
		assert math.isfinite(report.min_value)
		assert report.jet_defect < 1e-6

	def test_positivity_scan_family_empty(self, twisted: ModelBundle):
		report = positivity_scan_family(twisted, [0.1], L=1.0, rho0=0.01, r_min=0.05, samples=2, jet_points=1)
		assert report.empty
		assert math.isnan(report.min_value)
