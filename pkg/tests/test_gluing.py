# stdlib
import logging
import math

# 3rd party
import numpy as np
import pytest

# this package
from curvquot.bundle import curvature_at_N, model_bundle, select_L
from curvquot.curvature import ChartMetric, ball_sampler, box_sampler, euclidean_chart, round_sphere_chart
from curvquot.exceptions import BudgetExhaustedError, DomainError, JetMismatchError
from curvquot.gluing import (
		DEFAULT_SCHEDULE,
		GlueScene,
		blend_weight,
		build_cutoff,
		canonical_scene,
		convexity_defect,
		glue_metrics,
		glued_positivity_demo,
		radial_cutoff_check,
		verify_cutoff
		)


def norm(x: np.ndarray) -> float:
	return float(np.linalg.norm(x))


@pytest.fixture(scope="module")
def scene() -> GlueScene:
	return canonical_scene()


class TestCutoff:

	@pytest.mark.parametrize("eps", DEFAULT_SCHEDULE)
	def test_thresholds(self, eps: float):
		c = build_cutoff(eps)
		assert 0 < c.lam <= 0.5
		assert c.log_delta2 == pytest.approx(math.log(eps))
		assert c.log_delta1 == pytest.approx(math.log(eps) - math.log(2) / c.lam)
		assert c.delta2 == pytest.approx(eps)
		assert c.delta1 < c.delta2

	@pytest.mark.parametrize("eps", DEFAULT_SCHEDULE)
	def test_verify(self, eps: float):
		report = verify_cutoff(build_cutoff(eps), grid=2001)
		assert report.passed
		assert report.max_first <= eps
		assert report.max_second <= eps
		assert report.bounded
		assert report.flat_below
		assert report.zero_above
		assert report.ordered

	def test_large_eps(self):
		assert build_cutoff(1e6).lam == 0.5

	@pytest.mark.parametrize("eps", [0.0, -0.1])
	def test_domain(self, eps: float):
		with pytest.raises(DomainError, match="must be positive"):
			build_cutoff(eps)

	def test_call(self):
		c = build_cutoff(0.2)
		assert c(0.0) == 1.0
		assert c(0.2) == 0.0
		assert c(1.0) == 0.0
		assert c(np.array([0.0, 0.5])).tolist() == [1.0, 0.0]

		values = c(np.logspace(-40, 0, 200))
		assert np.all((values >= 0) & (values <= 1))
		assert np.all(np.diff(values) <= 0)

		with pytest.raises(DomainError, match="x >= 0"):
			c(-1.0)

	def test_blend_weight(self):
		c = build_cutoff(0.1)
		assert blend_weight(c, 0) == 1.0
		assert blend_weight(c, 0.1) == 0.0
		assert 0 < blend_weight(c, math.exp(0.5 * (c.log_delta1 + c.log_delta2))) < 1


class TestRadialCutoff:

	@pytest.mark.parametrize("dimension", [1, 3])
	def test_bounds(self, dimension: int):
		c = build_cutoff(0.2)
		report = radial_cutoff_check(c, dimension, samples=20)
		assert report.samples == 20
		assert report.eps == 0.2
		assert report.max_gradient <= 0.2 * 1.01
		assert report.max_hessian <= 0.2 * 1.01
		assert report.rotation_defect < 1e-10

	def test_dimension(self):
		with pytest.raises(ValueError, match="must be positive"):
			radial_cutoff_check(build_cutoff(0.2), 0)


class TestGlueMetrics:

	def test_regions(self):
		double = ChartMetric(2, lambda x: 2 * np.eye(2), name="double")
		c = build_cutoff(0.2)
		glued = glue_metrics(euclidean_chart(2), double, norm, c)

		assert glued.name == "glue[euclidean2|double; eps=0.2]"
		assert glued.tensor([0.0, 0.0]).tolist() == [[2.0, 0.0], [0.0, 2.0]]
		assert glued.tensor([0.3, 0.0]).tolist() == [[1.0, 0.0], [0.0, 1.0]]

		middle = math.exp(0.5 * (c.log_delta1 + c.log_delta2))
		value = glued.tensor([middle, 0.0])[0, 0]
		assert 1 < value < 2

	def test_dimension_mismatch(self):
		with pytest.raises(ValueError, match="Cannot blend"):
			glue_metrics(euclidean_chart(2), euclidean_chart(3), norm, build_cutoff(0.2))

	def test_jet_mismatch(self):
		with pytest.raises(JetMismatchError, match="differ to first order") as excinfo:
			glue_metrics(euclidean_chart(2), round_sphere_chart(), norm, build_cutoff(0.2), anchors=[np.zeros(2)])

		assert excinfo.value.bound == "jet"
		assert excinfo.value.defect == pytest.approx(3.0)

	def test_convexity_at_shared_jet(self):
		bent = ChartMetric(2, lambda x: np.eye(2) + (x @ x) * np.diag([1.0, 2.0]), name="bent")
		assert convexity_defect(euclidean_chart(2), bent, [np.zeros(2)]) < 1e-6


class TestCanonicalScene:

	def test_scene(self, scene: GlueScene):
		assert scene.m0.dimension == scene.m1.dimension == 4
		assert len(scene.anchors) == 2
		for anchor in scene.anchors:
			assert scene.distance(anchor) == 0
			assert anchor[2:].tolist() == [0.0, 0.0]

		point = np.array([0.1, 0.1, 0.1, 0.0])
		assert scene.distance(point) == pytest.approx(0.1)
		assert scene.m0.tensor(point)[0, 0] != scene.m1.tensor(point)[0, 0]

	def test_members(self, scene: GlueScene):
		bundle = model_bundle(connection="varying")
		L0 = select_L(bundle, seed=0)
		point = np.array([0.1, 0.1, 0.1, 0.0])

		np.testing.assert_array_equal(scene.m0.tensor(point), bundle.with_L(L0).chart().tensor(point))
		np.testing.assert_array_equal(scene.m1.tensor(point), bundle.with_L(2 * L0).chart().tensor(point))

	def test_unbent_bundle_is_not_positively_curved(self):
		# with L = 0 and a flat connection the zero section sits in a Riemannian product
		bundle = model_bundle(connection="zero")
		p = np.array([0.1, 0.2])
		A, Y, zero = np.array([1.0, 0.0]), np.array([0.0, 1.0]), np.zeros(2)

		assert curvature_at_N(bundle.with_L(0.0), p, A, zero, zero, Y) == 0
		assert curvature_at_N(bundle.with_L(1.0), p, A, zero, zero, Y) > 0

	def test_jets_agree(self, scene: GlueScene):
		c = build_cutoff(0.02)
		glued = glue_metrics(scene.m0, scene.m1, scene.distance, c, anchors=scene.anchors)

		far = np.array([0.1, 0.1, 0.1, 0.0])
		near = np.array([0.1, 0.1, 0.0, 0.0])
		np.testing.assert_array_equal(glued.tensor(far), scene.m0.tensor(far))
		np.testing.assert_array_equal(glued.tensor(near), scene.m1.tensor(near))

	def test_sampler(self, scene: GlueScene):
		rng = np.random.default_rng(0)
		points = scene.sampler(0.05, 0.1, 3)(rng)
		assert len(points) == 3
		assert all(0.05 < scene.distance(point) < 0.1 for point in points)


class TestDemo:

	def test_positive(self, caplog):
		sphere = round_sphere_chart()
		demo_scene = GlueScene(sphere, sphere, norm, (np.zeros(2), ), lambda lo, hi, count: ball_sampler(0.5, 2, count))

		with caplog.at_level(logging.INFO, logger="curvquot.test"):
			report = glued_positivity_demo(
					demo_scene,
					samples=3,
					planes_per_point=2,
					refine=0,
					logger=logging.getLogger("curvquot.test"),
					)

		assert report.eps == 0.2
		assert report.report.min_value == pytest.approx(1.0, abs=1e-4)
		assert len(report.attempts) == 1
		assert "eps=0.2: minimum sectional curvature" in caplog.text

	def test_exhausted(self):
		flat = euclidean_chart(2)
		demo_scene = GlueScene(flat, flat, norm, (), lambda lo, hi, count: box_sampler([0, 0], [1, 1], count))

		with pytest.raises(BudgetExhaustedError, match="No eps in") as excinfo:
			glued_positivity_demo(demo_scene, schedule=(0.2, 0.1), samples=2, planes_per_point=2, refine=0)

		assert [eps for eps, _ in excinfo.value.attempts] == [0.2, 0.1]
		assert len(excinfo.value.witness) == 2

	def test_empty_schedule(self):
		flat = euclidean_chart(2)
		demo_scene = GlueScene(flat, flat, norm, (), lambda lo, hi, count: box_sampler([0, 0], [1, 1], count))

		with pytest.raises(BudgetExhaustedError) as excinfo:
			glued_positivity_demo(demo_scene, schedule=())
		assert excinfo.value.witness is None
