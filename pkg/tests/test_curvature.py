# stdlib
import logging
import math

# 3rd party
import numpy as np
import pytest

# this package
from curvquot.curvature import (
		ChartMetric,
		ball_sampler,
		bianchi_defect,
		box_sampler,
		christoffel,
		curvature_form,
		euclidean_chart,
		geodesic,
		min_sectional_scan,
		plane_volume,
		polar_plane_chart,
		riemann,
		round_sphere_chart,
		sectional,
		shell_sampler,
		symmetry_defect
		)
from curvquot.exceptions import (
		DegeneratePlaneError,
		DomainError,
		GeodesicExitError,
		SingularMetricError
		)
from curvquot.numerics import FDPolicy, SymMatrix, make_rng

e1, e2, e3 = np.eye(3)


class TestChartMetric:

	def test_dimension(self):
		with pytest.raises(ValueError, match="must be positive"):
			ChartMetric(0, lambda x: np.eye(0))

	def test_shape(self):
		m = ChartMetric(2, lambda x: np.eye(3), name="wrong")

		with pytest.raises(ValueError, match="expected a 2×2 matrix"):
			m.tensor([0.0, 0.0])

	def test_symmetrised(self):
		m = ChartMetric(2, lambda x: np.array([[1.0, 0.2], [0.0, 1.0]]))
		assert m.tensor([0, 0]).tolist() == [[1.0, 0.1], [0.1, 1.0]]
		assert isinstance(m.metric([0, 0]), SymMatrix)
		assert m.inner([0, 0], [1, 0], [0, 1]) == pytest.approx(0.1)

	def test_domain(self):
		m = polar_plane_chart()
		assert m.contains([1.0, 0.0])
		assert not m.contains([-1.0, 0.0])

		with pytest.raises(DomainError, match="outside the chart domain"):
			m.tensor([-1.0, 0.0])

	def test_with_policy(self):
		m = round_sphere_chart().with_policy(FDPolicy(h=1e-2, order=1))
		assert m.policy == FDPolicy(h=1e-2, order=1)
		assert m.name == "sphere2(radius=1.0)"

	def test_repr(self):
		assert repr(euclidean_chart(3)) == "<ChartMetric 'euclidean3' (d=3)>"


class TestChristoffel:

	def test_flat(self):
		assert np.all(christoffel(euclidean_chart(3), [0.1, 0.2, 0.3]) == 0)

	def test_polar(self):
		gamma = christoffel(polar_plane_chart(), [2.0, 0.3])
		expected = np.zeros((2, 2, 2))
		expected[0, 1, 1] = -2.0
		expected[1, 0, 1] = expected[1, 1, 0] = 0.5
		np.testing.assert_allclose(gamma, expected, atol=1e-8)

	def test_singular(self):
		m = ChartMetric(2, lambda x: np.diag([1.0, 0.0]), name="degenerate")

		with pytest.raises(SingularMetricError, match="not positive definite"):
			christoffel(m, [0.0, 0.0])


class TestSectional:

	@pytest.mark.parametrize(
			"radius, point",
			[
					(1.0, [0.0, 0.0]),
					(1.0, [0.3, -0.2]),
					(2.0, [0.1, 0.5]),
					(0.5, [-0.4, 0.1]),
					]
			)
	def test_sphere(self, radius: float, point):
		m = round_sphere_chart(radius)
		assert sectional(m, point, [1, 0], [0, 1]) == pytest.approx(1 / radius**2, abs=1e-5)
		assert sectional(m, point, [1, 1], [2, -1]) == pytest.approx(1 / radius**2, abs=1e-5)

	def test_sphere_3(self):
		m = round_sphere_chart(1.0, 3)
		point = np.array([0.2, -0.1, 0.3])
		for X, Y in [(e1, e2), (e1, e3), (e2, e1 + e3)]:
			assert sectional(m, point, X, Y) == pytest.approx(1.0, abs=1e-5)

	def test_scaled(self):
		m = round_sphere_chart().scaled(2)
		assert m.name == "2²·sphere2(radius=1.0)"
		assert sectional(m, [0.1, 0.1], [1, 0], [0, 1]) == pytest.approx(0.25, abs=1e-5)

	def test_flat(self):
		assert sectional(euclidean_chart(3), np.zeros(3), e1, e2) == 0
		assert sectional(polar_plane_chart(), [1.5, 0.2], [1, 0], [0, 1]) == pytest.approx(0, abs=1e-6)

	def test_sign_convention(self):
		tensor = riemann(round_sphere_chart(), [0.1, 0.2])
		assert curvature_form(tensor, np.array([1.0, 0.0]), np.array([0.0, 1.0])) > 0

	def test_degenerate(self):
		with pytest.raises(DegeneratePlaneError, match="degenerate") as excinfo:
			sectional(round_sphere_chart(), [0.0, 0.0], [1, 0], [2, 0])
		assert excinfo.value.volume == pytest.approx(0)


def test_plane_volume():
	assert plane_volume(np.eye(2), np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 1.0
	assert plane_volume(4 * np.eye(2), np.array([1.0, 1.0]), np.array([1.0, -1.0])) == 64.0
	assert plane_volume(np.eye(2), np.array([1.0, 2.0]), np.array([2.0, 4.0])) == 0.0


class TestDefects:

	def test_sphere(self):
		tensor = riemann(round_sphere_chart(1.0, 3), [0.2, -0.1, 0.3])
		assert bianchi_defect(tensor) < 1e-6
		assert symmetry_defect(tensor) < 1e-6

	def test_constant_tensor(self):
		tensor = np.ones((2, 2, 2, 2))
		assert bianchi_defect(tensor) == 3.0
		assert symmetry_defect(tensor) == 2.0


class TestScan:

	def test_sphere(self):
		m = round_sphere_chart(2.0, 3)
		report = min_sectional_scan(m, box_sampler([-0.5] * 3, [0.5] * 3, 4), planes_per_point=6, refine=5)

		assert report.samples == 4
		assert len(report.point_minima) == 4
		assert report.min_value == pytest.approx(0.25, abs=1e-4)
		assert report.passed
		assert not report.empty
		assert len(report.witness_point) == 3
		assert len(report.witness_plane[0]) == 3

		assert not min_sectional_scan(m, box_sampler([0] * 3, [0.1] * 3, 1), threshold=0.3).passed

	def test_deterministic(self):
		m = round_sphere_chart(1.0, 3)
		sampler = ball_sampler(0.5, 3, 3)

		first = min_sectional_scan(m, sampler, seed=4, refine=2)
		second = min_sectional_scan(m, sampler, seed=4, refine=2)
		assert first.as_dict() == second.as_dict()

	def test_as_dict_check(self):
		report = min_sectional_scan(round_sphere_chart(1.0, 3), ball_sampler(0.5, 3, 2), seed=1)

		assert "check" not in report.as_dict()
		data = report.as_dict(check="sphere-scan")
		assert list(data)[0] == "check"
		assert data["check"] == "sphere-scan"
		assert {k: v for k, v in data.items() if k != "check"} == report.as_dict()

	def test_empty(self, caplog):
		logger = logging.getLogger("curvquot.test")

		with caplog.at_level(logging.WARNING, logger="curvquot.test"):
			report = min_sectional_scan(euclidean_chart(2), lambda rng: [], logger=logger)

		assert "the sampled region is empty" in caplog.text
		assert report.empty
		assert not report.passed
		assert math.isnan(report.min_value)
		assert report.as_dict()["min_value"] is None
		assert report.as_dict()["samples"] == 0

	def test_no_planes(self):
		with pytest.raises(DegeneratePlaneError, match="no planes exist"):
			min_sectional_scan(euclidean_chart(1), box_sampler([0], [1], 2))


class TestGeodesic:

	def test_flat(self):
		path = geodesic(euclidean_chart(2), [0.0, 0.0], [1.0, 2.0], 1.0, 4)
		np.testing.assert_allclose(path.points[-1], [1.0, 2.0], atol=1e-12)
		assert path.times.tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]
		assert path.length(euclidean_chart(2)) == pytest.approx(math.sqrt(5))

	def test_great_circle(self):
		m = round_sphere_chart()
		path = geodesic(m, [0.0, 0.0], [0.5, 0.0], math.pi / 2, 200)

		# a quarter of a great circle ends on the unit circle of the stereographic chart
		np.testing.assert_allclose(path.points[-1], [1.0, 0.0], atol=1e-6)
		np.testing.assert_allclose(path.speeds(m), 1.0, atol=1e-6)
		assert path.length(m) == pytest.approx(math.pi / 2, abs=1e-6)

	def test_leaves_chart(self):
		with pytest.raises(GeodesicExitError, match="left the chart"):
			geodesic(polar_plane_chart(), [1.0, 0.0], [-1.0, 0.0], 3.0, 4)

	def test_steps(self):
		with pytest.raises(ValueError, match="At least one step"):
			geodesic(euclidean_chart(2), [0, 0], [1, 0], 1.0, 0)


class TestSamplers:

	def test_box(self):
		points = box_sampler([0, -1], [1, 1], 20)(make_rng(1))
		assert len(points) == 20
		for point in points:
			assert 0 <= point[0] <= 1
			assert -1 <= point[1] <= 1

	def test_shell(self):
		points = shell_sampler(0.2, 0.4, 3, 10)(make_rng(1))
		norms = [np.linalg.norm(p) for p in points]
		assert all(0.2 <= n <= 0.4 for n in norms)
		assert norms == sorted(norms)

	def test_ball(self):
		points = ball_sampler(0.3, 4, 50)(make_rng(1))
		assert all(p.shape == (4, ) and np.linalg.norm(p) <= 0.3 for p in points)

	def test_seeded(self):
		sampler = ball_sampler(1.0, 2, 5)
		assert np.array_equal(sampler(make_rng(3)), sampler(make_rng(3)))
