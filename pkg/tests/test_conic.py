# 3rd party
import numpy as np
import pytest

# this package
from curvquot.conic import (
		ConicMetric,
		conic_chart_tensor,
		conic_positivity_check,
		conic_tensor_array,
		radial_plane_candidate,
		tangent_plane_candidate,
		tip_continuity_defect
		)
from curvquot.curvature import sectional
from curvquot.exceptions import DomainError
from curvquot.numerics import SymMatrix
from curvquot.smoothing import G0, linear_profile, sine_profile


class TestTensor:

	def test_linear_is_euclidean(self):
		c = ConicMetric(3, linear_profile())
		np.testing.assert_allclose(conic_tensor_array(c, [0.1, 0.2, -0.3]), np.eye(3), atol=1e-15)
		assert tip_continuity_defect(c) < 1e-15

	def test_eigenvalues(self):
		c = ConicMetric(3, G0)
		x = np.array([0.0, 0.0, 0.2])
		g = conic_tensor_array(c, x)

		assert g @ x == pytest.approx(x)
		assert g[0, 0] == pytest.approx(0.96**2)
		assert g[1, 1] == pytest.approx(0.96**2)
		assert isinstance(conic_chart_tensor(c, x), SymMatrix)

	def test_excluded_ball(self):
		c = ConicMetric(2, G0, r_min=1e-2)
		assert not c.contains([1e-3, 0.0])
		assert c.contains([0.5, 0.0])
		assert not c.contains([1.0, 1.0])

		with pytest.raises(DomainError, match="inside the excluded ball"):
			conic_tensor_array(c, [1e-3, 0.0])

	def test_chart(self):
		chart = ConicMetric(3, G0).chart()
		assert chart.name == "conic3[g0]"
		assert chart.dimension == 3


def test_candidates():
	assert radial_plane_candidate(G0, 0.2) == pytest.approx(6.25)
	assert tangent_plane_candidate(G0, 0.2) == pytest.approx(6.1197916667)

	assert radial_plane_candidate(sine_profile(), 0.7) == pytest.approx(1.0)
	assert tangent_plane_candidate(sine_profile(), 0.7) == pytest.approx(1.0)

	assert radial_plane_candidate(linear_profile(), 0.5) == 0
	assert tangent_plane_candidate(linear_profile(), 0.5) == 0


@pytest.mark.parametrize("r", [0.1, 0.2, 0.4])
def test_oracle_matches_candidates(r: float):
	chart = ConicMetric(3, G0).chart()
	x = np.array([r, 0.0, 0.0])

	radial = sectional(chart, x, [1, 0, 0], [0, 1, 0])
	tangent = sectional(chart, x, [0, 1, 0], [0, 0, 1])

	assert radial == pytest.approx(radial_plane_candidate(G0, r), rel=1e-5)
	assert tangent == pytest.approx(tangent_plane_candidate(G0, r), rel=1e-5)


class TestPositivityCheck:

	def test_round_sphere(self):
		c = ConicMetric(3, sine_profile())
		report = conic_positivity_check(c, (0.3, 1.0), samples=3, planes_per_point=4, refine=3)

		assert report.passed
		assert report.min_value == pytest.approx(1.0, abs=1e-4)
		assert report.worst_deviation < 1e-4
		assert len(report.families) == 10
		assert {f.family for f in report.families} == {"radial", "tangent"}

	def test_g0(self):
		report = conic_positivity_check(ConicMetric(3, G0), (0.1, 0.5), samples=4, planes_per_point=4, refine=2)
		assert report.passed
		assert report.worst_deviation < 1e-4
		assert report.min_value > 3

	def test_flat_fails(self):
		report = conic_positivity_check(
				ConicMetric(2, linear_profile()),
				(0.2, 0.8),
				samples=2,
				planes_per_point=2,
				refine=0,
				threshold=1e-3,
				)

		assert not report.passed
		assert len(report.families) == 5
		assert report.min_value == pytest.approx(0, abs=1e-6)

	@pytest.mark.parametrize("annulus", [(0.5, 0.2), (0.0, 0.5), (0.5, 1.5)])
	def test_invalid_annulus(self, annulus):
		with pytest.raises(DomainError, match="Invalid annulus"):
			conic_positivity_check(ConicMetric(3, G0), annulus)


def test_tip_continuity():
	c = ConicMetric(3, G0)
	assert 0 < tip_continuity_defect(c) < 0.02
	assert tip_continuity_defect(c, radii=(1e-3, )) < 1e-5
