# stdlib
import math

# 3rd party
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

# this package
from curvquot.exceptions import EvaluationError, QuadratureError
from curvquot.numerics import (
		FDPolicy,
		Quaternion,
		SymMatrix,
		fd_derivative,
		fd_directional,
		hamilton,
		integrate,
		make_rng,
		metric_orthonormalize,
		quat_mul,
		random_unit_vector,
		safe_norm,
		sym_eig_min
		)

components = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
quaternions = st.builds(Quaternion, components, components, components, components)


class TestQuaternion:

	@given(quaternions, quaternions)
	def test_norm_is_multiplicative(self, a: Quaternion, b: Quaternion):
		assert (a * b).norm() == pytest.approx(a.norm() * b.norm(), rel=1e-9, abs=1e-9)

	@given(quaternions, quaternions, quaternions)
	def test_associative(self, a: Quaternion, b: Quaternion, c: Quaternion):
		left = ((a * b) * c).as_array()
		right = (a * (b * c)).as_array()
		np.testing.assert_allclose(left, right, rtol=1e-9, atol=1e-6)

	@given(quaternions)
	def test_conjugate_gives_norm(self, q: Quaternion):
		product = (q * q.conj()).as_array()
		np.testing.assert_allclose(product, [q.norm()**2, 0, 0, 0], rtol=1e-9, atol=1e-9)

	def test_units(self):
		i = Quaternion(0, 1, 0, 0)
		j = Quaternion(0, 0, 1, 0)
		k = Quaternion(0, 0, 0, 1)
		assert i * j == k
		assert j * k == i
		assert k * i == j
		assert j * i == Quaternion(0, 0, 0, -1)
		assert quat_mul(k, k) == Quaternion(-1, 0, 0, 0)

	def test_from_array(self):
		assert Quaternion.from_array(np.array([1, 2, 3, 4])) == Quaternion(1.0, 2.0, 3.0, 4.0)
		assert Quaternion(1, 2, 3, 4).as_array().tolist() == [1.0, 2.0, 3.0, 4.0]

	def test_hamilton_broadcasts(self, rng: np.random.Generator):
		a = rng.standard_normal((5, 4))
		b = rng.standard_normal(4)
		product = hamilton(a, b)
		assert product.shape == (5, 4)
		for row, expected in zip(product, a):
			np.testing.assert_allclose(row, (Quaternion.from_array(expected) * Quaternion.from_array(b)).as_array())


class TestSymMatrix:

	def test_symmetrised(self):
		matrix = SymMatrix([[1.0, 2.0], [4.0, 3.0]])
		assert matrix.entry(0, 1) == matrix.entry(1, 0) == 3.0
		assert matrix.dimension == 2
		assert not matrix.array.flags.writeable

	def test_not_square(self):
		with pytest.raises(ValueError, match="Expected a square matrix"):
			SymMatrix([[1.0, 2.0, 3.0]])

	def test_array_protocol(self):
		matrix = SymMatrix(np.eye(3))
		assert np.asarray(matrix).tolist() == np.eye(3).tolist()
		assert sym_eig_min(matrix) == pytest.approx(1.0)
		assert repr(SymMatrix([[1, 0], [0, 2]])) == "SymMatrix([[1.0, 0.0], [0.0, 2.0]])"


class TestFDPolicy:

	@pytest.mark.parametrize("policy", [FDPolicy(h=0), FDPolicy(h=-1e-3), FDPolicy(order=3)])
	def test_invalid(self, policy: FDPolicy):
		with pytest.raises(ValueError):
			policy.validate()

	def test_scaled(self):
		assert FDPolicy(h=1e-3).scaled(0.5) == FDPolicy(h=5e-4)


class TestFDDerivative:

	@pytest.mark.parametrize(
			"order, expected, tolerance",
			[
					(1, math.cos(0.3), 1e-8),
					(2, -math.sin(0.3), 1e-6),
					(3, -math.cos(0.3), 1e-4),
					]
			)
	def test_sine(self, order: int, expected: float, tolerance: float):
		assert fd_derivative(math.sin, 0.3, order) == pytest.approx(expected, abs=tolerance)

	def test_plain_central(self):
		estimate = fd_derivative(math.exp, 0.0, 1, FDPolicy(h=1e-4, order=1))
		assert estimate == pytest.approx(1.0, abs=1e-8)

	def test_vector_valued(self):
		estimate = fd_derivative(lambda t: np.array([t**2, t**3]), 1.0)
		np.testing.assert_allclose(estimate, [2.0, 3.0], atol=1e-8)

	def test_directional(self):
		estimate = fd_directional(lambda x: float(x @ x), np.array([1.0, 2.0]), np.array([0.0, 1.0]))
		assert estimate == pytest.approx(4.0, abs=1e-8)

	def test_non_finite(self):
		with pytest.raises(EvaluationError, match="Non-finite"):
			fd_derivative(lambda t: 1 / t if t > 0 else math.inf, 0.0)

	def test_bad_order(self):
		with pytest.raises(ValueError, match="Derivative order"):
			fd_derivative(math.sin, 0.0, 4)


class TestIntegrate:

	def test_polynomial(self):
		assert integrate(lambda x: x**2, 0, 3) == pytest.approx(9.0, rel=1e-12)

	def test_empty_interval(self):
		assert integrate(math.exp, 1.0, 1.0) == 0.0

	def test_reversed(self):
		with pytest.raises(ValueError, match="Expected a <= b"):
			integrate(math.exp, 1.0, 0.0)

	def test_breakpoints(self):
		value = integrate(lambda x: abs(x - 0.3), 0, 1, points=[0.3, 5.0])
		assert value == pytest.approx(0.5 * (0.3**2 + 0.7**2), rel=1e-12)

	def test_divergent(self):
		with pytest.raises(QuadratureError):
			integrate(lambda x: 1 / x if x > 0 else 0.0, 0, 1, limit=5)


def test_make_rng_is_reproducible():
	assert make_rng(3).standard_normal(4).tolist() == make_rng(3).standard_normal(4).tolist()


@pytest.mark.parametrize("dimension", [1, 2, 5, 8])
def test_random_unit_vector(rng: np.random.Generator, dimension: int):
	vector = random_unit_vector(rng, dimension)
	assert vector.shape == (dimension, )
	assert np.linalg.norm(vector) == pytest.approx(1.0)


def test_safe_norm():
	assert safe_norm(np.array([3.0, 4.0])) == 5.0
	assert safe_norm(np.array([1e200, 1e200])) == pytest.approx(math.sqrt(2) * 1e200)
	assert safe_norm(np.array([1e-200, 1e-200])) == pytest.approx(math.sqrt(2) * 1e-200)


class TestMetricOrthonormalize:

	def test_orthonormal(self, rng: np.random.Generator):
		root = rng.standard_normal((4, 4))
		metric = root @ root.T + 4 * np.eye(4)
		basis = metric_orthonormalize(metric, [rng.standard_normal(4) for _ in range(3)])
		np.testing.assert_allclose(basis @ metric @ basis.T, np.eye(3), atol=1e-10)

	def test_dependent(self):
		with pytest.raises(ValueError, match="linearly dependent"):
			metric_orthonormalize(np.eye(2), [np.array([1.0, 1.0]), np.array([2.0, 2.0])])
