# 3rd party
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

# this package
from curvquot.bundle.forms import inner, v_form, w_form, w_lower_bound
from curvquot.numerics import make_rng

components = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
vectors = st.lists(components, min_size=3, max_size=3).map(np.array)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def split_pair(seed: int):
	# an orthonormal pair in R^4, split into a part in the first two coordinates and one in the last two
	frame, _ = np.linalg.qr(make_rng(seed).standard_normal((4, 2)))
	e, f = frame[:, 0], frame[:, 1]
	zeros = np.zeros(2)
	A, X = np.concatenate([e[:2], zeros]), np.concatenate([zeros, e[2:]])
	B, Y = np.concatenate([f[:2], zeros]), np.concatenate([zeros, f[2:]])
	return A, B, X, Y


class TestInner:

	def test_euclidean(self):
		assert inner([1, 2, 3], [4, 5, 6]) == 32.0
		assert isinstance(inner([1, 0], [0, 1]), float)

	def test_metric(self):
		assert inner([1, 1], [1, 0], np.array([[2.0, 1.0], [1.0, 3.0]])) == 3.0

	def test_stacked(self):
		u = np.arange(6.0).reshape(2, 3)
		assert inner(u, u).tolist() == [5.0, 50.0]


class TestVForm:

	def test_orthonormal(self):
		assert v_form([1, 0, 0], [0, 1, 0]) == 1.0

	def test_parallel(self):
		assert v_form([1, 2, 3], [2, 4, 6]) == 0.0

	def test_metric_scales(self):
		assert v_form([1, 0], [0, 1], 2 * np.eye(2)) == 4.0

	@given(vectors, vectors)
	def test_nonnegative(self, A: np.ndarray, B: np.ndarray):
		assert v_form(A, B) >= -1e-9 * (1 + inner(A, A) * inner(B, B))

	@given(seeds)
	def test_splits(self, seed: int):
		A, B, X, Y = split_pair(seed)
		total = v_form(A + X, B + Y)
		assert total == pytest.approx(1.0)
		assert v_form(A, B) + v_form(X, Y) + w_form(A, B, X, Y) == pytest.approx(total)


class TestWForm:

	@given(vectors, vectors, vectors, vectors)
	def test_nonnegative(self, A: np.ndarray, B: np.ndarray, X: np.ndarray, Y: np.ndarray):
		scale = 1 + (inner(A, A) + inner(B, B)) * (inner(X, X) + inner(Y, Y))
		assert w_form(A, B, X, Y) >= -1e-9 * scale

	@given(seeds)
	def test_lower_bound(self, seed: int):
		A, B, X, Y = split_pair(seed)
		assert w_form(A, B, X, Y) >= w_lower_bound(A, B, X, Y) - 1e-12

	def test_lower_bound_is_sharp(self):
		s = 1 / np.sqrt(2)
		A, X = np.array([s, 0, 0, 0]), np.array([0, 0, s, 0])
		B, Y = np.array([0, s, 0, 0]), np.array([0, 0, 0, s])
		assert w_form(A, B, X, Y) == pytest.approx(0.5)
		assert w_lower_bound(A, B, X, Y) == pytest.approx(0.5)

	def test_stacked(self):
		rng = make_rng(0)
		A, B, X, Y = (rng.standard_normal((5, 3)) for _ in range(4))

		stacked = w_form(A, B, X, Y)
		assert stacked.shape == (5, )
		for i in range(5):
			assert stacked[i] == pytest.approx(w_form(A[i], B[i], X[i], Y[i]))

		assert w_lower_bound(A, B, X, Y).shape == (5, )
		assert v_form(A, B).shape == (5, )
