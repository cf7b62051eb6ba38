# 3rd party
import numpy as np
import pytest

# this package
from curvquot.numerics import make_rng

pytest_plugins = ("coincidence", )


@pytest.fixture()
def rng() -> np.random.Generator:
	return make_rng(20240601)
