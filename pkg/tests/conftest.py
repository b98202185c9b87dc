import numpy as np
import pytest

from src.core.halfint import HalfInt
from src.core.lorentz import ab_rep, random_on_shell, random_word, vector_field_rep
from src.core.tensor_cache import TensorCache, reset_tensor_cache


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def words(rng):
    return [random_word(rng) for _ in range(10)]


@pytest.fixture
def momenta(rng):
    return [random_on_shell(rng, 1.0) for _ in range(10)]


@pytest.fixture
def half():
    return HalfInt(1)


@pytest.fixture
def weyl_left():
    return ab_rep(HalfInt(1), 0)


@pytest.fixture
def weyl_right():
    return ab_rep(0, HalfInt(1))


@pytest.fixture
def vector():
    return vector_field_rep()


@pytest.fixture
def tensor_cache(tmp_path):
    cache = TensorCache(str(tmp_path / "tensor_cache"))
    reset_tensor_cache(cache)
    yield cache
    reset_tensor_cache()


def rep_ids(labels):
    return [f"({HalfInt(a)},{HalfInt(b)})" for a, b in labels]
