import json

from src.config import RunConfig, set_settings
from src.core.gamma import TwistKind
from src.core.halfint import HalfInt
from src.core.lorentz import ab_rep
from src.core.tensor_cache import TensorCache, cache_key, get_tensor_cache, reset_tensor_cache
from src.core.utils.serialization import dump_json

HALF = HalfInt(1)


def payload(tensors):
    return dump_json([T.to_json() for T in tensors])


def test_miss_then_hit_and_disk_persistence(tmp_path, weyl_left):
    cache = TensorCache(str(tmp_path))
    first = cache.get_tensors(weyl_left, weyl_left, TwistKind.HERMITIAN)
    second = cache.get_tensors(weyl_left, weyl_left, TwistKind.HERMITIAN)
    assert (cache.misses, cache.hits) == (1, 1)
    assert second is first

    key = cache_key(weyl_left, weyl_left, TwistKind.HERMITIAN)
    assert cache.path_for(key).exists()
    fresh = TensorCache(str(tmp_path))
    loaded = fresh.get_tensors(weyl_left, weyl_left, TwistKind.HERMITIAN)
    assert (fresh.misses, fresh.hits) == (0, 1)
    assert payload(loaded) == payload(first)


def test_key_separates_twist_and_reps(weyl_left, weyl_right):
    keys = {
        cache_key(weyl_left, weyl_left, TwistKind.HERMITIAN),
        cache_key(weyl_left, weyl_left, TwistKind.INVERSE),
        cache_key(weyl_left, weyl_right, TwistKind.HERMITIAN),
    }
    assert len(keys) == 3


def test_lru_eviction(tmp_path, weyl_left, weyl_right):
    cache = TensorCache(str(tmp_path), max_cache_size=1)
    cache.get_tensors(weyl_left, weyl_left, TwistKind.HERMITIAN)
    cache.get_tensors(weyl_right, weyl_right, TwistKind.HERMITIAN)
    assert list(cache._lru_cache) == [cache_key(weyl_right, weyl_right, TwistKind.HERMITIAN)]


def test_unreadable_file_is_recomputed(tmp_path, weyl_left):
    cache = TensorCache(str(tmp_path))
    key = cache_key(weyl_left, weyl_left, TwistKind.INVERSE)
    tmp_path.mkdir(exist_ok=True)
    cache.path_for(key).write_text("{not json", encoding="utf-8")
    tensors = cache.get_tensors(weyl_left, weyl_left, TwistKind.INVERSE)
    assert cache.misses == 1
    assert [T.K for T in tensors] == [HalfInt(0)]
    assert json.loads(cache.path_for(key).read_text(encoding="utf-8"))["key"] == key


def test_revalidate(tmp_path, rng, weyl_left):
    cache = TensorCache(str(tmp_path))
    assert cache.revalidate(rng) is None
    cache.get_tensors(weyl_left, weyl_left, TwistKind.HERMITIAN)
    result = cache.revalidate(rng)
    assert result["status"] == "success"
    assert result["defect"] <= 1e-8


def test_process_cache_follows_settings(tmp_path):
    set_settings(RunConfig(cache_dir=tmp_path / "shared"))
    reset_tensor_cache()
    try:
        cache = get_tensor_cache()
        assert cache.base_storage_dir == tmp_path / "shared"
        assert get_tensor_cache() is cache
        rep = ab_rep(0, 0)
        cache.get_tensors(rep, rep, TwistKind.HERMITIAN)
        assert any((tmp_path / "shared").iterdir())
    finally:
        set_settings(None)
        reset_tensor_cache()
