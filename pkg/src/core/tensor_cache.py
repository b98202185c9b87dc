"""
Tensor Cache
============
In-memory LRU plus on-disk JSON store of fitted T tensors, keyed by the two
representations, the twist and the normalization version.
"""

import hashlib
import json
import logging
import re
from collections import OrderedDict
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from .gamma import NORMALIZATION_VERSION, SymTensorMatrix, TwistKind, build_all_T
from .linalg import max_norm
from .lorentz import FieldRep
from .utils.serialization import dump_json

logger = logging.getLogger(__name__)


def cache_key(repL: FieldRep, repR: FieldRep, twist: TwistKind) -> str:
    return f"{repL.key}|{repR.key}|{twist.value}|{NORMALIZATION_VERSION}"


class TensorCache:
    def __init__(self, base_storage_dir: str = "./data/tensor_cache", max_cache_size: int = 64,
                 rng_seed: int = 42):
        self.base_storage_dir = Path(base_storage_dir)
        self.rng_seed = rng_seed
        self._lru_cache: "OrderedDict[str, List[SymTensorMatrix]]" = OrderedDict()
        self._max_cache_size = max_cache_size
        # reps seen this process, needed to recompute an entry during revalidation
        self._sources: Dict[str, tuple] = {}
        self.hits = 0
        self.misses = 0

    def _get_from_lru_cache(self, key: str) -> Optional[List[SymTensorMatrix]]:
        """Get item from LRU cache, moving it to end if found"""
        if key in self._lru_cache:
            value = self._lru_cache.pop(key)
            self._lru_cache[key] = value
            return value
        return None

    def _set_in_lru_cache(self, key: str, value: List[SymTensorMatrix]):
        """Set item in LRU cache, evicting oldest if necessary"""
        if key in self._lru_cache:
            self._lru_cache.pop(key)
        elif len(self._lru_cache) >= self._max_cache_size:
            self._lru_cache.popitem(last=False)
        self._lru_cache[key] = value

    def path_for(self, key: str) -> Path:
        stem = re.sub(r"[^A-Za-z0-9_.-]+", "_", key).strip("_")
        digest = hashlib.sha1(key.encode("utf-8")).hexdigest()[:10]
        return self.base_storage_dir / f"{stem}-{digest}.json"

    def load(self, key: str) -> Optional[List[SymTensorMatrix]]:
        path = self.path_for(key)
        if not path.exists():
            return None
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
            if payload.get("key") != key:
                logger.warning("Cache file %s holds key %r, expected %r", path, payload.get("key"), key)
                return None
            return [SymTensorMatrix.from_json(item) for item in payload["tensors"]]
        except (OSError, ValueError, KeyError, TypeError) as e:
            logger.warning("Ignoring unreadable cache file %s: %s", path, e)
            return None

    def save(self, key: str, tensors: List[SymTensorMatrix]):
        try:
            self.base_storage_dir.mkdir(parents=True, exist_ok=True)
            payload = {"key": key, "tensors": [T.to_json() for T in tensors]}
            self.path_for(key).write_text(dump_json(payload), encoding="utf-8")
        except OSError as e:
            logger.warning("Could not write tensor cache for %s: %s", key, e)

    def get_tensors(self, repL: FieldRep, repR: FieldRep, twist: TwistKind) -> List[SymTensorMatrix]:
        key = cache_key(repL, repR, twist)
        self._sources[key] = (repL, repR, twist)
        cached = self._get_from_lru_cache(key)
        if cached is None:
            cached = self.load(key)
            if cached is not None:
                self._set_in_lru_cache(key, cached)
        if cached is not None:
            self.hits += 1
            logger.debug("Tensor cache hit for %s", key)
            return cached
        self.misses += 1
        tensors = build_all_T(repL, repR, twist, rng_seed=self.rng_seed)
        self._set_in_lru_cache(key, tensors)
        self.save(key, tensors)
        return tensors

    def revalidate(self, rng: np.random.Generator, tolerance: float = 1e-8) -> Optional[Dict]:
        """Recompute one random entry seen in this process and compare"""
        keys = sorted(self._sources)
        if not keys:
            return None
        key = keys[int(rng.integers(len(keys)))]
        repL, repR, twist = self._sources[key]
        stored = self._get_from_lru_cache(key) or self.load(key) or []
        fresh = build_all_T(repL, repR, twist, rng_seed=self.rng_seed)
        defect = 0.0
        if [T.K for T in stored] != [T.K for T in fresh]:
            defect = float("inf")
        else:
            for old, new in zip(stored, fresh):
                for index, matrix in new.components.items():
                    defect = max(defect, max_norm(old.components[index] - matrix))
        status = "success" if defect <= tolerance else "error"
        if status == "error":
            logger.warning("Cached tensors for %s disagree with recomputation (%.3e)", key, defect)
        return {"status": status, "key": key, "defect": defect}


_tensor_cache = None


def get_tensor_cache() -> TensorCache:
    """Get or create the process-wide tensor cache"""
    global _tensor_cache
    if _tensor_cache is None:
        from src.config import get_settings

        settings = get_settings()
        _tensor_cache = TensorCache(str(settings.cache_dir), rng_seed=settings.seed)
    return _tensor_cache


def reset_tensor_cache(cache: Optional[TensorCache] = None):
    global _tensor_cache
    _tensor_cache = cache
