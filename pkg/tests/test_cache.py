import multiprocessing as mp
import os
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from manincup.cache import Cache, CacheError, CacheKey, cache_get, cache_put, decode, default_cache_dir, encode
from manincup.manin import build_symbol_space


def test_round_trip_hecke_matrix(tmp_path):
    sp = build_symbol_space(1, 11, 1, 3, validate=False)
    T2 = sp.T(2)
    key = CacheKey(11, 1, 1, 3, "T2")
    cache = Cache(tmp_path)
    assert cache.get(key) is None
    put = cache.put(key, T2)
    got = cache.get(key)
    assert np.array_equal(got.matrix, T2)
    assert got.checksum == put.checksum
    calls = []
    A = cache.get_or_compute(key, lambda: calls.append(1))
    assert np.array_equal(A, T2) and not calls


@settings(max_examples=50, deadline=None)
@given(arrays(np.int64, st.tuples(st.integers(0, 6), st.integers(0, 6)),
              elements=st.integers(-2**62, 2**62)))
def test_encode_decode_round_trip(A):
    key = CacheKey(5, 1, 1, 2, "x")
    stored, B, _ = decode(encode(key, A))
    assert stored["kind"] == "x"
    assert B.shape == A.shape and np.array_equal(A, B)


def test_convention_bump_orphans_entries(tmp_path):
    key = CacheKey(5, 1, 1, 2, "T2")
    cache_put(key, np.eye(3, dtype=np.int64), tmp_path)
    bumped = replace(key, convention=key.convention + 1)
    assert cache_get(bumped, tmp_path) is None
    assert cache_get(key, tmp_path) is not None


def test_corrupt_entry_is_discarded(tmp_path):
    cache = Cache(tmp_path)
    key = CacheKey(5, 1, 1, 2, "T3")
    cache.put(key, np.arange(6, dtype=np.int64).reshape(2, 3))
    path = cache.path(key)
    data = bytearray(path.read_bytes())
    data[20] ^= 0xFF
    path.write_bytes(bytes(data))
    assert cache.get(key) is None
    assert not path.exists()


def test_truncated_entry_is_discarded(tmp_path):
    cache = Cache(tmp_path)
    key = CacheKey(5, 1, 1, 2, "T3")
    cache.put(key, np.ones((4, 4), dtype=np.int64))
    path = cache.path(key)
    path.write_bytes(path.read_bytes()[:30])
    assert cache.get(key) is None


def _writer(args):
    directory, seed = args
    key = CacheKey(7, 1, 1, 2, "U7")
    A = np.full((40, 40), 3, dtype=np.int64)
    for _ in range(20):
        Cache(directory).put(key, A)
    return seed


def test_concurrent_writers_leave_one_valid_entry(tmp_path):
    with mp.get_context("spawn").Pool(4) as pool:
        pool.map(_writer, [(str(tmp_path), s) for s in range(4)])
    files = sorted(os.listdir(tmp_path))
    assert len(files) == 1 and files[0].endswith(".mcup")
    got = Cache(tmp_path).get(CacheKey(7, 1, 1, 2, "U7"))
    assert np.array_equal(got.matrix, np.full((40, 40), 3))


def test_io_errors_name_the_key(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    key = CacheKey(5, 1, 1, 2, "T2")
    with pytest.raises(CacheError, match="T2"):
        Cache(blocker / "sub").put(key, np.eye(2, dtype=np.int64))


def test_default_directory_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("MANINCUP_CACHE", str(tmp_path))
    assert default_cache_dir() == tmp_path


def test_only_matrices_are_cached():
    with pytest.raises(ValueError):
        encode(CacheKey(5, 1, 1, 2, "v"), np.zeros(3, dtype=np.int64))
