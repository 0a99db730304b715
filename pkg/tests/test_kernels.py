"""Backend parity: the numba and numpy kernel paths must agree bit for bit."""

import os
import random
import subprocess
import sys

import numpy as np

from oracles import levenshtein_recursive, minmax_exhaustive
from repaireval import _kernels as K


def rand_ids(rng, max_len=14, alphabet=6):
    return rng.integers(0, alphabet, size=int(rng.integers(0, max_len))).astype(np.int64)


def test_levenshtein_paths_agree_and_match_oracle():
    rng = np.random.default_rng(31)
    for _ in range(400):
        a = rand_ids(rng)
        b = rand_ids(rng)
        fast = K.levenshtein_ids(a, b)
        ref = K.levenshtein_ids_numpy(a, b)
        assert fast == ref
        assert ref == levenshtein_recursive(a.tolist(), b.tolist())


def test_minmax_paths_agree_and_match_oracle():
    rng = random.Random(32)
    for _ in range(120):
        m = rng.randrange(4, 13)
        k = rng.randrange(2, min(m, 6) + 1)
        s = np.array([[rng.random() for _ in range(m)] for _ in range(m)])
        s = np.ascontiguousarray(np.maximum(s, s.T))
        np.fill_diagonal(s, 1.0)
        o1, b1 = K.minmax_subset(s, k)
        o2, b2 = K.minmax_subset_numpy(s, k)
        assert o1 == o2
        assert tuple(b1) == tuple(b2)
        want_obj, want = minmax_exhaustive(s.tolist(), k)
        assert tuple(b1) == want
        assert o1 == want_obj


def test_geometric_paths_agree():
    rng = np.random.default_rng(33)
    for r in (0.0, 0.25, 0.5, 0.9, 1.0):
        u = rng.random((4000, 5))
        assert K.geometric_counts(u, r) == K.geometric_counts_numpy(u, r)


def test_env_flag_forces_numpy_backend():
    code = "import repaireval; print(repaireval.backend())"
    env = dict(os.environ, REPAIREVAL_NO_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "numpy"


def test_backend_reports_active_path():
    assert K.backend() in ("numba", "numpy")
    assert (K.backend() == "numba") == K.USING_NUMBA


def test_numpy_fallback_chunked_enumeration():
    # chunk smaller than the subset count exercises the resume logic
    rng = random.Random(34)
    s = np.array([[rng.random() for _ in range(9)] for _ in range(9)])
    s = np.ascontiguousarray(np.maximum(s, s.T))
    np.fill_diagonal(s, 1.0)
    o_small, b_small = K.minmax_subset_numpy(s, 4, chunk=7)
    o_big, b_big = K.minmax_subset_numpy(s, 4)
    assert o_small == o_big
    assert tuple(b_small) == tuple(b_big)
