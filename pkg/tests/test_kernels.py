"""The two kernel backends must agree on every input."""

import numpy as np
import pytest

from ettmt import _kernels


def random_id_arrays(rnd, max_len=40, vocab=6):
    a = rnd.integers(0, vocab, size=rnd.integers(0, max_len)).astype(np.int32)
    b = rnd.integers(0, vocab, size=rnd.integers(0, max_len)).astype(np.int32)
    return a, b


class TestLevenshtein:
    def test_known_values(self):
        cases = [
            ([], [], 0),
            ([], [1, 2], 2),
            ([1, 2, 3], [], 3),
            ([1, 2, 3], [1, 2, 3], 0),
            ([1, 2, 3], [1, 9, 3], 1),
            ([1, 2], [2, 1], 2),
            ([1, 2, 3, 4], [3, 4, 1, 2], 4),
        ]
        for a, b, want in cases:
            a = np.asarray(a, dtype=np.int32)
            b = np.asarray(b, dtype=np.int32)
            assert _kernels.levenshtein_np(a, b) == want
            assert _kernels._levenshtein_loop(a, b) == want
            assert _kernels.levenshtein_jit(a, b) == want

    def test_backends_agree_randomized(self):
        rnd = np.random.default_rng(0)
        for _ in range(200):
            a, b = random_id_arrays(rnd)
            assert _kernels.levenshtein_np(a, b) == _kernels.levenshtein_jit(a, b)

    def test_symmetry(self):
        rnd = np.random.default_rng(1)
        for _ in range(50):
            a, b = random_id_arrays(rnd)
            assert _kernels.levenshtein_np(a, b) == _kernels.levenshtein_np(b, a)


def _random_em_problem(rnd, n_pairs=6, src_vocab=5, tgt_vocab=7):
    src_flat, tgt_flat = [], []
    src_indptr = np.zeros(n_pairs + 1, dtype=np.int64)
    tgt_indptr = np.zeros(n_pairs + 1, dtype=np.int64)
    cooc = [set() for _ in range(src_vocab + 1)]
    pairs = []
    for p in range(n_pairs):
        f = [0] + list(rnd.integers(1, src_vocab + 1, size=rnd.integers(1, 5)))
        e = list(rnd.integers(0, tgt_vocab, size=rnd.integers(1, 5)))
        pairs.append((f, e))
        src_flat.extend(f)
        tgt_flat.extend(e)
        src_indptr[p + 1] = len(src_flat)
        tgt_indptr[p + 1] = len(tgt_flat)
        for fi in f:
            cooc[fi].update(e)
    indptr = np.zeros(src_vocab + 2, dtype=np.int64)
    cols = []
    for fi, row in enumerate(cooc):
        ordered = sorted(row)
        indptr[fi + 1] = indptr[fi] + len(ordered)
        cols.extend(ordered)
    cols = np.asarray(cols, dtype=np.int32)
    vals = rnd.uniform(0.1, 1.0, size=len(cols))
    for fi in range(src_vocab + 1):
        lo, hi = indptr[fi], indptr[fi + 1]
        if hi > lo:
            vals[lo:hi] /= vals[lo:hi].sum()
    return (
        np.asarray(src_flat, dtype=np.int32),
        src_indptr,
        np.asarray(tgt_flat, dtype=np.int32),
        tgt_indptr,
        indptr,
        cols,
        vals,
        pairs,
    )


class TestEstepBackends:
    def test_ibm1_agreement(self):
        rnd = np.random.default_rng(7)
        for _ in range(20):
            src_flat, src_indptr, tgt_flat, tgt_indptr, indptr, cols, vals, _ = _random_em_problem(rnd)
            c1 = np.zeros_like(vals)
            r1 = np.zeros(len(src_flat))
            ll1 = _kernels.ibm1_estep_jit(src_flat, src_indptr, tgt_flat, tgt_indptr, indptr, cols, vals, c1, r1)
            c2 = np.zeros_like(vals)
            r2 = np.zeros(len(src_flat))
            ll2 = _kernels.ibm1_estep_np(src_flat, src_indptr, tgt_flat, tgt_indptr, indptr, cols, vals, c2, r2)
            assert ll1 == pytest.approx(ll2, abs=1e-9)
            np.testing.assert_allclose(c1, c2, atol=1e-12)
            np.testing.assert_allclose(r1, r2, atol=1e-12)

    def test_ibm2_agreement(self):
        rnd = np.random.default_rng(11)
        for _ in range(20):
            src_flat, src_indptr, tgt_flat, tgt_indptr, indptr, cols, vals, pairs = _random_em_problem(rnd)
            offsets = {}
            size = 0
            for f, e in pairs:
                shape = (len(e), len(f))
                if shape not in offsets:
                    offsets[shape] = size
                    size += shape[0] * shape[1]
            bases = np.array([offsets[(len(e), len(f))] for f, e in pairs], dtype=np.int64)
            a_vals = rnd.uniform(0.1, 1.0, size=size)
            args = (src_flat, src_indptr, tgt_flat, tgt_indptr, bases, indptr, cols, vals, a_vals)
            c1 = np.zeros_like(vals)
            a1 = np.zeros_like(a_vals)
            r1 = np.zeros(len(src_flat))
            ll1 = _kernels.ibm2_estep_jit(*args, c1, a1, r1)
            c2 = np.zeros_like(vals)
            a2 = np.zeros_like(a_vals)
            r2 = np.zeros(len(src_flat))
            ll2 = _kernels.ibm2_estep_np(*args, c2, a2, r2)
            assert ll1 == pytest.approx(ll2, abs=1e-9)
            np.testing.assert_allclose(c1, c2, atol=1e-12)
            np.testing.assert_allclose(a1, a2, atol=1e-12)
            np.testing.assert_allclose(r1, r2, atol=1e-12)


class TestBackendSelection:
    def test_backend_reports_a_known_name(self):
        assert _kernels.backend() in ("numba", "numpy")

    def test_flag_selects_numpy(self):
        import subprocess
        import sys

        out = subprocess.run(
            [sys.executable, "-c", "from ettmt import _kernels; print(_kernels.backend())"],
            capture_output=True,
            text=True,
            env={"PATH": "/usr/bin:/bin", "ETTMT_DISABLE_NUMBA": "1"},
        )
        assert out.stdout.strip() == "numpy"
