"""Numeric inner loops with two interchangeable implementations.

The hot paths of this package are the word-level edit distance (evaluated
thousands of times per sentence while searching for block shifts) and the
expected-count steps of the alignment-model EM training. Each kernel exists
twice:

* a numba ``@njit`` version (default when numba imports), and
* a pure-numpy version with identical semantics.

Set ``ETTMT_DISABLE_NUMBA=1`` to force the numpy path; it is also selected
automatically when numba is not installed. ``benchmarks/bench_kernels.py``
times the two side by side.

Translation tables use a CSR layout over (source type, target type) pairs
that co-occur in training data: ``t_indptr[f] .. t_indptr[f+1]`` delimits the
sorted target-id columns of source type ``f`` in ``t_cols``/``t_vals``.
Sentence pairs are passed as flattened id arrays with indptr offsets; every
source sentence starts with the virtual empty-source id 0.
"""

from __future__ import annotations

import math
import os

import numpy as np

_DISABLE_FLAG = os.environ.get("ETTMT_DISABLE_NUMBA", "").strip().lower()
NUMBA_DISABLED = _DISABLE_FLAG in ("1", "true", "yes", "on")

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag instead
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


USING_NUMBA = HAVE_NUMBA and not NUMBA_DISABLED


# ---------------------------------------------------------------------------
# Word-level Levenshtein distance (unit costs)
# ---------------------------------------------------------------------------

def _levenshtein_loop(a, b):
    n = a.shape[0]
    m = b.shape[0]
    if n == 0:
        return m
    if m == 0:
        return n
    prev = np.arange(m + 1, dtype=np.int64)
    cur = np.empty(m + 1, dtype=np.int64)
    for i in range(1, n + 1):
        cur[0] = i
        ai = a[i - 1]
        for j in range(1, m + 1):
            cost = 0 if ai == b[j - 1] else 1
            best = prev[j - 1] + cost
            if prev[j] + 1 < best:
                best = prev[j] + 1
            if cur[j - 1] + 1 < best:
                best = cur[j - 1] + 1
            cur[j] = best
        prev, cur = cur, prev
    return prev[m]


levenshtein_jit = njit(cache=True)(_levenshtein_loop)


def levenshtein_np(a, b):
    """Row-vectorized edit distance; the cur[j-1]+1 chain folds into one
    minimum.accumulate over (value - column index)."""
    n = a.shape[0]
    m = b.shape[0]
    if n == 0:
        return int(m)
    if m == 0:
        return int(n)
    cols = np.arange(m + 1, dtype=np.int64)
    prev = cols.copy()
    for i in range(1, n + 1):
        c0 = np.empty(m + 1, dtype=np.int64)
        c0[0] = i
        np.minimum(prev[:-1] + (b != a[i - 1]), prev[1:] + 1, out=c0[1:])
        prev = np.minimum.accumulate(c0 - cols) + cols
    return int(prev[m])


# ---------------------------------------------------------------------------
# EM expected counts, lexical model (position-blind)
# ---------------------------------------------------------------------------

def _ibm1_estep_loop(
    src_flat, src_indptr, tgt_flat, tgt_indptr, t_indptr, t_cols, t_vals, counts, recv
):
    loglik = 0.0
    n_pairs = src_indptr.shape[0] - 1
    for p in range(n_pairs):
        s0 = src_indptr[p]
        s1 = src_indptr[p + 1]
        t0 = tgt_indptr[p]
        t1 = tgt_indptr[p + 1]
        n_src = s1 - s0
        for jt in range(t0, t1):
            e = tgt_flat[jt]
            denom = 0.0
            for it in range(s0, s1):
                f = src_flat[it]
                lo = t_indptr[f]
                hi = t_indptr[f + 1]
                k = lo + np.searchsorted(t_cols[lo:hi], e)
                denom += t_vals[k]
            loglik += math.log(denom / n_src)
            for it in range(s0, s1):
                f = src_flat[it]
                lo = t_indptr[f]
                hi = t_indptr[f + 1]
                k = lo + np.searchsorted(t_cols[lo:hi], e)
                delta = t_vals[k] / denom
                counts[k] += delta
                recv[it] += delta
    return loglik


ibm1_estep_jit = njit(cache=True)(_ibm1_estep_loop)


def ibm1_estep_np(
    src_flat, src_indptr, tgt_flat, tgt_indptr, t_indptr, t_cols, t_vals, counts, recv
):
    loglik = 0.0
    n_pairs = src_indptr.shape[0] - 1
    for p in range(n_pairs):
        f = src_flat[src_indptr[p] : src_indptr[p + 1]]
        e = tgt_flat[tgt_indptr[p] : tgt_indptr[p + 1]]
        if e.shape[0] == 0:
            continue
        # flat t-table positions for every (source pos, target pos) combination
        lo = t_indptr[f]
        pos = np.empty((f.shape[0], e.shape[0]), dtype=np.int64)
        for i in range(f.shape[0]):
            row = t_cols[t_indptr[f[i]] : t_indptr[f[i] + 1]]
            pos[i] = lo[i] + np.searchsorted(row, e)
        probs = t_vals[pos]
        denom = probs.sum(axis=0)
        loglik += float(np.log(denom / f.shape[0]).sum())
        delta = probs / denom
        np.add.at(counts, pos, delta)
        recv[src_indptr[p] : src_indptr[p + 1]] += delta.sum(axis=1)
    return loglik


# ---------------------------------------------------------------------------
# EM expected counts, lexical + position model
# ---------------------------------------------------------------------------
#
# The position table is flattened: for a pair whose block starts at
# align_bases[p], entry (target position jt, source position i) lives at
# base + jt * n_src + i, with n_src counting the virtual empty source slot.

def _ibm2_estep_loop(
    src_flat,
    src_indptr,
    tgt_flat,
    tgt_indptr,
    align_bases,
    t_indptr,
    t_cols,
    t_vals,
    a_vals,
    counts,
    a_counts,
    recv,
):
    loglik = 0.0
    n_pairs = src_indptr.shape[0] - 1
    for p in range(n_pairs):
        s0 = src_indptr[p]
        s1 = src_indptr[p + 1]
        t0 = tgt_indptr[p]
        t1 = tgt_indptr[p + 1]
        n_src = s1 - s0
        base = align_bases[p]
        for jt in range(t1 - t0):
            e = tgt_flat[t0 + jt]
            arow = base + jt * n_src
            denom = 0.0
            for i in range(n_src):
                f = src_flat[s0 + i]
                lo = t_indptr[f]
                hi = t_indptr[f + 1]
                k = lo + np.searchsorted(t_cols[lo:hi], e)
                denom += t_vals[k] * a_vals[arow + i]
            loglik += math.log(denom)
            for i in range(n_src):
                f = src_flat[s0 + i]
                lo = t_indptr[f]
                hi = t_indptr[f + 1]
                k = lo + np.searchsorted(t_cols[lo:hi], e)
                delta = t_vals[k] * a_vals[arow + i] / denom
                counts[k] += delta
                a_counts[arow + i] += delta
                recv[s0 + i] += delta
    return loglik


ibm2_estep_jit = njit(cache=True)(_ibm2_estep_loop)


def ibm2_estep_np(
    src_flat,
    src_indptr,
    tgt_flat,
    tgt_indptr,
    align_bases,
    t_indptr,
    t_cols,
    t_vals,
    a_vals,
    counts,
    a_counts,
    recv,
):
    loglik = 0.0
    n_pairs = src_indptr.shape[0] - 1
    for p in range(n_pairs):
        f = src_flat[src_indptr[p] : src_indptr[p + 1]]
        e = tgt_flat[tgt_indptr[p] : tgt_indptr[p + 1]]
        n_src = f.shape[0]
        n_tgt = e.shape[0]
        if n_tgt == 0:
            continue
        base = align_bases[p]
        lo = t_indptr[f]
        pos = np.empty((n_src, n_tgt), dtype=np.int64)
        for i in range(n_src):
            row = t_cols[t_indptr[f[i]] : t_indptr[f[i] + 1]]
            pos[i] = lo[i] + np.searchsorted(row, e)
        apos = base + np.arange(n_tgt)[None, :] * n_src + np.arange(n_src)[:, None]
        probs = t_vals[pos] * a_vals[apos]
        denom = probs.sum(axis=0)
        loglik += float(np.log(denom).sum())
        delta = probs / denom
        np.add.at(counts, pos, delta)
        np.add.at(a_counts, apos, delta)
        recv[src_indptr[p] : src_indptr[p + 1]] += delta.sum(axis=1)
    return loglik


if USING_NUMBA:
    levenshtein = levenshtein_jit
    ibm1_estep = ibm1_estep_jit
    ibm2_estep = ibm2_estep_jit
else:
    levenshtein = levenshtein_np
    ibm1_estep = ibm1_estep_np
    ibm2_estep = ibm2_estep_np


def backend() -> str:
    """Name of the active kernel backend ("numba" or "numpy")."""
    return "numba" if USING_NUMBA else "numpy"
