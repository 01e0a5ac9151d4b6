"""Hot loops over exact monomial data.

Every kernel is written in the numba-compilable subset of Python. When numba
is importable and ``FQK_DISABLE_NUMBA`` is unset, calls go to the
``@njit``-compiled version; otherwise to a numpy fallback (vectorised where
that is straightforward, otherwise the same loop run by the interpreter).

Monomial data layout: a partial monomial N x N matrix is a pair of int64
arrays ``cols`` and ``exps`` of length N. Row r holds ``w_L**exps[r]`` at
column ``cols[r]``, or nothing when ``cols[r] == -1``.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None

_FLAG = os.environ.get("FQK_DISABLE_NUMBA", "").strip().lower()
NUMBA_AVAILABLE = numba is not None
_use_numba = NUMBA_AVAILABLE and _FLAG not in ("1", "true", "yes", "on")

_registry: dict[str, "Kernel"] = {}


def backend() -> str:
    return "numba" if _use_numba else "numpy"


def set_backend(name: str) -> None:
    """Switch all kernels between ``"numba"`` and ``"numpy"`` at runtime."""
    global _use_numba
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError("numba is not installed")
    _use_numba = name == "numba"


class Kernel:
    def __init__(self, py_func, fallback=None):
        self.py_func = py_func
        self.fallback = fallback if fallback is not None else py_func
        self.__name__ = py_func.__name__
        self.__doc__ = py_func.__doc__
        self._jit = None

    @property
    def jit(self):
        if self._jit is None:
            self._jit = numba.njit(cache=True)(self.py_func)
        return self._jit

    def __call__(self, *args):
        if _use_numba:
            return self.jit(*args)
        return self.fallback(*args)


def kernel(fallback=None):
    def wrap(func):
        k = Kernel(func, fallback)
        _registry[func.__name__] = k
        return k

    return wrap


def kernels() -> dict[str, Kernel]:
    return dict(_registry)


# -- batched products -------------------------------------------------------

def _batch_product_np(ca, ea, cb, eb, level):
    K, n = ca.shape
    safe = np.where(ca >= 0, ca, 0)
    rows = np.arange(K)[:, None]
    cols = np.where(ca >= 0, cb[rows, safe], -1)
    exps = np.where(cols >= 0, (ea + eb[rows, safe]) % level, 0)
    return cols.astype(np.int64), exps.astype(np.int64)


@kernel(fallback=_batch_product_np)
def batch_product(ca, ea, cb, eb, level):
    """Row-wise products ``A[k] @ B[k]`` of stacked partial monomials."""
    K, n = ca.shape
    cols = np.empty((K, n), dtype=np.int64)
    exps = np.zeros((K, n), dtype=np.int64)
    for k in range(K):
        for r in range(n):
            c = ca[k, r]
            if c < 0:
                cols[k, r] = -1
            else:
                c2 = cb[k, c]
                cols[k, r] = c2
                if c2 >= 0:
                    exps[k, r] = (ea[k, r] + eb[k, c]) % level
    return cols, exps


# -- Hilbert-Schmidt inner products ----------------------------------------

def _trace_histograms_np(ca, ea, cb, eb, level):
    KA, n = ca.shape
    KB = cb.shape[0]
    match = (ca[:, None, :] == cb[None, :, :]) & (ca[:, None, :] >= 0)
    diff = (ea[:, None, :] - eb[None, :, :]) % level
    flat = (np.arange(KA * KB, dtype=np.int64).reshape(KA, KB, 1) * level + diff)[match]
    counts = np.bincount(flat, minlength=KA * KB * level)
    return counts.reshape(KA, KB, level).astype(np.int64)


@kernel(fallback=_trace_histograms_np)
def trace_histograms(ca, ea, cb, eb, level):
    """Exponent histograms of Tr(A_i B_j^*).

    ``out[i, j, k]`` counts the rows contributing w_L**k to the trace; the
    trace is ``sum_k out[i, j, k] * w_L**k``.
    """
    KA, n = ca.shape
    KB = cb.shape[0]
    out = np.zeros((KA, KB, level), dtype=np.int64)
    for i in range(KA):
        for j in range(KB):
            for r in range(n):
                c = ca[i, r]
                if c >= 0 and c == cb[j, r]:
                    d = (ea[i, r] - eb[j, r]) % level
                    out[i, j, d] += 1
    return out


# -- Weyl-Heisenberg enumeration --------------------------------------------

def _wh_all_np(N):
    j, k, l = np.meshgrid(np.arange(N), np.arange(N), np.arange(N), indexing="ij")
    j, k, l = j.ravel(), k.ravel(), l.ravel()
    r = np.arange(N)
    cols = (r[None, :] + l[:, None]) % N
    exps = (j[:, None] + k[:, None] * r[None, :]) % N
    return cols.astype(np.int64), exps.astype(np.int64)


@kernel(fallback=_wh_all_np)
def wh_all(N):
    """Monomial data of w^j Q^k P^l for all (j, k, l), row index j*N*N + k*N + l."""
    M = N * N * N
    cols = np.empty((M, N), dtype=np.int64)
    exps = np.empty((M, N), dtype=np.int64)
    idx = 0
    for j in range(N):
        for k in range(N):
            for l in range(N):
                for r in range(N):
                    cols[idx, r] = (r + l) % N
                    exps[idx, r] = (j + k * r) % N
                idx += 1
    return cols, exps


def _commutes_with_np(cols, exps, gc, ge, level):
    K, n = cols.shape
    gcb = np.broadcast_to(gc, (K, n))
    geb = np.broadcast_to(ge, (K, n))
    c1, e1 = _batch_product_np(cols, exps, gcb, geb, level)
    c2, e2 = _batch_product_np(gcb, geb, cols, exps, level)
    return np.all((c1 == c2) & (e1 == e2), axis=1)


@kernel(fallback=_commutes_with_np)
def commutes_with(cols, exps, gc, ge, level):
    """For each stacked monomial X[k], whether X[k] G == G X[k] exactly."""
    K, n = cols.shape
    out = np.ones(K, dtype=np.bool_)
    for k in range(K):
        for r in range(n):
            # (X G)[r] -> column gc[cols[k, r]], exponent exps + ge
            c = cols[k, r]
            c1 = -1 if c < 0 else gc[c]
            e1 = 0 if c1 < 0 else (exps[k, r] + ge[c]) % level
            g = gc[r]
            c2 = -1 if g < 0 else cols[k, g]
            e2 = 0 if c2 < 0 else (ge[r] + exps[k, g]) % level
            if c1 != c2 or e1 != e2:
                out[k] = False
                break
    return out


# -- grading closure --------------------------------------------------------

@kernel()
def closure_table(bc, be, sub_of, sub_ptr, sub_elems, pos_ptr, pos_elems, support, level):
    """Closure table of a graded family of partial monomials.

    Parameters are CSR encodings: subspace s owns basis elements
    ``sub_elems[sub_ptr[s]:sub_ptr[s+1]]``; matrix position ``r*n + c`` is
    covered by elements ``pos_elems[pos_ptr[p]:pos_ptr[p+1]]``. Elements of
    one subspace must have pairwise disjoint supports.

    Returns ``(table, bad)``: ``table[a, b]`` is the subspace containing all
    products, ``-1`` when every product vanishes, ``-2`` on a violation;
    ``bad`` holds ``(a, b, x, y)`` for the first violating basis pair.
    """
    K, n = bc.shape
    S = sub_ptr.shape[0] - 1
    table = np.full((S, S), -1, dtype=np.int64)
    bad = np.full(4, -1, dtype=np.int64)
    ratio = np.zeros(K, dtype=np.int64)
    stamp = np.zeros(K, dtype=np.int64)
    cover = np.zeros(K, dtype=np.int64)
    touched = np.empty(n, dtype=np.int64)
    pc = np.empty(n, dtype=np.int64)
    pe = np.zeros(n, dtype=np.int64)
    tick = 0
    for a in range(S):
        for b in range(S):
            gamma = -1
            failed = False
            for ia in range(sub_ptr[a], sub_ptr[a + 1]):
                x = sub_elems[ia]
                for ib in range(sub_ptr[b], sub_ptr[b + 1]):
                    y = sub_elems[ib]
                    first = -1
                    for r in range(n):
                        c = bc[x, r]
                        if c < 0:
                            pc[r] = -1
                        else:
                            c2 = bc[y, c]
                            pc[r] = c2
                            if c2 >= 0:
                                pe[r] = (be[x, r] + be[y, c]) % level
                                if first < 0:
                                    first = r
                    if first < 0:
                        continue
                    found = -1
                    p0 = first * n + pc[first]
                    for ic in range(pos_ptr[p0], pos_ptr[p0 + 1]):
                        g = sub_of[pos_elems[ic]]
                        # membership of the product in subspace g
                        tick += 1
                        nt = 0
                        ok = True
                        for r in range(n):
                            if pc[r] < 0:
                                continue
                            p = r * n + pc[r]
                            e = -1
                            for iq in range(pos_ptr[p], pos_ptr[p + 1]):
                                q = pos_elems[iq]
                                if sub_of[q] == g:
                                    e = q
                                    break
                            if e < 0:
                                ok = False
                                break
                            d = (pe[r] - be[e, r]) % level
                            if stamp[e] != tick:
                                stamp[e] = tick
                                ratio[e] = d
                                cover[e] = 1
                                touched[nt] = e
                                nt += 1
                            elif ratio[e] != d:
                                ok = False
                                break
                            else:
                                cover[e] += 1
                        if ok:
                            for t in range(nt):
                                if cover[touched[t]] != support[touched[t]]:
                                    ok = False
                                    break
                        if ok:
                            found = g
                            break
                    if found < 0 or (gamma >= 0 and found != gamma):
                        failed = True
                        bad[0] = a
                        bad[1] = b
                        bad[2] = x
                        bad[3] = y
                        break
                    gamma = found
                if failed:
                    break
            if failed:
                table[a, b] = -2
                return table, bad
            table[a, b] = gamma
    return table, bad


# -- exact orthonormality ---------------------------------------------------

def _gram_defects_np(cols, exps, level, red, diag_expect):
    K = cols.shape[0]
    bad = 0
    first = np.full(2, -1, dtype=np.int64)
    step = max(1, 4_000_000 // max(1, K * cols.shape[1]))
    for start in range(0, K, step):
        stop = min(K, start + step)
        hist = _trace_histograms_np(cols[start:stop], exps[start:stop], cols, exps, level)
        reduced = hist @ red
        for i in range(stop - start):
            gi = start + i
            row = reduced[i].copy()
            diag_hist = hist[i, gi]
            row_bad = np.any(row != 0, axis=1)
            row_bad[gi] = diag_hist[0] != diag_expect[gi] or np.any(diag_hist[1:] != 0)
            nb = int(np.count_nonzero(row_bad))
            if nb and first[0] < 0:
                first[0] = gi
                first[1] = int(np.nonzero(row_bad)[0][0])
            bad += nb
    return bad, first


@kernel(fallback=_gram_defects_np)
def gram_defects(cols, exps, level, red, diag_expect):
    """Count pairs (i, j) where Tr(A_i A_j^*) differs from diag_expect[i] delta_ij.

    ``red`` is the exponent-to-power-basis reduction matrix for ``level``;
    off-diagonal traces are tested for exact vanishing in Q(w_level), and
    diagonal traces for equality with the integer ``diag_expect[i]``.
    Returns ``(count, first_bad_pair)``.
    """
    K, n = cols.shape
    d = red.shape[1]
    hist = np.zeros(level, dtype=np.int64)
    acc = np.zeros(d, dtype=np.int64)
    bad = 0
    first = np.full(2, -1, dtype=np.int64)
    for i in range(K):
        for j in range(K):
            hist[:] = 0
            for r in range(n):
                c = cols[i, r]
                if c >= 0 and c == cols[j, r]:
                    hist[(exps[i, r] - exps[j, r]) % level] += 1
            wrong = False
            if i == j:
                if hist[0] != diag_expect[i]:
                    wrong = True
                for k in range(1, level):
                    if hist[k] != 0:
                        wrong = True
            else:
                acc[:] = 0
                for k in range(level):
                    h = hist[k]
                    if h != 0:
                        for t in range(d):
                            acc[t] += h * red[k, t]
                for t in range(d):
                    if acc[t] != 0:
                        wrong = True
            if wrong:
                if first[0] < 0:
                    first[0] = i
                    first[1] = j
                bad += 1
    return bad, first
