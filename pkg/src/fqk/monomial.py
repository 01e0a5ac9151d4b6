"""Exact phase-decorated (partial) permutation matrices.

A :class:`PartialMonomial` has at most one nonzero entry per row and
column, each entry a root of unity ``w_L**e``. Matrix units and all
Weyl-Heisenberg elements live in this class. Products and Kronecker
products stay inside it, so every identity we check reduces to integer
comparisons.
"""
from __future__ import annotations

from math import gcd

import numpy as np

from . import _kernels
from .cyclotomic import CyclotomicScalar, root_of_unity


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class DimensionError(ValueError):
    pass


class PartialMonomial:
    """N x N matrix with entry ``w_level**exps[r]`` at ``(r, cols[r])``.

    Rows with ``cols[r] == -1`` are zero. Exponents are stored reduced
    mod ``level`` and are 0 on zero rows.
    """

    __slots__ = ("cols", "exps", "level")

    def __init__(self, cols, exps=None, level: int = 1):
        cols = np.asarray(cols, dtype=np.int64).copy()
        n = cols.shape[0]
        if cols.ndim != 1:
            raise ValueError("cols must be one-dimensional")
        if exps is None:
            exps = np.zeros(n, dtype=np.int64)
        exps = np.asarray(exps, dtype=np.int64) % level
        if exps.shape != cols.shape:
            raise ValueError("cols and exps must have equal length")
        if np.any(cols < -1) or np.any(cols >= n):
            raise ValueError("column index out of range")
        live = cols[cols >= 0]
        if len(np.unique(live)) != len(live):
            raise ValueError("two nonzero entries share a column")
        exps[cols < 0] = 0
        cols.flags.writeable = False
        exps.flags.writeable = False
        self.cols = cols
        self.exps = exps
        self.level = int(level)

    @property
    def dim(self) -> int:
        return self.cols.shape[0]

    @property
    def support_size(self) -> int:
        return int(np.count_nonzero(self.cols >= 0))

    # -- constructors ------------------------------------------------------
    @classmethod
    def matrix_unit(cls, n: int, i: int, j: int) -> "PartialMonomial":
        cols = np.full(n, -1, dtype=np.int64)
        cols[i] = j
        return cls(cols)

    @classmethod
    def zero(cls, n: int) -> "PartialMonomial":
        return cls(np.full(n, -1, dtype=np.int64))

    # -- level handling ----------------------------------------------------
    def at_level(self, level: int) -> "PartialMonomial":
        if level % self.level:
            raise ValueError(f"cannot lift level {self.level} to {level}")
        if level == self.level:
            return self
        return self._new(self.cols, self.exps * (level // self.level), level)

    def reduced(self) -> "PartialMonomial":
        """Same matrix at the smallest level carrying its phases."""
        g = self.level
        for e in self.exps:
            g = gcd(g, int(e))
        if g == 1:
            return self
        return self._new(self.cols, self.exps // g, self.level // g)

    def _new(self, cols, exps, level):
        return type(self)(cols, exps, level)

    # -- algebra -----------------------------------------------------------
    def _check_dim(self, other: "PartialMonomial") -> None:
        if self.dim != other.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __matmul__(self, other: "PartialMonomial") -> "PartialMonomial":
        if not isinstance(other, PartialMonomial):
            return NotImplemented
        self._check_dim(other)
        L = _lcm(self.level, other.level)
        a, b = self.at_level(L), other.at_level(L)
        cols, exps = _kernels.batch_product(a.cols[None, :], a.exps[None, :], b.cols[None, :], b.exps[None, :], L)
        cls = MonomialMatrix if isinstance(self, MonomialMatrix) and isinstance(other, MonomialMatrix) else PartialMonomial
        return cls(cols[0], exps[0], L)

    def adjoint(self) -> "PartialMonomial":
        n = self.dim
        cols = np.full(n, -1, dtype=np.int64)
        exps = np.zeros(n, dtype=np.int64)
        live = np.nonzero(self.cols >= 0)[0]
        cols[self.cols[live]] = live
        exps[self.cols[live]] = -self.exps[live]
        return self._new(cols, exps, self.level)

    def scaled(self, k: int, level: int | None = None) -> "PartialMonomial":
        """Multiply every entry by ``w_level**k`` (default: own level)."""
        level = self.level if level is None else level
        L = _lcm(self.level, level)
        a = self.at_level(L)
        exps = np.where(a.cols >= 0, a.exps + k * (L // level), 0)
        return self._new(a.cols, exps, L)

    def kron(self, other: "PartialMonomial") -> "PartialMonomial":
        """Kronecker product, ``self`` as the outer (slow) index."""
        L = _lcm(self.level, other.level)
        a, b = self.at_level(L), other.at_level(L)
        nb = b.dim
        ok = (a.cols[:, None] >= 0) & (b.cols[None, :] >= 0)
        cols = np.where(ok, a.cols[:, None] * nb + b.cols[None, :], -1).ravel()
        exps = np.where(ok, a.exps[:, None] + b.exps[None, :], 0).ravel()
        cls = MonomialMatrix if isinstance(self, MonomialMatrix) and isinstance(other, MonomialMatrix) else PartialMonomial
        return cls(cols, exps, L)

    def conjugate_by(self, T: "MonomialMatrix") -> "PartialMonomial":
        """``T @ self @ T^{-1}``."""
        return T @ self @ T.adjoint()

    def trace(self) -> CyclotomicScalar:
        r = np.arange(self.dim)
        counts = np.bincount(self.exps[self.cols == r], minlength=self.level)
        return CyclotomicScalar.from_exponents(self.level, counts.tolist())

    def entry(self, r: int, c: int) -> CyclotomicScalar:
        if self.cols[r] != c:
            return CyclotomicScalar.from_int(0, self.level)
        return root_of_unity(self.level, int(self.exps[r]))

    def to_dense(self) -> np.ndarray:
        n = self.dim
        out = np.zeros((n, n), dtype=complex)
        live = np.nonzero(self.cols >= 0)[0]
        out[live, self.cols[live]] = np.exp(2j * np.pi * self.exps[live] / self.level)
        return out

    # -- comparisons -------------------------------------------------------
    def _pair(self, other):
        L = _lcm(self.level, other.level)
        return self.at_level(L), other.at_level(L), L

    def __eq__(self, other) -> bool:
        if not isinstance(other, PartialMonomial):
            return NotImplemented
        if self.dim != other.dim:
            return False
        a, b, _ = self._pair(other)
        return bool(np.array_equal(a.cols, b.cols) and np.array_equal(a.exps, b.exps))

    def __hash__(self):
        r = self.reduced()
        return hash((r.level, r.cols.tobytes(), r.exps.tobytes()))

    def projective_ratio(self, other: "PartialMonomial") -> tuple[int, int] | None:
        """If ``self == w_L**k * other`` return ``(k, L)``, else None."""
        if self.dim != other.dim or not np.array_equal(self.cols, other.cols):
            return None
        a, b, L = self._pair(other)
        live = a.cols >= 0
        if not np.any(live):
            return (0, L)
        d = (a.exps[live] - b.exps[live]) % L
        if np.all(d == d[0]):
            return (int(d[0]), L)
        return None

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.cols, np.arange(self.dim)) and not np.any(self.exps))

    def exponent_notation(self) -> list[str]:
        """One line per row: ``w^k@c`` for the entry w_L^k in column c."""
        lines = []
        for r in range(self.dim):
            c = int(self.cols[r])
            if c < 0:
                lines.append("0")
            else:
                lines.append(f"w^{int(self.exps[r])}@{c}")
        return lines

    def __repr__(self) -> str:
        return f"{type(self).__name__}(cols={self.cols.tolist()}, exps={self.exps.tolist()}, level={self.level})"


class MonomialMatrix(PartialMonomial):
    """A unitary monomial matrix: exactly one nonzero per row and column."""

    __slots__ = ()

    def __init__(self, cols, exps=None, level: int = 1):
        super().__init__(cols, exps, level)
        if np.any(self.cols < 0):
            raise ValueError("a monomial matrix has no zero rows")

    @classmethod
    def identity(cls, n: int) -> "MonomialMatrix":
        return cls(np.arange(n))

    @classmethod
    def permutation(cls, images) -> "MonomialMatrix":
        """Permutation matrix with a 1 at ``(r, images[r])``."""
        return cls(np.asarray(images))

    def inverse(self) -> "MonomialMatrix":
        return self.adjoint()

    def __pow__(self, k: int) -> "MonomialMatrix":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = MonomialMatrix.identity(self.dim)
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def inverse_permutation(self) -> np.ndarray:
        inv = np.empty(self.dim, dtype=np.int64)
        inv[self.cols] = np.arange(self.dim)
        return inv


def mono_mul(a: PartialMonomial, b: PartialMonomial) -> PartialMonomial:
    return a @ b


def mono_adjoint(a: PartialMonomial) -> PartialMonomial:
    return a.adjoint()


def stack(mats) -> tuple[np.ndarray, np.ndarray, int]:
    """Stack monomials into ``(cols, exps, level)`` arrays at a common level."""
    mats = list(mats)
    if not mats:
        raise ValueError("nothing to stack")
    L = 1
    for m in mats:
        L = _lcm(L, m.level)
    cols = np.stack([m.cols for m in mats])
    exps = np.stack([m.at_level(L).exps for m in mats])
    return cols, exps, L
