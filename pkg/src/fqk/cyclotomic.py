"""Exact arithmetic in the cyclotomic rings Q(w_L), w_L = exp(2 pi i / L).

Elements are stored as coefficient vectors in the power basis
1, w, ..., w^{phi(L)-1}, i.e. reduced modulo the L-th cyclotomic
polynomial. Reduction modulo Phi_L (rather than x^L - 1) makes the
representation canonical, so equality and zero tests are coefficient
comparisons and never touch floating point.
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

import numpy as np

from .config import check_bound, max_level

__all__ = [
    "CyclotomicScalar",
    "cyclotomic_polynomial",
    "reduction_matrix",
    "root_of_unity",
    "add",
    "mul",
    "conj",
    "is_zero",
    "to_float",
    "embed",
    "restrict",
    "exponent_sums_are_zero",
]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # Exact division of integer polynomials (low degree first), den monic.
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + dd]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(L: int) -> tuple[int, ...]:
    """Coefficients of Phi_L, lowest degree first.

    Computed as (x^L - 1) divided by Phi_d for every proper divisor d of L.
    """
    if L < 1:
        raise ValueError(f"level must be >= 1, got {L}")
    poly = [-1] + [0] * (L - 1) + [1]
    for d in range(1, L):
        if L % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def degree(L: int) -> int:
    return len(cyclotomic_polynomial(L)) - 1


@lru_cache(maxsize=None)
def _reduction_rows(L: int) -> tuple[tuple[int, ...], ...]:
    phi = cyclotomic_polynomial(L)
    d = len(phi) - 1
    rows = []
    cur = [0] * d
    cur[0] = 1
    for _ in range(L):
        rows.append(tuple(cur))
        # multiply by x, then subtract top * Phi_L
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, phi[:-1])]
    return tuple(rows)


def reduction_matrix(L: int) -> np.ndarray:
    """Integer matrix R of shape (L, phi(L)) with row k = w_L^k in the power basis.

    A vector h of exponent counts (h[k] copies of w^k) reduces to the canonical
    coefficients ``h @ R``; it represents zero iff that product vanishes.
    """
    return np.array(_reduction_rows(L), dtype=np.int64).reshape(L, degree(L))


def exponent_sums_are_zero(counts: np.ndarray, L: int) -> np.ndarray:
    """Exact zero test for a batch of sums of L-th roots of unity.

    ``counts[..., k]`` is the integer multiplicity of w_L^k. Returns a boolean
    array over the leading axes.
    """
    counts = np.asarray(counts, dtype=np.int64)
    if counts.shape[-1] != L:
        raise ValueError(f"last axis must have length {L}")
    reduced = counts @ reduction_matrix(L)
    return ~np.any(reduced, axis=-1)


def _norm_coeff(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, (int, np.integer)):
        return int(c)
    if isinstance(c, Rational):
        return _norm_coeff(Fraction(c.numerator, c.denominator))
    raise TypeError(f"coefficients must be rational, got {type(c).__name__}")


class CyclotomicScalar:
    """An element ``sum(c_k * w_L**k)`` of Q(w_L) in canonical form.

    Construct with :func:`root_of_unity`, :meth:`from_exponents` or
    :meth:`from_int`; the raw constructor expects already-reduced
    coefficients of length phi(L).
    """

    __slots__ = ("level", "coeffs")

    def __init__(self, level: int, coeffs):
        check_bound(level, max_level(), "cyclotomic level")
        coeffs = tuple(_norm_coeff(c) for c in coeffs)
        if len(coeffs) != degree(level):
            raise ValueError(f"level {level} needs {degree(level)} coefficients, got {len(coeffs)}")
        self.level = level
        self.coeffs = coeffs

    @classmethod
    def from_exponents(cls, level: int, counts) -> "CyclotomicScalar":
        """Reduce ``sum(counts[k] * w**k)`` for an arbitrary-length count list."""
        check_bound(level, max_level(), "cyclotomic level")
        folded = [0] * level
        for k, c in enumerate(counts):
            if c:
                folded[k % level] += c
        rows = _reduction_rows(level)
        out = [0] * degree(level)
        for k, c in enumerate(folded):
            if c:
                for i, r in enumerate(rows[k]):
                    if r:
                        out[i] += c * r
        return cls(level, out)

    @classmethod
    def from_int(cls, value, level: int = 1) -> "CyclotomicScalar":
        return cls.from_exponents(level, [value])

    def __repr__(self) -> str:
        return f"CyclotomicScalar(level={self.level}, coeffs={self.coeffs})"

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("w" if k == 1 else f"w^{k}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")

    def __hash__(self):
        # Equal elements may live at different levels; hash the minimal-level form.
        m = minimal_level(self)
        return hash((m.level, m.coeffs))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CyclotomicScalar.from_int(other, self.level)
        if not isinstance(other, CyclotomicScalar):
            return NotImplemented
        return is_zero(add(self, -other))

    def __neg__(self) -> "CyclotomicScalar":
        return CyclotomicScalar(self.level, [-c for c in self.coeffs])

    def _coerce(self, other):
        if isinstance(other, CyclotomicScalar):
            return other
        if isinstance(other, (int, Fraction, np.integer)):
            return CyclotomicScalar.from_int(other, self.level)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else add(self, -other)

    def __rsub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else add(other, -self)

    def __mul__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else mul(self, other)

    __rmul__ = __mul__

    def __complex__(self) -> complex:
        return to_float(self)

    def is_zero(self) -> bool:
        return is_zero(self)

    def conj(self) -> "CyclotomicScalar":
        return conj(self)


def root_of_unity(L: int, k: int = 1) -> CyclotomicScalar:
    """w_L^k with the exponent reduced mod L."""
    if L < 1:
        raise ValueError(f"level must be >= 1, got {L}")
    counts = [0] * L
    counts[k % L] = 1
    return CyclotomicScalar.from_exponents(L, counts)


def embed(a: CyclotomicScalar, level: int) -> CyclotomicScalar:
    """View ``a`` at a multiple of its level (w_L = w_{cL}^c)."""
    if level % a.level:
        raise ValueError(f"cannot embed level {a.level} into level {level}")
    if level == a.level:
        return a
    c = level // a.level
    counts = [0] * level
    for k, coef in enumerate(a.coeffs):
        counts[k * c] = coef
    return CyclotomicScalar.from_exponents(level, counts)


def _common(a: CyclotomicScalar, b: CyclotomicScalar):
    L = _lcm(a.level, b.level)
    check_bound(L, max_level(), "cyclotomic level")
    return embed(a, L), embed(b, L), L


def add(a: CyclotomicScalar, b: CyclotomicScalar) -> CyclotomicScalar:
    a, b, L = _common(a, b)
    return CyclotomicScalar(L, [x + y for x, y in zip(a.coeffs, b.coeffs)])


def mul(a: CyclotomicScalar, b: CyclotomicScalar) -> CyclotomicScalar:
    a, b, L = _common(a, b)
    prod_ = [0] * (len(a.coeffs) + len(b.coeffs))
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                if y:
                    prod_[i + j] += x * y
    return CyclotomicScalar.from_exponents(L, prod_)


def conj(a: CyclotomicScalar) -> CyclotomicScalar:
    """Complex conjugate: w^k -> w^{-k}."""
    L = a.level
    counts = [0] * L
    for k, c in enumerate(a.coeffs):
        counts[(-k) % L] += c
    return CyclotomicScalar.from_exponents(L, counts)


def is_zero(a: CyclotomicScalar) -> bool:
    return not any(a.coeffs)


def to_float(a: CyclotomicScalar) -> complex:
    """Floating-point value of ``a``.

    The absolute error is at most about ``4 * phi(L) * eps * max|c_k|``
    with eps the double-precision unit roundoff.
    """
    L = a.level
    return complex(sum(float(c) * cmath.exp(2j * cmath.pi * k / L) for k, c in enumerate(a.coeffs) if c))


def _solve_rational(A: list[list[int]], b: list) -> list[Fraction] | None:
    # Least-effort exact solve of a consistent (possibly overdetermined) system.
    rows = [[Fraction(x) for x in row] + [Fraction(v)] for row, v in zip(A, b)]
    ncols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][col]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if any(row[-1] != 0 for row in rows[r:]):
        return None
    sol = [Fraction(0)] * ncols
    for i, col in enumerate(pivots):
        sol[col] = rows[i][-1]
    return sol


def restrict(a: CyclotomicScalar, level: int) -> CyclotomicScalar:
    """Express ``a`` at a divisor ``level`` of its level.

    Raises ValueError when ``a`` does not lie in Q(w_level).
    """
    if a.level % level:
        raise ValueError(f"level {level} does not divide {a.level}")
    if level == a.level:
        return a
    c = a.level // level
    rows = _reduction_rows(a.level)
    cols = [rows[k * c] for k in range(degree(level))]
    A = [list(r) for r in zip(*cols)]
    sol = _solve_rational(A, list(a.coeffs))
    if sol is None:
        raise ValueError(f"element does not lie in the level-{level} subfield")
    return CyclotomicScalar(level, sol)


def minimal_level(a: CyclotomicScalar) -> CyclotomicScalar:
    """Restrict ``a`` to the smallest level whose field contains it."""
    for d in range(1, a.level + 1):
        if a.level % d == 0:
            try:
                return restrict(a, d)
            except ValueError:
                continue
    return a
