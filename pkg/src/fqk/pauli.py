"""Generalized Pauli matrices, the finite Weyl-Heisenberg group and the
Schwinger operator basis, all in exact monomial form."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .config import check_bound, max_matrix_n
from .cyclotomic import reduction_matrix
from .monomial import MonomialMatrix, PartialMonomial, mono_adjoint, mono_mul, stack

__all__ = [
    "q_matrix",
    "p_matrix",
    "mono_mul",
    "mono_adjoint",
    "WhGroupElement",
    "wh_normal_form",
    "wh_group_order",
    "wh_center",
    "WeylOperator",
    "weyl_operator",
    "WeightedMonomial",
    "schwinger_basis",
    "hs_gram_exact",
    "gram_is_identity",
    "orthonormality_defects",
    "expand_in_basis",
    "reconstruct",
    "weyl_ray_law_defects",
]


def _check_n(N: int) -> None:
    if not isinstance(N, (int, np.integer)) or N < 1:
        raise ValueError(f"dimension must be a positive integer, got {N!r}")


def q_matrix(N: int) -> MonomialMatrix:
    """Clock matrix diag(1, w, ..., w^{N-1})."""
    _check_n(N)
    return MonomialMatrix(np.arange(N), np.arange(N), N)


def p_matrix(N: int) -> MonomialMatrix:
    """Shift matrix with (P)_{r,s} = delta_{r+1,s}."""
    _check_n(N)
    return MonomialMatrix((np.arange(N) + 1) % N, None, N)


@dataclass(frozen=True)
class WhGroupElement:
    """w^j Q^k P^l in dimension N, exponents reduced mod N."""

    N: int
    j: int
    k: int
    l: int

    def __post_init__(self):
        object.__setattr__(self, "j", self.j % self.N)
        object.__setattr__(self, "k", self.k % self.N)
        object.__setattr__(self, "l", self.l % self.N)

    @classmethod
    def identity(cls, N: int) -> "WhGroupElement":
        return cls(N, 0, 0, 0)

    def __mul__(self, other: "WhGroupElement") -> "WhGroupElement":
        if not isinstance(other, WhGroupElement):
            return NotImplemented
        if other.N != self.N:
            raise ValueError("dimension mismatch")
        # P^l Q^k' = w^{l k'} Q^k' P^l
        return WhGroupElement(self.N, self.j + other.j + self.l * other.k, self.k + other.k, self.l + other.l)

    def inverse(self) -> "WhGroupElement":
        # (w^j Q^k P^l)^{-1} = w^{-j} P^{-l} Q^{-k} = w^{-j + lk} Q^{-k} P^{-l}
        return WhGroupElement(self.N, -self.j + self.l * self.k, -self.k, -self.l)

    def __pow__(self, e: int) -> "WhGroupElement":
        base = self if e >= 0 else self.inverse()
        out = WhGroupElement.identity(self.N)
        for _ in range(abs(e)):
            out = out * base
        return out

    def matrix(self) -> MonomialMatrix:
        N = self.N
        r = np.arange(N)
        return MonomialMatrix((r + self.l) % N, self.j + self.k * r, N)

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.j, self.k, self.l)

    def __str__(self) -> str:
        return f"w^{self.j} Q^{self.k} P^{self.l}"


_WORD_RE = re.compile(r"\s*([wWQP])\s*(?:\^?\s*(-?\d+))?")


def _parse_word(word: str) -> list[tuple[str, int]]:
    out = []
    pos = 0
    word = word.replace("ω", "w").replace("*", " ").replace("·", " ")
    while pos < len(word):
        if word[pos:].strip() == "":
            break
        m = _WORD_RE.match(word, pos)
        if not m:
            raise ValueError(f"cannot parse generator word at {word[pos:]!r}")
        out.append((m.group(1).lower() if m.group(1) in "wW" else m.group(1), int(m.group(2) or 1)))
        pos = m.end()
    return out


def wh_normal_form(words: str | Iterable[tuple[str, int]], N: int) -> WhGroupElement:
    """Reduce a product of generators to w^j Q^k P^l.

    ``words`` is a sequence of ``(symbol, exponent)`` pairs with symbol in
    ``{"w", "Q", "P"}``, or a string such as ``"P^2 Q^3 P Q"``.
    """
    _check_n(N)
    if isinstance(words, str):
        words = _parse_word(words)
    gens = {"w": WhGroupElement(N, 1, 0, 0), "Q": WhGroupElement(N, 0, 1, 0), "P": WhGroupElement(N, 0, 0, 1)}
    out = WhGroupElement.identity(N)
    for sym, e in words:
        if sym not in gens:
            raise ValueError(f"unknown generator {sym!r}")
        out = out * gens[sym] ** (e % N)
    return out


def _enum_bound(N: int, max_n: int | None) -> None:
    _check_n(N)
    check_bound(N, max_matrix_n(max_n), "Weyl-Heisenberg enumeration N")


def wh_group_order(N: int, max_n: int | None = None) -> int:
    """|Pi_N|, counted as the number of distinct matrices w^j Q^k P^l."""
    _enum_bound(N, max_n)
    cols, exps = _kernels.wh_all(N)
    return int(np.unique(np.concatenate([cols, exps], axis=1), axis=0).shape[0])


def wh_center(N: int, max_n: int | None = None) -> list[WhGroupElement]:
    """Elements of Pi_N commuting with both generators Q and P."""
    _enum_bound(N, max_n)
    cols, exps = _kernels.wh_all(N)
    q, p = q_matrix(N), p_matrix(N)
    mask = _kernels.commutes_with(cols, exps, q.cols, q.exps, N) & _kernels.commutes_with(cols, exps, p.cols, p.exps, N)
    out = []
    for idx in np.nonzero(mask)[0]:
        j, rem = divmod(int(idx), N * N)
        k, l = divmod(rem, N)
        out.append(WhGroupElement(N, j, k, l))
    return out


@dataclass(frozen=True)
class WeylOperator:
    """W(rho, j) = w^{j rho / 2} Q^rho P^j for odd N.

    The half exponent is ``j * rho * inv(2) mod N``.
    """

    N: int
    rho: int
    j: int
    element: WhGroupElement

    @property
    def half_phase(self) -> int:
        return self.element.j

    def matrix(self) -> MonomialMatrix:
        return self.element.matrix()

    def __mul__(self, other: "WeylOperator") -> WhGroupElement:
        return self.element * other.element


def weyl_operator(N: int, rho: int, j: int) -> WeylOperator:
    """Discrete Weyl displacement operator; defined only for odd N.

    For even N the half phase has no meaning in Z_N; use
    :func:`schwinger_basis` instead.
    """
    _check_n(N)
    if N % 2 == 0:
        raise ValueError(f"W(rho, j) needs odd N (got N={N}); use schwinger_basis for even N")
    inv2 = (N + 1) // 2
    rho, j = rho % N, j % N
    return WeylOperator(N, rho, j, WhGroupElement(N, j * rho * inv2, rho, j))


@dataclass(frozen=True)
class WeightedMonomial:
    """``sqrt(weight_sq) * matrix`` with a rational squared weight."""

    matrix: PartialMonomial
    weight_sq: Fraction

    def to_dense(self) -> np.ndarray:
        return float(self.weight_sq) ** 0.5 * self.matrix.to_dense()

    def kron(self, other: "WeightedMonomial") -> "WeightedMonomial":
        return WeightedMonomial(self.matrix.kron(other.matrix), self.weight_sq * other.weight_sq)


def schwinger_basis(N: int) -> dict[tuple[int, int], WeightedMonomial]:
    """S(rho, j) = Q^rho P^j / sqrt(N), keyed by (rho, j) in row-major order."""
    _check_n(N)
    w = Fraction(1, N)
    return {
        (rho, j): WeightedMonomial(WhGroupElement(N, 0, rho, j).matrix(), w)
        for rho in range(N)
        for j in range(N)
    }


def hs_gram_exact(elements: Sequence[WeightedMonomial]) -> tuple[np.ndarray, np.ndarray, int]:
    """Exact Hilbert-Schmidt Gram data of weighted monomials.

    Returns ``(hist, weight, L)``: ``Tr(A_a A_b^*) = weight[a, b] *
    sum_k hist[a, b, k] w_L^k`` where ``weight[a, b]`` is the rational
    product of the two square-root weights (exact when the squared weights
    agree, which is the case for every basis built here).
    """
    cols, exps, L = stack([e.matrix for e in elements])
    hist = _kernels.trace_histograms(cols, exps, cols, exps, L)
    wsq = [e.weight_sq for e in elements]
    if len(set(wsq)) != 1:
        raise ValueError("mixed weights: Gram entries would be irrational")
    weight = np.full((len(elements), len(elements)), wsq[0], dtype=object)
    return hist, weight, L


def orthonormality_defects(elements: Sequence[WeightedMonomial]) -> tuple[int, tuple[int, int] | None]:
    """Number of pairs violating <A_a, A_b> = delta_ab, and the first such pair.

    All elements must share one squared weight ``1/d`` with d an integer;
    the test is then Tr(A_a A_b^*) = d delta_ab on the monomial parts,
    decided by exact cyclotomic zero testing.
    """
    wsq = {e.weight_sq for e in elements}
    if len(wsq) != 1:
        raise ValueError("orthonormality test needs a common weight")
    inv = 1 / Fraction(wsq.pop())
    if inv.denominator != 1:
        return len(elements), (0, 0)
    cols, exps, L = stack([e.matrix for e in elements])
    expect = np.full(len(elements), inv.numerator, dtype=np.int64)
    count, first = _kernels.gram_defects(cols, exps, L, reduction_matrix(L), expect)
    return int(count), (None if first[0] < 0 else (int(first[0]), int(first[1])))


def gram_is_identity(elements: Sequence[WeightedMonomial]) -> bool:
    """Exact orthonormality test with cyclotomic zero testing only."""
    return orthonormality_defects(elements)[0] == 0


def expand_in_basis(X: np.ndarray, N: int) -> np.ndarray:
    """Coefficients c[rho, j] = Tr(X S(rho, j)^*) of an N x N matrix.

    Reconstruction via :func:`reconstruct` is accurate to roughly
    ``N**2 * eps * max|X|``.
    """
    X = np.asarray(X, dtype=complex)
    if X.shape != (N, N):
        raise ValueError(f"expected a {N}x{N} matrix, got shape {X.shape}")
    r = np.arange(N)
    coeffs = np.empty((N, N), dtype=complex)
    for j in range(N):
        # S(rho, j) has entry w^{rho r}/sqrt(N) at (r, r + j)
        vals = X[r, (r + j) % N]
        coeffs[:, j] = np.fft.fft(vals) / np.sqrt(N)
    return coeffs


def reconstruct(coeffs: np.ndarray, N: int) -> np.ndarray:
    """Inverse of :func:`expand_in_basis`: sum c[rho, j] S(rho, j)."""
    coeffs = np.asarray(coeffs, dtype=complex)
    out = np.zeros((N, N), dtype=complex)
    r = np.arange(N)
    for j in range(N):
        out[r, (r + j) % N] = np.fft.ifft(coeffs[:, j]) * np.sqrt(N)
    return out



def weyl_ray_law_defects(N: int, max_n: int | None = None) -> int:
    """Count pairs violating W(a)W(b) = w^{(rho' j - rho j')/2} W(a + b).

    Checked on exact monomial matrices for all N^2 x N^2 pairs (odd N).
    """
    check_bound(N, max_matrix_n(max_n), "Weyl ray-law N")
    ops = [weyl_operator(N, rho, j) for rho in range(N) for j in range(N)]
    cols = np.stack([w.matrix().cols for w in ops])
    exps = np.stack([w.matrix().exps for w in ops])
    inv2 = (N + 1) // 2
    rho = np.repeat(np.arange(N), N)
    jj = np.tile(np.arange(N), N)
    bad = 0
    for a, wa in enumerate(ops):
        K = len(ops)
        pc, pe = _kernels.batch_product(
            np.broadcast_to(cols[a], (K, N)), np.broadcast_to(exps[a], (K, N)), cols, exps, N
        )
        target = ((wa.rho + rho) % N) * N + (wa.j + jj) % N
        phase = ((rho * wa.j - wa.rho * jj) * inv2) % N
        tc = cols[target]
        te = (exps[target] + phase[:, None]) % N
        bad += int(np.count_nonzero(np.any(pc != tc, axis=1) | np.any(pe != te, axis=1)))
    return bad
