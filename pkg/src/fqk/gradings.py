"""MAD-groups of inner automorphisms of M_N(C) and the fine gradings they
induce.

Every MAD-group is conjugate to a unique ``P_{N_1} x ... x P_{N_f} x D(m)``
with prime powers N_i and ``N_1 ... N_f m = N``. The Pauli factors grade
M_{N_i}(C) into one-dimensional pieces spanned by Q^a P^b; D(m) grades
M_m(C) into its diagonal plus the root spaces spanned by matrix units.
Gradings built here carry exact monomial bases and are certified without
tolerances; :func:`joint_eigenspaces` is the independent numerical route.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import prod
from typing import Hashable, Sequence

import numpy as np

from . import _kernels
from .checks import Check
from .classify import enumerate_kinematics, prime_power_base
from .config import FqkError, VerificationError, _env_int, check_bound, max_matrix_n
from .cyclotomic import reduction_matrix
from .monomial import MonomialMatrix, PartialMonomial, stack
from .numtheory import is_probable_prime
from .pauli import WhGroupElement, p_matrix, q_matrix

__all__ = [
    "MadGroupDescriptor",
    "parse_descriptor",
    "enumerate_mad_groups",
    "InnerAutomorphism",
    "mad_of_pauli_group",
    "mad_generators",
    "generic_diagonal",
    "Grading",
    "build_grading",
    "ClosureTable",
    "GradingClosureError",
    "NumericalSeparationError",
    "verify_grading_closure",
    "certify_grading",
    "joint_eigenspaces",
    "match_gradings",
]

DEFAULT_MAX_SUBSPACES = 4096
EIGEN_TOL = 1e-8
# Distinct eigenvalue clusters closer than this (relative) are reported as unresolved.
SEPARATION_TOL = 1e-6


class GradingClosureError(FqkError):
    """A product of two graded pieces does not land in a single piece."""

    def __init__(self, alpha, beta, product_matrix, message=""):
        self.alpha = alpha
        self.beta = beta
        self.product = product_matrix
        super().__init__(message or f"product of subspaces {alpha!r} and {beta!r} lies in no single subspace")


class NumericalSeparationError(FqkError):
    """Eigenvalue clusters too close to separate reliably."""


# -- descriptors -------------------------------------------------------------

@dataclass(frozen=True)
class MadGroupDescriptor:
    """``P_{N_1} x ... x P_{N_f} x D(m)``; Pauli factors sorted descending."""

    pauli_factors: tuple[int, ...]
    m: int

    def __post_init__(self):
        factors = tuple(sorted((int(q) for q in self.pauli_factors), reverse=True))
        for q in factors:
            if prime_power_base(q) is None:
                raise ValueError(f"Pauli factor {q} is not a prime power >= 2")
        if int(self.m) < 1:
            raise ValueError(f"diagonal size must be >= 1, got {self.m}")
        object.__setattr__(self, "pauli_factors", factors)
        object.__setattr__(self, "m", int(self.m))

    @property
    def N(self) -> int:
        return prod(self.pauli_factors) * self.m

    @property
    def is_pure_pauli(self) -> bool:
        return self.m == 1

    def name(self, sep: str = " x ") -> str:
        return sep.join([f"P_{q}" for q in self.pauli_factors] + [f"D({self.m})"])

    def spec_string(self) -> str:
        return ",".join([str(q) for q in self.pauli_factors] + [f"m={self.m}"])

    def __str__(self) -> str:
        return self.name()


_DESC_TOKEN = re.compile(r"^\s*(?:m\s*=\s*(\d+)|(\d+))\s*$")


def parse_descriptor(text: str, N: int | None = None) -> MadGroupDescriptor:
    """Parse ``"2,2,m=1"``-style strings; ``m`` defaults to 1.

    When N is given the product constraint ``N_1 ... N_f m = N`` is
    enforced.
    """
    factors, m = [], None
    tokens = [t for t in text.split(",") if t.strip()]
    if not tokens:
        raise ValueError("empty descriptor")
    for tok in tokens:
        mt = _DESC_TOKEN.match(tok)
        if not mt:
            raise ValueError(f"bad descriptor token {tok.strip()!r}")
        if mt.group(1) is not None:
            if m is not None:
                raise ValueError("m given twice")
            m = int(mt.group(1))
        else:
            q = int(mt.group(2))
            if prime_power_base(q) is None:
                raise ValueError(f"Pauli factor {q} is not a prime power >= 2")
            factors.append(q)
    d = MadGroupDescriptor(tuple(factors), 1 if m is None else m)
    if N is not None and d.N != N:
        raise ValueError(f"product constraint violated: {' * '.join(map(str, d.pauli_factors + (d.m,)))} = {d.N} != N = {N}")
    return d


def enumerate_mad_groups(N: int) -> list[MadGroupDescriptor]:
    """One descriptor per conjugacy class of MAD-groups in Inn(M_N(C)).

    Ordered by ascending m, then by Pauli factor lists in lexicographically
    decreasing order.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    out = []
    for m in range(1, N + 1):
        if N % m:
            continue
        pauli = [tuple(sorted(t.elementary_divisors, reverse=True)) for t in enumerate_kinematics(N // m)]
        for factors in sorted(pauli, reverse=True):
            out.append(MadGroupDescriptor(factors, m))
    return out


# -- inner automorphisms -------------------------------------------------------

class InnerAutomorphism:
    """Ad_M(X) = M X M^{-1}, with M exact-monomial or dense."""

    __slots__ = ("matrix", "label")

    def __init__(self, matrix, label: Hashable = None):
        if isinstance(matrix, PartialMonomial):
            if not isinstance(matrix, MonomialMatrix):
                matrix = MonomialMatrix(matrix.cols, matrix.exps, matrix.level)
        else:
            matrix = np.asarray(matrix, dtype=complex)
            if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
                raise ValueError("representative must be square")
        self.matrix = matrix
        self.label = label

    @property
    def exact(self) -> bool:
        return isinstance(self.matrix, MonomialMatrix)

    @property
    def dim(self) -> int:
        return self.matrix.dim if self.exact else self.matrix.shape[0]

    @property
    def dense(self) -> np.ndarray:
        return self.matrix.to_dense() if self.exact else self.matrix

    def __call__(self, X):
        if self.exact and isinstance(X, PartialMonomial):
            return self.matrix @ X @ self.matrix.inverse()
        M = self.dense
        return M @ np.asarray(X) @ np.linalg.inv(M)

    def superoperator(self) -> np.ndarray:
        """Matrix of Ad_M on row-major vec(X): M kron M^{-T}."""
        M = self.dense
        return np.kron(M, np.linalg.inv(M).T)

    def compose(self, other: "InnerAutomorphism") -> "InnerAutomorphism":
        """Ad_M Ad_N = Ad_{MN}."""
        if self.exact and other.exact:
            return InnerAutomorphism(self.matrix @ other.matrix)
        return InnerAutomorphism(self.dense @ other.dense)

    __matmul__ = compose

    def inverse(self) -> "InnerAutomorphism":
        """(Ad_M)^{-1} = Ad_{M^{-1}}."""
        if self.exact:
            return InnerAutomorphism(self.matrix.inverse())
        return InnerAutomorphism(np.linalg.inv(self.matrix))

    def __pow__(self, k: int) -> "InnerAutomorphism":
        if self.exact:
            return InnerAutomorphism(self.matrix**k)
        return InnerAutomorphism(np.linalg.matrix_power(self.matrix, k))

    def same_as(self, other: "InnerAutomorphism", tol: float = 1e-10) -> bool:
        """Ad_M = Ad_N iff M = alpha N for a nonzero scalar alpha."""
        if self.exact and other.exact:
            return self.matrix.projective_ratio(other.matrix) is not None
        A, B = self.dense, other.dense
        i, j = np.unravel_index(np.argmax(np.abs(B)), B.shape)
        if abs(A[i, j]) < tol:
            return False
        alpha = A[i, j] / B[i, j]
        return bool(np.linalg.norm(A - alpha * B) <= tol * max(1.0, np.linalg.norm(A)))

    def is_identity(self, tol: float = 1e-10) -> bool:
        if self.exact:
            return self.same_as(InnerAutomorphism(MonomialMatrix.identity(self.dim)))
        return self.same_as(InnerAutomorphism(np.eye(self.dim)), tol)

    def commutes_with(self, other: "InnerAutomorphism", tol: float = 1e-10) -> bool:
        return (self @ other).same_as(other @ self, tol)

    def __repr__(self) -> str:
        kind = "monomial" if self.exact else "dense"
        return f"InnerAutomorphism({kind}, dim={self.dim}, label={self.label!r})"


def mad_of_pauli_group(N: int) -> list[InnerAutomorphism]:
    """The N^2 automorphisms Ad_{Q^i P^j}, ordered by (i, j).

    Certifies that the N^2 representatives are projectively distinct and
    that Ad_Q, Ad_P are commuting elements of order exactly N. Together
    these make the group Z_N x Z_N.
    """
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    check_bound(N, max_matrix_n(), "N")
    autos = [InnerAutomorphism(WhGroupElement(N, 0, i, j).matrix(), (i, j)) for i in range(N) for j in range(N)]
    # projective normal form: cols plus exponents shifted so that row 0 has phase 1
    keys = set()
    for a in autos:
        m = a.matrix
        keys.add((m.cols.tobytes(), ((m.exps - m.exps[0]) % m.level).tobytes()))
    AdQ, AdP = InnerAutomorphism(q_matrix(N)), InnerAutomorphism(p_matrix(N))
    order_ok = all(
        (g**k).is_identity() == (k == N) for g in (AdQ, AdP) for k in range(1, N + 1)
    )
    checks = [len(keys) == N * N, AdQ.commutes_with(AdP), order_ok]
    if not all(checks):
        raise VerificationError(f"Pauli MAD-group structure check failed for N={N}: {checks}")
    return autos


def generic_diagonal(m: int) -> InnerAutomorphism:
    """Ad_D with D = diag of the first m primes.

    The ratios d_i/d_j (i != j) are pairwise distinct and differ from 1, so
    the eigenspaces of Ad_D are exactly the diagonal and the root spaces.
    """
    primes = []
    c = 2
    while len(primes) < m:
        if is_probable_prime(c):
            primes.append(c)
        c += 1
    ratios = [Fraction(a, b) for a in primes for b in primes if a != b]
    assert len(set(ratios)) == len(ratios) and Fraction(1) not in ratios, "diagonal is not generic"
    return InnerAutomorphism(np.diag(np.array(primes, dtype=complex)), ("D", m))


def mad_generators(d: MadGroupDescriptor) -> list[InnerAutomorphism]:
    """Generators of the canonical MAD-group for ``d``: Ad_Q and Ad_P of each
    Pauli factor, and a generic diagonal for D(m) (when m > 1)."""
    sizes = list(d.pauli_factors) + [d.m]
    gens = []

    def lift(i, mat):
        out = np.eye(1, dtype=complex)
        for k, n in enumerate(sizes):
            out = np.kron(out, mat if k == i else np.eye(n))
        return out

    for i, q in enumerate(d.pauli_factors):
        gens.append(InnerAutomorphism(lift(i, q_matrix(q).to_dense()), ("Q", i)))
        gens.append(InnerAutomorphism(lift(i, p_matrix(q).to_dense()), ("P", i)))
    if d.m > 1:
        gens.append(InnerAutomorphism(lift(len(sizes) - 1, generic_diagonal(d.m).dense), ("D", d.m)))
    if not gens:
        gens.append(InnerAutomorphism(np.eye(1, dtype=complex), "I"))
    return gens


# -- gradings ----------------------------------------------------------------

@dataclass(eq=False)
class Grading:
    """Direct-sum decomposition of M_N(C) into labelled subspaces.

    ``bases[i]`` spans the subspace ``labels[i]``: exact partial monomials
    for constructed gradings, dense matrices for numerically computed ones.
    """

    N: int
    labels: list
    bases: list
    descriptor: MadGroupDescriptor | None = None
    checks: tuple[Check, ...] = field(default=())

    @property
    def exact(self) -> bool:
        return all(isinstance(b, PartialMonomial) for basis in self.bases for b in basis)

    @property
    def dims(self) -> list[int]:
        return [len(b) for b in self.bases]

    def __len__(self) -> int:
        return len(self.bases)

    def index_of(self, label) -> int:
        return self.labels.index(label)

    def dense_basis(self, i: int) -> list[np.ndarray]:
        return [b.to_dense() if isinstance(b, PartialMonomial) else np.asarray(b) for b in self.bases[i]]

    def projector(self, i: int) -> np.ndarray:
        """Orthogonal projector onto subspace i in row-major vec coordinates."""
        V = np.stack([b.ravel() for b in self.dense_basis(i)], axis=1)
        Qm, _ = np.linalg.qr(V)
        return Qm @ Qm.conj().T

    def label_str(self, i: int) -> str:
        return format_label(self.labels[i])


def format_label(label) -> str:
    if isinstance(label, tuple) and label and all(isinstance(x, (tuple, str)) for x in label):
        return " x ".join(format_label(x) for x in label)
    if isinstance(label, tuple):
        return "(" + ",".join(format_label(x) for x in label) + ")"
    if isinstance(label, (complex, np.complexfloating)):
        return f"{label.real:+.6f}{label.imag:+.6f}i"
    return str(label)


def _pauli_pieces(q: int):
    return [((a, b), [WhGroupElement(q, 0, a, b).matrix()]) for a in range(q) for b in range(q)]


def _cartan_pieces(m: int):
    pieces = [("diag", [PartialMonomial.matrix_unit(m, i, i) for i in range(m)])]
    pieces += [((i, j), [PartialMonomial.matrix_unit(m, i, j)]) for i in range(m) for j in range(m) if i != j]
    return pieces


def _kron_list(mats):
    out = mats[0]
    for x in mats[1:]:
        out = out.kron(x)
    return out


def max_subspaces(override: int | None = None) -> int:
    return override if override is not None else _env_int("FQK_MAX_SUBSPACES", DEFAULT_MAX_SUBSPACES)


def build_grading(d: MadGroupDescriptor, max_n: int | None = None, certify: bool = True) -> Grading:
    """Fine grading induced by the MAD-group ``d`` as the tensor-product
    refinement of its factor gradings (Pauli factors first, D(m) last)."""
    check_bound(d.N, max_matrix_n(max_n), "grading N")
    n_sub = prod(q * q for q in d.pauli_factors) * (d.m * (d.m - 1) + 1)
    check_bound(n_sub, max_subspaces(), "subspace count")
    factor_pieces = [_pauli_pieces(q) for q in d.pauli_factors] + [_cartan_pieces(d.m)]
    labels, bases = [], []
    for combo in product(*factor_pieces):
        labels.append(tuple(lbl for lbl, _ in combo))
        bases.append([_kron_list(list(mats)) for mats in product(*[b for _, b in combo])])
    g = Grading(d.N, labels, bases, d)
    if certify:
        g.checks = certify_grading(g)
        failed = [c for c in g.checks if not c.passed]
        if failed:
                raise VerificationError(f"grading {d} failed: {failed[0].name} ({failed[0].detail})")
    return g


# -- exact closure -----------------------------------------------------------

@dataclass
class ClosureTable:
    """``table[(alpha, beta)]`` is gamma with A_alpha A_beta in A_gamma, or
    None when every product of the two pieces vanishes."""

    grading: Grading
    index: np.ndarray

    def __getitem__(self, key):
        a, b = key
        ia = a if isinstance(a, int) else self.grading.index_of(a)
        ib = b if isinstance(b, int) else self.grading.index_of(b)
        g = int(self.index[ia, ib])
        return None if g < 0 else self.grading.labels[g]

    @property
    def size(self) -> int:
        return self.index.size

    @property
    def zero_products(self) -> int:
        return int(np.count_nonzero(self.index == -1))

    def as_dict(self) -> dict:
        labels = self.grading.labels
        S = len(labels)
        return {(labels[a], labels[b]): (None if self.index[a, b] < 0 else labels[self.index[a, b]]) for a in range(S) for b in range(S)}


def _closure_inputs(g: Grading):
    flat, sub_of = [], []
    sub_ptr = [0]
    for s, basis in enumerate(g.bases):
        flat.extend(basis)
        sub_of.extend([s] * len(basis))
        sub_ptr.append(len(flat))
    cols, exps, L = stack(flat)
    K, n = cols.shape
    rows = np.broadcast_to(np.arange(n), (K, n))
    live = cols >= 0
    pos = (rows * n + cols)[live]
    elem = np.broadcast_to(np.arange(K)[:, None], (K, n))[live]
    order = np.argsort(pos, kind="stable")
    pos_elems = elem[order].astype(np.int64)
    pos_ptr = np.zeros(n * n + 1, dtype=np.int64)
    np.add.at(pos_ptr, pos[order] + 1, 1)
    pos_ptr = np.cumsum(pos_ptr)
    sub_of = np.asarray(sub_of, dtype=np.int64)
    # supports within a subspace must be disjoint
    pairs = sub_of[pos_elems]
    for p in range(n * n):
        seg = pairs[pos_ptr[p]:pos_ptr[p + 1]]
        if len(seg) != len(np.unique(seg)):
            raise ValueError("basis elements of one subspace overlap; exact membership test needs disjoint supports")
    support = np.count_nonzero(live, axis=1).astype(np.int64)
    return (
        np.ascontiguousarray(cols),
        np.ascontiguousarray(exps),
        sub_of,
        np.asarray(sub_ptr, dtype=np.int64),
        np.arange(K, dtype=np.int64),
        pos_ptr,
        pos_elems,
        support,
        L,
        flat,
    )


def verify_grading_closure(g: Grading, tol: float = EIGEN_TOL) -> ClosureTable:
    """Check x in A_alpha, y in A_beta => xy in A_gamma for a single gamma.

    Exact for monomial gradings; numerical (residual below ``tol``) for
    dense ones. Raises :class:`GradingClosureError` naming the offending pair.
    """
    if not g.exact:
        return _closure_numeric(g, tol)
    cols, exps, sub_of, sub_ptr, sub_elems, pos_ptr, pos_elems, support, L, flat = _closure_inputs(g)
    table, bad = _kernels.closure_table(cols, exps, sub_of, sub_ptr, sub_elems, pos_ptr, pos_elems, support, L)
    if bad[0] >= 0:
        a, b, x, y = (int(v) for v in bad)
        prod_ = flat[x] @ flat[y]
        raise GradingClosureError(
            g.labels[a], g.labels[b], prod_,
            f"product of basis elements of {format_label(g.labels[a])} and {format_label(g.labels[b])} lies in no single subspace",
        )
    return ClosureTable(g, table)


def _closure_numeric(g: Grading, tol: float) -> ClosureTable:
    S = len(g)
    projs = [g.projector(i) for i in range(S)]
    dense = [g.dense_basis(i) for i in range(S)]
    table = np.full((S, S), -1, dtype=np.int64)
    for a in range(S):
        for b in range(S):
            gamma = -1
            for x in dense[a]:
                for y in dense[b]:
                    v = (x @ y).ravel()
                    nv = np.linalg.norm(v)
                    if nv <= tol:
                        continue
                    hits = [c for c in range(S) if np.linalg.norm(v - projs[c] @ v) <= tol * nv]
                    if len(hits) != 1 or (gamma >= 0 and hits[0] != gamma):
                        raise GradingClosureError(g.labels[a], g.labels[b], x @ y)
                    gamma = hits[0]
            table[a, b] = gamma
    return ClosureTable(g, table)


def certify_grading(g: Grading) -> tuple[Check, ...]:
    """Dimension sum, exact linear independence, closure."""
    dim_sum = sum(g.dims)
    checks = [Check("dimension sum = N^2", dim_sum == g.N * g.N, dim_sum)]
    flat = [b for basis in g.bases for b in basis]
    cols, exps, L = stack(flat)
    expect = np.count_nonzero(cols >= 0, axis=1).astype(np.int64)
    nonzero = bool(np.all(expect > 0))
    bad, first = _kernels.gram_defects(cols, exps, L, reduction_matrix(L), expect)
    # nonzero, pairwise Hilbert-Schmidt orthogonal elements are linearly independent
    checks.append(Check("linear independence (exact orthogonality)", nonzero and bad == 0, len(flat),
                        f"first non-orthogonal pair {tuple(int(v) for v in first)}" if bad else ""))
    try:
        table = verify_grading_closure(g)
        checks.append(Check("closure A_a A_b in A_c", True, table.size))
    except GradingClosureError as exc:
        checks.append(Check("closure A_a A_b in A_c", False, len(g) ** 2, str(exc)))
    return tuple(checks)


# -- numerical joint eigenspaces ---------------------------------------------

def _cluster(values: np.ndarray, tol: float) -> list[np.ndarray]:
    scale = max(1.0, float(np.max(np.abs(values)))) if len(values) else 1.0
    remaining = list(range(len(values)))
    clusters = []
    while remaining:
        seed = remaining.pop(0)
        members = [seed]
        changed = True
        while changed:
            changed = False
            for i in list(remaining):
                if np.min(np.abs(values[members] - values[i])) <= tol * scale:
                    members.append(i)
                    remaining.remove(i)
                    changed = True
        clusters.append(np.array(members))
    centers = [values[c].mean() for c in clusters]
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            gap = abs(centers[i] - centers[j])
            if gap <= SEPARATION_TOL * scale:
                raise NumericalSeparationError(
                    f"eigenvalues {centers[i]:.3e} and {centers[j]:.3e} are {gap:.1e} apart; "
                    f"cannot separate clusters at tolerance {tol:g}"
                )
    return clusters


def _eigenspaces(A: np.ndarray, tol: float) -> list[tuple[complex, np.ndarray]]:
    d = A.shape[0]
    vals = np.linalg.eigvals(A)
    out = []
    total = 0
    for members in _cluster(vals, tol):
        lam = complex(vals[members].mean())
        _, s, vh = np.linalg.svd(A - lam * np.eye(d))
        k = len(members)
        cut = np.sqrt(tol) * max(1.0, float(s[0]))
        if s[d - k] > cut or (d > k and s[d - k - 1] <= cut):
            raise NumericalSeparationError(
                f"eigenvalue {lam:.6g} has algebraic multiplicity {k} "
                f"but the null space of A - lam I is not {k}-dimensional at tolerance {cut:.1e}"
            )
        null = vh[d - k:].conj().T
        total += null.shape[1]
        out.append((lam, null))
    assert total == d
    return out


def joint_eigenspaces(generators: Sequence[InnerAutomorphism], tol: float = EIGEN_TOL) -> Grading:
    """Simultaneous eigenspaces of commuting inner automorphisms.

    Refines the whole algebra generator by generator: the restriction of the
    next Ad to each current block is diagonalised and the block split by
    eigenvalue. Eigenvalues within ``tol`` (relative) are merged; distinct
    clusters closer than ``SEPARATION_TOL`` raise
    :class:`NumericalSeparationError`. Labels are tuples of eigenvalues
    rounded to 10 digits, one per generator.
    """
    gens = list(generators)
    if not gens:
        raise ValueError("need at least one generator")
    N = gens[0].dim
    if any(g.dim != N for g in gens):
        raise ValueError("generators act on different dimensions")
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not gens[i].commutes_with(gens[j], tol=1e-9):
                raise ValueError(f"generators {i} and {j} do not commute as automorphisms")
    blocks = [((), np.eye(N * N, dtype=complex))]
    for g in gens:
        S = g.superoperator()
        new = []
        for label, V in blocks:
            A = V.conj().T @ S @ V
            for lam, W in _eigenspaces(A, tol):
                Qm, _ = np.linalg.qr(V @ W)
                lam_r = complex(round(lam.real, 10) + 0.0, round(lam.imag, 10) + 0.0)
                new.append((label + (lam_r,), Qm))
        blocks = new
    blocks.sort(key=lambda b: tuple((round(float(np.angle(z)), 8), round(abs(z), 8)) for z in b[0]))
    labels = [b[0] for b in blocks]
    bases = [[b[1][:, k].reshape(N, N) for k in range(b[1].shape[1])] for b in blocks]
    return Grading(N, labels, bases)


def match_gradings(a: Grading, b: Grading) -> tuple[list[tuple[int, int]], float]:
    """Pair subspaces of two gradings by minimal projector distance.

    Returns the pairing ``(i in a, j in b)`` and the largest spectral-norm
    distance between paired projectors; raises ValueError when the
    subspace counts or dimension profiles differ.
    """
    if a.N != b.N or len(a) != len(b) or sorted(a.dims) != sorted(b.dims):
        raise ValueError("gradings have different shapes")
    pa = [a.projector(i) for i in range(len(a))]
    pb = [b.projector(j) for j in range(len(b))]
    used = set()
    pairs = []
    worst = 0.0
    for i, P in enumerate(pa):
        best, best_j = np.inf, -1
        for j, R in enumerate(pb):
            if j in used or a.dims[i] != b.dims[j]:
                continue
            dist = float(np.linalg.norm(P - R, 2))
            if dist < best:
                best, best_j = dist, j
        used.add(best_j)
        pairs.append((i, best_j))
        worst = max(worst, best)
    return pairs, worst
