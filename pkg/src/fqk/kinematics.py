"""Systems of imprimitivity on finite Abelian configuration groups.

A configuration group Z_{n_1} x ... x Z_{n_s} acts on itself; its elements
are digit tuples linearised row-major (the first factor varies slowest),
which is also the index order of ``np.kron``. With this one convention the
tensor-product and CRT statements below become literal permutation
identities.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import prod

import numpy as np

from . import _kernels
from .checks import Check, require
from .config import check_bound, max_matrix_n
from .monomial import MonomialMatrix, PartialMonomial
from .numtheory import crt_split, mixed_radix_digits, mixed_radix_index
from .pauli import WeightedMonomial, orthonormality_defects, p_matrix, q_matrix, schwinger_basis

__all__ = [
    "ConfigGroup",
    "ImprimitivitySystem",
    "regular_system",
    "position_probability",
    "tensor_system",
    "CrtEquivalence",
    "crt_equivalence",
    "WeylSystem",
    "weyl_system",
    "commutant_dimension",
]

# Exhaustive construction-time verification runs up to this group order.
VERIFY_ORDER = 64


@dataclass(frozen=True)
class ConfigGroup:
    """Z_{n_1} x ... x Z_{n_s} acting on itself by translation."""

    orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        if any(n < 1 for n in orders):
            raise ValueError(f"cyclic orders must be >= 1, got {orders}")
        object.__setattr__(self, "orders", orders)

    @property
    def order(self) -> int:
        return prod(self.orders)

    def index(self, element) -> int:
        if isinstance(element, (int, np.integer)):
            return int(element) % self.order
        if len(element) != len(self.orders):
            raise ValueError(f"expected {len(self.orders)} coordinates, got {element!r}")
        return mixed_radix_index(element, self.orders)

    def element(self, index: int) -> tuple[int, ...]:
        return mixed_radix_digits(index, self.orders)

    def digits(self) -> np.ndarray:
        """(order, s) array of the digit tuples of all elements."""
        if not self.orders:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.meshgrid(*[np.arange(n) for n in self.orders], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)

    def _linear(self, digits: np.ndarray) -> np.ndarray:
        idx = np.zeros(digits.shape[:-1], dtype=np.int64)
        for i, n in enumerate(self.orders):
            idx = idx * n + digits[..., i] % n
        return idx

    def addition_table(self) -> np.ndarray:
        d = self.digits()
        return self._linear(d[:, None, :] + d[None, :, :])

    def negation(self) -> np.ndarray:
        return self._linear(-self.digits())

    def __str__(self) -> str:
        if not self.orders:
            return "trivial"
        return " x ".join(f"Z_{n}" for n in self.orders)


@dataclass(frozen=True, eq=False)
class ImprimitivitySystem:
    """Regular representation U and position PVM E of a configuration group.

    ``u_cols[j]`` and ``u_exps[j]`` hold U(j) as monomial data at ``level``;
    E(rho) is the diagonal matrix unit at ``e_index[rho]``.
    """

    config: ConfigGroup
    u_cols: np.ndarray
    u_exps: np.ndarray
    level: int
    e_index: np.ndarray
    checks: tuple[Check, ...] = field(default=())

    @property
    def dim(self) -> int:
        return self.u_cols.shape[1]

    def U(self, j) -> MonomialMatrix:
        i = self.config.index(j)
        return MonomialMatrix(self.u_cols[i], self.u_exps[i], self.level)

    def E(self, rho) -> PartialMonomial:
        i = self.config.index(rho)
        return PartialMonomial.matrix_unit(self.dim, int(self.e_index[i]), int(self.e_index[i]))

    def verify(self) -> tuple[Check, ...]:
        return verify_system(self)


def _e_stack(system: ImprimitivitySystem) -> tuple[np.ndarray, np.ndarray]:
    n = system.dim
    cols = np.full((len(system.e_index), n), -1, dtype=np.int64)
    cols[np.arange(len(system.e_index)), system.e_index] = system.e_index
    return cols, np.zeros_like(cols)


def verify_system(system: ImprimitivitySystem) -> tuple[Check, ...]:
    """Exhaustive exact checks: homomorphism, PVM axioms, covariance."""
    G = system.config
    n, L = system.dim, system.level
    order = G.order
    add = G.addition_table()
    neg = G.negation()
    uc, ue = system.u_cols, system.u_exps
    ec, ee = _e_stack(system)
    ii, jj = np.meshgrid(np.arange(order), np.arange(order), indexing="ij")
    ii, jj = ii.ravel(), jj.ravel()

    pc, pe = _kernels.batch_product(uc[ii], ue[ii], uc[jj], ue[jj], L)
    s = add[ii, jj]
    hom = int(np.count_nonzero(np.any(pc != uc[s], axis=1) | np.any(pe != ue[s], axis=1)))

    # E(a) E(b) = delta_ab E(a)
    qc, qe = _kernels.batch_product(ec[ii], ee[ii], ec[jj], ee[jj], L)
    expect = np.where((ii == jj)[:, None], ec[ii], -1)
    idem = int(np.count_nonzero(np.any(qc != expect, axis=1)))
    cover = np.bincount(system.e_index, minlength=n)
    complete = bool(np.all(cover == 1))

    # U(j) E(rho) U(j)^{-1} = E(rho - j); U(j)^{-1} = U(-j) for the regular representation
    j_idx, r_idx = ii, jj
    ac, ae = _kernels.batch_product(uc[j_idx], ue[j_idx], ec[r_idx], ee[r_idx], L)
    inv = neg[j_idx]
    bc, be = _kernels.batch_product(ac, ae, uc[inv], ue[inv], L)
    target = add[r_idx, neg[j_idx]]
    cov = int(np.count_nonzero(np.any(bc != ec[target], axis=1) | np.any(be != ee[target], axis=1)))

    total = order * order
    return (
        Check("homomorphism U(j)U(j')=U(j+j')", hom == 0, total, f"{hom} failures" if hom else ""),
        Check("PVM E(a)E(b)=delta_ab E(a)", idem == 0, total, f"{idem} failures" if idem else ""),
        Check("PVM sum_rho E(rho)=I", complete, order),
        Check("covariance U(j)E(rho)U(j)^-1=E(rho-j)", cov == 0, total, f"{cov} failures" if cov else ""),
    )


def regular_system(config: ConfigGroup | tuple | list, max_order: int | None = None, verify: bool = True) -> ImprimitivitySystem:
    """Right regular representation (U(j))_{rho, sigma} = delta_{rho + j, sigma}
    with the canonical position measure."""
    if not isinstance(config, ConfigGroup):
        config = ConfigGroup(tuple(config))
    check_bound(config.order, max_matrix_n(max_order), "configuration group order")
    add = config.addition_table()
    # row rho of U(j) has its 1 in column rho + j
    u_cols = np.ascontiguousarray(add.T)
    system = ImprimitivitySystem(config, u_cols, np.zeros_like(u_cols), 1, np.arange(config.order, dtype=np.int64))
    return _finish(system, verify)


def _finish(system: ImprimitivitySystem, verify: bool) -> ImprimitivitySystem:
    if verify and system.config.order <= VERIFY_ORDER:
        checks = verify_system(system)
        require(checks)
        object.__setattr__(system, "checks", checks)
    return system


def position_probability(system: ImprimitivitySystem, psi, rho, atol: float = 1e-9) -> float:
    """(psi, E(rho) psi) = |psi_rho|^2 for a normalised state."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (system.dim,):
        raise ValueError(f"state must have length {system.dim}")
    norm = float(np.vdot(psi, psi).real)
    if abs(norm - 1.0) > atol:
        raise ValueError(f"state is not normalised: (psi, psi) = {norm}")
    i = int(system.e_index[system.config.index(rho)])
    return float(abs(psi[i]) ** 2)


def tensor_system(a: ImprimitivitySystem, b: ImprimitivitySystem, max_order: int | None = None, verify: bool = True) -> ImprimitivitySystem:
    """System on the direct product group with U = U_a (x) U_b, E = E_a (x) E_b."""
    config = ConfigGroup(a.config.orders + b.config.orders)
    check_bound(config.order, max_matrix_n(max_order), "configuration group order")
    L = a.level * b.level // np.gcd(a.level, b.level)
    nb = b.dim
    u_cols = (a.u_cols[:, None, :, None] * nb + b.u_cols[None, :, None, :]).reshape(config.order, a.dim * nb)
    u_exps = (a.u_exps[:, None, :, None] * (L // a.level) + b.u_exps[None, :, None, :] * (L // b.level)) % L
    u_exps = u_exps.reshape(config.order, a.dim * nb)
    e_index = (a.e_index[:, None] * nb + b.e_index[None, :]).ravel()
    system = ImprimitivitySystem(config, u_cols, u_exps, int(L), e_index)
    return _finish(system, verify)


def tensor_systems(systems, max_order: int | None = None, verify: bool = True) -> ImprimitivitySystem:
    systems = list(systems)
    out = systems[0]
    for s in systems[1:]:
        out = tensor_system(out, s, max_order=max_order, verify=verify)
    return out


@dataclass(frozen=True, eq=False)
class CrtEquivalence:
    """Permutation witness T for Z_N ~ Z_{N_1} x ... x Z_{N_f}.

    ``images[x]`` is the tensor-product index of the residue tuple of x;
    T has a 1 at ``(images[x], x)``. ``q_exponents[k]`` is the power c_k
    with T Q_N T^{-1} = Q_{N_1}^{c_1} (x) ... (x) Q_{N_f}^{c_f}.
    """

    N: int
    moduli: tuple[int, ...]
    images: np.ndarray
    T: MonomialMatrix
    q_exponents: tuple[int, ...]
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def cycles(self) -> list[tuple[int, ...]]:
        """Cycle decomposition of x -> images[x], fixed points omitted."""
        seen = np.zeros(self.N, dtype=bool)
        out = []
        for start in range(self.N):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            x = int(self.images[start])
            while x != start:
                cyc.append(x)
                seen[x] = True
                x = int(self.images[x])
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_notation(self) -> str:
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) if cyc else "()"


def _kron_all(mats):
    out = mats[0]
    for m in mats[1:]:
        out = out.kron(m)
    return out


def crt_equivalence(N: int, max_n: int | None = None) -> CrtEquivalence:
    """Conjugate the Z_N kinematics onto the tensor product of its
    prime-power factors and certify the identities exactly for every j, rho."""
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    check_bound(N, max_matrix_n(max_n), "N")
    split = crt_split(N)
    moduli = split.moduli
    x = np.arange(N)
    images = np.zeros(N, dtype=np.int64)
    for m in moduli:
        images = images * m + x % m
    # T e_x = e_{images[x]}: row images[x] has its 1 in column x
    cols = np.empty(N, dtype=np.int64)
    cols[images] = x
    T = MonomialMatrix(cols)
    Tinv = T.adjoint()

    single = regular_system(ConfigGroup((N,)), max_order=N)
    factors = [regular_system(ConfigGroup((m,)), max_order=m) for m in moduli]
    prod_sys = tensor_systems(factors) if len(factors) > 1 else factors[0]

    def conj_batch(cols_, exps_, level):
        K = cols_.shape[0]
        tc = np.broadcast_to(T.cols, (K, N))
        z = np.zeros((K, N), dtype=np.int64)
        ic = np.broadcast_to(Tinv.cols, (K, N))
        ac, ae = _kernels.batch_product(tc, z, cols_, exps_, level)
        return _kernels.batch_product(ac, ae, ic, z, level)

    # U: T U_N(j) T^-1 = (x)_k U_{N_k}(j mod N_k); tensor index of j is images[j]
    uc, ue = conj_batch(single.u_cols, single.u_exps, 1)
    u_bad = int(np.count_nonzero(np.any(uc != prod_sys.u_cols[images], axis=1)))
    ec, ee = _e_stack(single)
    pc, pe = conj_batch(ec, ee, 1)
    pec, _ = _e_stack(prod_sys)
    e_bad = int(np.count_nonzero(np.any(pc != pec[images], axis=1)))

    q_exps = tuple(pow(N // m, -1, m) for m in moduli)
    q = q_matrix(N)
    lhs = q.conjugate_by(T)
    rhs = _kron_all([q_matrix(m) ** c for m, c in zip(moduli, q_exps)])
    p = p_matrix(N)
    p_lhs = p.conjugate_by(T)
    p_rhs = _kron_all([p_matrix(m) for m in moduli])
    checks = (
        Check("T U_N(j) T^-1 = (x)_k U_Nk(j mod N_k)", u_bad == 0, N, f"{u_bad} failures" if u_bad else ""),
        Check("T E_N(rho) T^-1 = (x)_k E_Nk(rho mod N_k)", e_bad == 0, N, f"{e_bad} failures" if e_bad else ""),
        Check("T P_N T^-1 = (x)_k P_Nk", p_lhs == p_rhs, 1),
        Check("T Q_N T^-1 = (x)_k Q_Nk^c_k", lhs == rhs, 1),
    )
    return CrtEquivalence(N, moduli, images, T, q_exps, checks)


@dataclass(frozen=True, eq=False)
class WeylSystem:
    """Tensor Weyl system: labels[i] holds one (rho, j) pair per factor."""

    config: ConfigGroup
    labels: tuple[tuple[tuple[int, int], ...], ...]
    operators: tuple[WeightedMonomial, ...]
    checks: tuple[Check, ...]

    def __len__(self) -> int:
        return len(self.operators)


def weyl_system(config: ConfigGroup | tuple | list, max_order: int | None = None, certify: bool = True) -> WeylSystem:
    """All prod(n_i^2) Kronecker products of per-factor S(rho, j)."""
    if not isinstance(config, ConfigGroup):
        config = ConfigGroup(tuple(config))
    check_bound(config.order, max_matrix_n(max_order), "configuration group order")
    if not config.orders:
        one = WeightedMonomial(MonomialMatrix.identity(1), Fraction(1))
        return WeylSystem(config, ((),), (one,), ())
    bases = [schwinger_basis(n) for n in config.orders]
    labels, ops = [], []
    for combo in product(*[list(b.items()) for b in bases]):
        labels.append(tuple(lbl for lbl, _ in combo))
        op = combo[0][1]
        for _, o in combo[1:]:
            op = op.kron(o)
        ops.append(op)
    checks: tuple[Check, ...] = ()
    if certify:
        bad, first = orthonormality_defects(ops)
        checks = (Check("Hilbert-Schmidt orthonormality", bad == 0, len(ops) ** 2, f"first bad pair {first}" if bad else ""),)
        require(checks)
    return WeylSystem(config, tuple(labels), tuple(ops), checks)


def commutant_dimension(system: ImprimitivitySystem, tol: float = 1e-8) -> int:
    """Dimension of {X : X A = A X for all U(generators), E(rho)}.

    Numerical: singular values below ``tol * max(1, s_max)`` count as zero.
    Dimension 1 certifies irreducibility.
    """
    n = system.dim
    gens = []
    for i, m in enumerate(system.config.orders):
        if m > 1:
            unit = [0] * len(system.config.orders)
            unit[i] = 1
            gens.append(system.U(tuple(unit)).to_dense())
    gens += [system.E(r).to_dense() for r in range(system.config.order)]
    eye = np.eye(n)
    # row-major vec: vec(A X - X A) = (A kron I - I kron A^T) vec(X)
    blocks = [np.kron(A, eye) - np.kron(eye, A.T) for A in gens]
    if not blocks:
        return n * n
    M = np.vstack(blocks)
    s = np.linalg.svd(M, compute_uv=False)
    cutoff = tol * max(1.0, float(s[0]) if len(s) else 1.0)
    return int(n * n - np.count_nonzero(s > cutoff))
