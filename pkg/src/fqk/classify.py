"""Classification of finite quantum kinematics of dimension N, i.e. of the
Abelian groups of order N, by elementary divisors and invariant factors."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import product
from math import prod

from .config import check_bound, max_classify_n
from .numtheory import factorize, partition_count, partitions

__all__ = [
    "AbelianGroupType",
    "InvariantFactorList",
    "enumerate_kinematics",
    "count_kinematics",
    "to_invariant_factors",
    "from_invariant_factors",
    "reduce_product",
    "prime_power_base",
]


def prime_power_base(q: int) -> tuple[int, int] | None:
    """``(p, r)`` with q = p^r, or None if q is not a prime power >= 2."""
    if q < 2:
        return None
    f = factorize(q)
    if len(f.factors) != 1:
        return None
    return f.factors[0]


def _canonical(divisors) -> tuple[int, ...]:
    keyed = []
    for q in divisors:
        base = prime_power_base(int(q))
        if base is None:
            raise ValueError(f"{q} is not a prime power >= 2")
        keyed.append((base[0], -base[1], int(q)))
    return tuple(q for *_, q in sorted(keyed))


@dataclass(frozen=True)
class AbelianGroupType:
    """Isomorphism class of a finite Abelian group, named by its elementary
    divisors sorted by prime, then by descending exponent."""

    elementary_divisors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "elementary_divisors", _canonical(self.elementary_divisors))

    @property
    def order(self) -> int:
        return prod(self.elementary_divisors)

    def by_prime(self) -> dict[int, tuple[int, ...]]:
        """Exponent partition for each prime."""
        out: dict[int, list[int]] = defaultdict(list)
        for q in self.elementary_divisors:
            p, r = prime_power_base(q)
            out[p].append(r)
        return {p: tuple(rs) for p, rs in out.items()}

    def notation(self) -> str:
        """Dotted prime-power notation, e.g. ``2^2.3.3.5``."""
        if not self.elementary_divisors:
            return "1"
        parts = []
        for q in self.elementary_divisors:
            p, r = prime_power_base(q)
            parts.append(f"{p}^{r}" if r > 1 else str(p))
        return ".".join(parts)

    def as_product(self) -> str:
        if not self.elementary_divisors:
            return "Z_1"
        return " x ".join(f"Z_{q}" for q in self.elementary_divisors)

    def __str__(self) -> str:
        return self.notation()


@dataclass(frozen=True)
class InvariantFactorList:
    """n_1 >= n_2 >= ... >= n_s >= 2 with n_{i+1} | n_i."""

    factors: tuple[int, ...]

    def __post_init__(self):
        f = tuple(int(n) for n in self.factors)
        if any(n < 2 for n in f):
            raise ValueError(f"invariant factors must be >= 2, got {f}")
        for a, b in zip(f, f[1:]):
            if a % b:
                raise ValueError(f"divisibility chain broken: {b} does not divide {a}")
        object.__setattr__(self, "factors", f)

    @property
    def order(self) -> int:
        return prod(self.factors)

    def as_product(self) -> str:
        """Ascending product form, e.g. ``Z_2 x Z_90``."""
        if not self.factors:
            return "Z_1"
        return " x ".join(f"Z_{n}" for n in reversed(self.factors))

    def __str__(self) -> str:
        return self.as_product()


def enumerate_kinematics(N: int, max_n: int | None = None) -> list[AbelianGroupType]:
    """All isomorphism types of Abelian groups of order N.

    One partition of r_i is chosen per prime p_i; the first prime's
    partition varies fastest, each in lexicographically decreasing order.

    >>> [t.notation() for t in enumerate_kinematics(180)]
    ['2^2.3^2.5', '2.2.3^2.5', '2^2.3.3.5', '2.2.3.3.5']
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    check_bound(N, max_classify_n(max_n), "classification N")
    fac = factorize(N)
    choices = [[(p, part) for part in partitions(r)] for p, r in fac.factors]
    out = []
    for combo in product(*reversed(choices)):
        divisors = [p**e for p, part in reversed(combo) for e in part]
        out.append(AbelianGroupType(tuple(divisors)))
    return out


def count_kinematics(N: int) -> int:
    """Product of the partition counts of the exponents of N."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return prod(partition_count(r) for r in factorize(N).exponents)


def to_invariant_factors(t: AbelianGroupType) -> InvariantFactorList:
    """Merge, for each rank position, the largest remaining power of each prime."""
    if not isinstance(t, AbelianGroupType):
        raise TypeError("expected an AbelianGroupType")
    per_prime = t.by_prime()
    s = max((len(rs) for rs in per_prime.values()), default=0)
    factors = []
    for i in range(s):
        factors.append(prod(p**rs[i] for p, rs in per_prime.items() if i < len(rs)))
    return InvariantFactorList(tuple(factors))


def from_invariant_factors(l: InvariantFactorList | tuple | list) -> AbelianGroupType:
    if not isinstance(l, InvariantFactorList):
        l = InvariantFactorList(tuple(l))
    return reduce_product(l.factors)


def reduce_product(orders) -> AbelianGroupType:
    """Elementary divisors of Z_{m_1} x ... x Z_{m_k}.

    >>> reduce_product([6, 15]).elementary_divisors
    (2, 3, 3, 5)
    """
    divisors = []
    for m in orders:
        m = int(m)
        if m < 2:
            raise ValueError(f"cyclic orders must be >= 2, got {m}")
        divisors.extend(factorize(m).prime_powers)
    return AbelianGroupType(tuple(divisors))


def is_prime_power(q: int) -> bool:
    return prime_power_base(q) is not None
