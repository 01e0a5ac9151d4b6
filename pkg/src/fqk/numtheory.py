"""Integer arithmetic underlying the classification.

Factorizations feed the partition counts of their exponents; the
Chinese-remainder split of Z_n lives here as well."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod
from typing import Iterator

# Deterministic Miller-Rabin witnesses, valid for n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_TRIAL_LIMIT = 10**4


@dataclass(frozen=True)
class Factorization:
    """Canonical prime factorization ``n = prod(p**r for p, r in factors)``."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise ValueError("primes must be strictly increasing")
        if any(r < 1 for _, r in self.factors):
            raise ValueError("exponents must be positive")
        if prod(p**r for p, r in self.factors) != self.n:
            raise ValueError(f"factors do not multiply to {self.n}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(r for _, r in self.factors)

    @property
    def prime_powers(self) -> tuple[int, ...]:
        return tuple(p**r for p, r in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return ".".join(f"{p}^{r}" if r > 1 else str(p) for p, r in self.factors)


def is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for every n below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return d
        c += 1


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_probable_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_rho(n)
    _split(d, out)
    _split(n // d, out)


def factorize(n: int) -> Factorization:
    """Factor ``n`` by trial division, finishing large cofactors with
    Miller-Rabin and Pollard rho.

    >>> factorize(180).factors
    ((2, 2), (3, 2), (5, 1))
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"expected an int, got {type(n).__name__}")
    if n < 1:
        raise ValueError(f"cannot factor {n}; n must be >= 1")
    counts: dict[int, int] = {}
    m = n
    p = 2
    while p * p <= m and p < _TRIAL_LIMIT:
        while m % p == 0:
            counts[p] = counts.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        _split(m, counts)
    return Factorization(n, tuple(sorted(counts.items())))


def _partitions_bounded(r: int, largest: int) -> Iterator[tuple[int, ...]]:
    if r == 0:
        yield ()
        return
    for first in range(min(r, largest), 0, -1):
        for rest in _partitions_bounded(r - first, first):
            yield (first,) + rest


def partitions(r: int) -> list[tuple[int, ...]]:
    """All partitions of ``r`` as weakly decreasing tuples, in
    lexicographically decreasing order.

    >>> partitions(3)
    [(3,), (2, 1), (1, 1, 1)]
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    return list(_partitions_bounded(r, r))


def partition_count(r: int) -> int:
    """Number of integer partitions of ``r`` (Euler's pentagonal recurrence).

    This is the count called B(r) in some physics literature; it is the
    partition function p(r), not the set-partition Bell number.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    p = [1] + [0] * r
    for n in range(1, r + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p[r]


@dataclass(frozen=True)
class CrtComponent:
    """One coprime factor of Z_n.

    ``idempotent`` is the element e of Z_n with e = 1 mod ``modulus`` and
    e = 0 modulo every other component; ``cofactor_inverse`` is
    (n / modulus)^{-1} mod ``modulus``.
    """

    modulus: int
    idempotent: int
    cofactor_inverse: int


@dataclass(frozen=True)
class CrtSplit:
    n: int
    components: tuple[CrtComponent, ...]

    @property
    def moduli(self) -> tuple[int, ...]:
        return tuple(c.modulus for c in self.components)

    def residues(self, x: int) -> tuple[int, ...]:
        return tuple(x % c.modulus for c in self.components)

    def reconstruct(self, residues) -> int:
        if len(residues) != len(self.components):
            raise ValueError("wrong number of residues")
        return sum(r * c.idempotent for r, c in zip(residues, self.components)) % self.n


def crt_split(n: int) -> CrtSplit:
    """Split Z_n into its prime-power components Z_{p^r}.

    >>> crt_split(180).moduli
    (4, 9, 5)
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    comps = []
    for q in factorize(n).prime_powers:
        cof = n // q
        inv = pow(cof, -1, q)
        comps.append(CrtComponent(q, cof * inv % n, inv))
    return CrtSplit(n, tuple(comps))


def mixed_radix_index(digits, radices) -> int:
    """Row-major linear index of ``digits`` in Z_{r_1} x ... x Z_{r_s}."""
    idx = 0
    for d, r in zip(digits, radices):
        idx = idx * r + d % r
    return idx


def mixed_radix_digits(index: int, radices) -> tuple[int, ...]:
    out = []
    for r in reversed(tuple(radices)):
        out.append(index % r)
        index //= r
    return tuple(reversed(out))
