from math import prod

import pytest
from hypothesis import given, strategies as st

from fqk.numtheory import (
    Factorization,
    crt_split,
    factorize,
    is_probable_prime,
    mixed_radix_digits,
    mixed_radix_index,
    partition_count,
    partitions,
)

from _oracles import partition_count_dp


def trial_division(n):
    out, p = [], 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def partitions_recursive(r, cap=None):
    cap = r if cap is None else cap
    if r == 0:
        return [()]
    out = []
    for first in range(min(r, cap), 0, -1):
        out.extend((first,) + rest for rest in partitions_recursive(r - first, first))
    return out


class TestFactorize:
    def test_examples(self):
        assert factorize(180).factors == ((2, 2), (3, 2), (5, 1))
        assert factorize(1).factors == ()
        assert factorize(97).factors == ((97, 1),)

    def test_notation(self):
        assert str(factorize(180)) == "2^2.3^2.5"

    def test_rejects_zero_and_negative(self):
        with pytest.raises(ValueError):
            factorize(0)
        with pytest.raises(ValueError):
            factorize(-4)

    def test_rejects_non_integer(self):
        with pytest.raises(TypeError):
            factorize(6.0)

    def test_matches_trial_division(self):
        for n in range(1, 3001):
            assert list(factorize(n).factors) == trial_division(n), n

    @given(st.integers(min_value=1, max_value=10**15))
    def test_remultiplies(self, n):
        f = factorize(n)
        assert prod(p**e for p, e in f.factors) == n
        assert all(is_probable_prime(p) for p in f.primes)
        assert list(f.primes) == sorted(set(f.primes))

    def test_large_semiprime(self):
        p, q = 1_000_003, 998_244_353
        assert factorize(p * q).factors == ((p, 1), (q, 1))

    def test_factorization_validates(self):
        with pytest.raises(ValueError):
            Factorization(12, ((2, 2), (5, 1)))


@pytest.mark.parametrize("n", [2, 3, 5, 7, 97, 7919, 2**61 - 1])
def test_primes_detected(n):
    assert is_probable_prime(n)


@pytest.mark.parametrize("n", [0, 1, 4, 561, 1105, 3215031751, 2**61 + 1])
def test_composites_rejected(n):
    assert not is_probable_prime(n)


class TestPartitions:
    def test_examples(self):
        assert partitions(1) == [(1,)]
        assert partitions(2) == [(2,), (1, 1)]
        assert partitions(3) == [(3,), (2, 1), (1, 1, 1)]

    @pytest.mark.parametrize("r", range(1, 16))
    def test_matches_recursive_enumeration(self, r):
        got = partitions(r)
        assert got == partitions_recursive(r)
        assert got == sorted(got, reverse=True)
        assert len(set(got)) == len(got)
        assert all(sum(p) == r and list(p) == sorted(p, reverse=True) for p in got)

    def test_count_examples(self):
        assert [partition_count(r) for r in (1, 2, 4)] == [1, 2, 5]

    def test_count_matches_dp_oracle(self):
        assert [partition_count(r) for r in range(1, 41)] == [partition_count_dp(r) for r in range(1, 41)]
        assert partition_count(40) == 37338

    @pytest.mark.parametrize("r", range(1, 16))
    def test_count_is_list_length(self, r):
        assert partition_count(r) == len(partitions(r))


class TestCrt:
    def test_examples(self):
        assert crt_split(6).moduli == (2, 3)
        assert crt_split(180).moduli == (4, 9, 5)
        assert crt_split(8).moduli == (8,)

    def test_six_is_bijective(self):
        split = crt_split(6)
        assert len({split.residues(x) for x in range(6)}) == 6

    def test_round_trip_up_to_500(self):
        for n in range(2, 501):
            split = crt_split(n)
            assert prod(split.moduli) == n
            for x in range(n):
                res = split.residues(x)
                assert res == tuple(x % m for m in split.moduli)
                assert split.reconstruct(res) == x

    def test_idempotents(self):
        split = crt_split(180)
        for comp in split.components:
            e = comp.idempotent
            assert e * e % 180 == e
            assert e % comp.modulus == 1
            for other in split.components:
                if other is not comp:
                    assert e % other.modulus == 0

    def test_rejects_one(self):
        with pytest.raises(ValueError):
            crt_split(1)


@given(st.lists(st.integers(min_value=1, max_value=9), min_size=1, max_size=4), st.data())
def test_mixed_radix_round_trip(radices, data):
    index = data.draw(st.integers(min_value=0, max_value=prod(radices) - 1))
    digits = mixed_radix_digits(index, radices)
    assert all(0 <= d < r for d, r in zip(digits, radices))
    assert mixed_radix_index(digits, radices) == index
