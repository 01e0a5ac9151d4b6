import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fqk.monomial import DimensionError, MonomialMatrix, PartialMonomial, mono_adjoint, mono_mul, stack


@st.composite
def partial_monomials(draw, n=None, level=None, full=False):
    n = draw(st.integers(1, 7)) if n is None else n
    L = draw(st.integers(1, 12)) if level is None else level
    perm = draw(st.permutations(range(n)))
    cols = np.array(perm)
    if not full:
        dead = draw(st.lists(st.booleans(), min_size=n, max_size=n))
        cols = np.where(dead, -1, cols)
    exps = draw(st.lists(st.integers(0, L - 1), min_size=n, max_size=n))
    cls = MonomialMatrix if full else PartialMonomial
    return cls(cols, exps, L)


@st.composite
def same_dim(draw, count, full=False):
    n = draw(st.integers(1, 7))
    return [draw(partial_monomials(n=n, full=full)) for _ in range(count)]


def close(a, b):
    return np.allclose(a, b, atol=1e-12)


class TestDenseOracle:
    @given(same_dim(2))
    def test_product(self, ab):
        a, b = ab
        assert close((a @ b).to_dense(), a.to_dense() @ b.to_dense())

    @given(partial_monomials())
    def test_adjoint(self, a):
        assert close(a.adjoint().to_dense(), a.to_dense().conj().T)

    @given(partial_monomials(), partial_monomials())
    @settings(max_examples=50)
    def test_kron(self, a, b):
        assert close(a.kron(b).to_dense(), np.kron(a.to_dense(), b.to_dense()))

    @given(partial_monomials())
    def test_trace(self, a):
        assert abs(complex(a.trace()) - np.trace(a.to_dense())) < 1e-9

    @given(partial_monomials(), st.integers(-20, 20), st.integers(1, 12))
    def test_scaled(self, a, k, level):
        expect = np.exp(2j * np.pi * k / level) * a.to_dense()
        assert close(a.scaled(k, level).to_dense(), expect)


class TestAlgebra:
    @given(same_dim(3))
    def test_associative(self, abc):
        a, b, c = abc
        assert (a @ b) @ c == a @ (b @ c)

    @given(partial_monomials(full=True))
    def test_unitary(self, u):
        assert (u @ u.adjoint()).is_identity()
        assert (u.inverse() @ u).is_identity()
        assert isinstance(u @ u, MonomialMatrix)

    @given(partial_monomials(full=True), st.integers(-6, 6), st.integers(-6, 6))
    @settings(max_examples=50)
    def test_powers(self, u, j, k):
        assert u ** j @ u ** k == u ** (j + k)

    @given(partial_monomials())
    def test_level_changes_preserve_equality(self, a):
        assert a.at_level(a.level * 3) == a
        assert a.reduced() == a
        assert hash(a.at_level(a.level * 2)) == hash(a)

    def test_projective_ratio(self):
        a = MonomialMatrix([1, 2, 0], [0, 1, 2], 3)
        assert a.scaled(1, 4).projective_ratio(a) == (3, 12)
        assert a.projective_ratio(MonomialMatrix([1, 2, 0])) is None

    def test_spec_operations(self):
        p = MonomialMatrix([1, 2, 3, 4, 0])
        assert mono_mul(p, mono_adjoint(p)).is_identity()

    def test_matrix_units(self):
        e01 = PartialMonomial.matrix_unit(3, 0, 1)
        e10 = PartialMonomial.matrix_unit(3, 1, 0)
        assert e01 @ e10 == PartialMonomial.matrix_unit(3, 0, 0)
        assert e01 @ e01 == PartialMonomial.zero(3)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            MonomialMatrix.identity(2) @ MonomialMatrix.identity(3)

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            PartialMonomial([0, 0])
        with pytest.raises(ValueError):
            MonomialMatrix([0, -1])
        with pytest.raises(ValueError):
            PartialMonomial([3, 0, 1])

    def test_stack_lifts_to_common_level(self):
        cols, exps, L = stack([MonomialMatrix([0, 1], [0, 1], 2), MonomialMatrix([1, 0], [1, 2], 3)])
        assert L == 6
        assert exps.tolist() == [[0, 3], [2, 4]]
        assert cols.tolist() == [[0, 1], [1, 0]]
