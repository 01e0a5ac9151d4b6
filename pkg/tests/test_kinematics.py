import numpy as np
import pytest

from fqk.config import ResourceBoundError
from fqk.kinematics import (
    ConfigGroup,
    ImprimitivitySystem,
    commutant_dimension,
    crt_equivalence,
    position_probability,
    regular_system,
    tensor_system,
    tensor_systems,
    verify_system,
    weyl_system,
)
from fqk.pauli import gram_is_identity, p_matrix, q_matrix, schwinger_basis

from _oracles import config_tuples, covariance_defects


class TestConfigGroup:
    def test_row_major(self):
        G = ConfigGroup((2, 3))
        assert [G.element(i) for i in range(6)] == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]
        assert G.index((1, 2)) == 5

    def test_addition_and_negation(self):
        G = ConfigGroup((4, 3))
        add, neg = G.addition_table(), G.negation()
        for a in range(G.order):
            assert add[a, neg[a]] == 0
            for b in range(G.order):
                ea, eb = G.element(a), G.element(b)
                assert G.element(add[a, b]) == ((ea[0] + eb[0]) % 4, (ea[1] + eb[1]) % 3)


class TestRegularSystem:
    def test_qubit(self):
        s = regular_system((2,))
        assert np.allclose(s.U(1).to_dense(), [[0, 1], [1, 0]])
        assert np.allclose(s.E(0).to_dense(), np.diag([1, 0]))

    def test_powers_of_shift(self):
        s = regular_system((6,))
        for j in range(6):
            assert s.U(j) == p_matrix(6) ** j

    def test_kron_oracle(self):
        s = regular_system((2, 3))
        assert np.allclose(s.U((1, 1)).to_dense(), np.kron(p_matrix(2).to_dense(), p_matrix(3).to_dense()))
        for j in ConfigGroup((2, 3)).digits():
            expect = np.kron(np.linalg.matrix_power(p_matrix(2).to_dense(), j[0]),
                             np.linalg.matrix_power(p_matrix(3).to_dense(), j[1]))
            assert np.allclose(s.U(tuple(j)).to_dense(), expect)

    def test_covariance_all_groups_to_64(self):
        groups = list(config_tuples(64))
        assert len(groups) == 440
        for orders in groups:
            s = regular_system(orders)
            assert all(c.passed for c in s.checks), orders
            assert covariance_defects(s) == 0, orders

    def test_dense_covariance_small(self):
        s = regular_system((2, 2))
        for j in range(4):
            U = s.U(j).to_dense()
            for rho in range(4):
                diff = s.config.index(tuple((a - b) % 2 for a, b in zip(s.config.element(rho), s.config.element(j))))
                assert np.allclose(U @ s.E(rho).to_dense() @ np.linalg.inv(U), s.E(diff).to_dense())

    def test_verification_catches_broken_system(self):
        good = regular_system((3,))
        broken = ImprimitivitySystem(good.config, good.u_cols, good.u_exps, 1, np.array([0, 2, 1]))
        checks = {c.name: c.passed for c in verify_system(broken)}
        assert not checks["covariance U(j)E(rho)U(j)^-1=E(rho-j)"]
        assert checks["homomorphism U(j)U(j')=U(j+j')"]

    def test_bound(self):
        with pytest.raises(ResourceBoundError):
            regular_system((10, 10))
        assert regular_system((10, 10), max_order=100, verify=False).dim == 100


class TestPositionProbability:
    def test_basis_state(self):
        s = regular_system((5,))
        psi = np.eye(5)[2]
        assert [position_probability(s, psi, r) for r in range(5)] == [0, 0, 1, 0, 0]

    def test_uniform(self):
        s = regular_system((4,))
        psi = np.full(4, 0.5)
        assert np.allclose([position_probability(s, psi, r) for r in range(4)], 0.25)

    def test_superposition(self):
        s = regular_system((3,))
        psi = np.array([1, 1, 0]) / np.sqrt(2)
        assert np.allclose([position_probability(s, psi, r) for r in range(3)], [0.5, 0.5, 0])

    def test_sums_to_one(self):
        s = regular_system((2, 3, 2))
        rng = np.random.default_rng(1)
        psi = rng.normal(size=12) + 1j * rng.normal(size=12)
        psi /= np.linalg.norm(psi)
        assert abs(sum(position_probability(s, psi, r) for r in range(12)) - 1) < 1e-12

    def test_rejects_unnormalised(self):
        with pytest.raises(ValueError):
            position_probability(regular_system((3,)), np.ones(3), 0)


class TestTensor:
    def test_two_qubits(self):
        s = tensor_system(regular_system((2,)), regular_system((2,)))
        assert s.dim == 4 and s.config.orders == (2, 2)

    def test_crt_dimension(self):
        s = tensor_systems([regular_system((n,)) for n in (4, 9, 5)], max_order=180)
        assert s.dim == 180 and s.config.orders == (4, 9, 5)

    def test_matches_direct_product_system(self):
        t = tensor_system(regular_system((2,)), regular_system((3,)))
        r = regular_system((2, 3))
        assert np.array_equal(t.u_cols, r.u_cols) and np.array_equal(t.e_index, r.e_index)

    def test_associativity(self):
        a, b, c = (regular_system((n,)) for n in (2, 3, 2))
        left = tensor_system(tensor_system(a, b), c)
        right = tensor_system(a, tensor_system(b, c))
        assert left.config == right.config
        for j in range(12):
            assert left.U(j) == right.U(j)
            assert left.E(j) == right.E(j)


class TestCrt:
    def test_six(self):
        eq = crt_equivalence(6)
        assert eq.passed
        assert eq.moduli == (2, 3)
        assert eq.images.tolist() == [3 * (x % 2) + x % 3 for x in range(6)]
        T = eq.T
        assert p_matrix(6).conjugate_by(T) == p_matrix(2).kron(p_matrix(3))
        assert q_matrix(6).conjugate_by(T) == q_matrix(2).kron(q_matrix(3) ** -1)

    def test_prime_is_trivial(self):
        for p in (2, 3, 5, 7, 31):
            eq = crt_equivalence(p)
            assert eq.T.is_identity() and eq.moduli == (p,) and eq.cycles() == []

    @pytest.mark.parametrize("N", range(2, 65))
    def test_all_up_to_64(self, N):
        eq = crt_equivalence(N)
        assert eq.passed, [c for c in eq.checks if not c.passed]

    def test_dense_oracle(self):
        eq = crt_equivalence(12)
        T = eq.T.to_dense()
        for x in range(12):
            lhs = T @ np.linalg.matrix_power(p_matrix(12).to_dense(), x) @ T.T
            rhs = np.kron(np.linalg.matrix_power(p_matrix(4).to_dense(), x % 4),
                          np.linalg.matrix_power(p_matrix(3).to_dense(), x % 3))
            assert np.allclose(lhs, rhs)

    def test_rejects_small(self):
        with pytest.raises(ValueError):
            crt_equivalence(1)


class TestWeylSystem:
    def test_two_qubits(self):
        ws = weyl_system((2, 2))
        assert len(ws) == 16
        paulis = [np.eye(2), np.diag([1, -1]), np.array([[0, 1], [1, 0]]), np.array([[0, 1], [-1, 0]])]
        dense = [op.to_dense() * 2 for op in ws.operators]
        for a in paulis:
            for b in paulis:
                target = np.kron(a, b)
                assert any(np.allclose(d, target) for d in dense)

    def test_single_factor(self):
        ws = weyl_system((3,))
        S = schwinger_basis(3)
        assert [op.matrix for op in ws.operators] == [S[k].matrix for k in S]

    def test_mixed(self):
        ws = weyl_system((2, 3))
        assert len(ws) == 36
        assert ws.checks[0].passed
        assert gram_is_identity(list(ws.operators))

    def test_dense_gram_oracle(self):
        ops = [op.to_dense() for op in weyl_system((2, 3)).operators]
        G = np.array([[np.trace(a @ b.conj().T) for b in ops] for a in ops])
        assert np.allclose(G, np.eye(36))


class TestIrreducibility:
    @pytest.mark.parametrize("orders", [(2,), (3,), (5,), (2, 2), (2, 3), (4, 3), (2, 2, 2)])
    def test_commutant_is_trivial(self, orders):
        assert commutant_dimension(regular_system(orders)) == 1

    def test_tensor_of_irreducibles(self):
        s = tensor_system(regular_system((3,)), regular_system((4,)))
        assert commutant_dimension(s) == 1

    def test_reducible_without_position(self):
        # dropping the PVM leaves the translations alone, which commute with each other
        s = regular_system((4,))
        U = s.U(1).to_dense()
        M = np.kron(U, np.eye(4)) - np.kron(np.eye(4), U.T)
        assert 16 - np.linalg.matrix_rank(M, tol=1e-8) == 4
