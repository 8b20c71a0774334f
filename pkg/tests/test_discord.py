"""Discord verdicts: block criterion, witness soundness, oracle agreement."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from quantumhouse import discord as D
from quantumhouse import linalg as L
from quantumhouse import states as S

from conftest import classical_quantum_state, random_bipartite


def _np_dephase(rho_mat, dims, basis):
    """Independent oracle for the measurement channel: raw numpy projectors."""
    da, db = dims
    post = np.zeros_like(rho_mat)
    for i in range(da):
        p = np.outer(basis[:, i], basis[:, i].conj())
        k = np.kron(p, np.eye(db))
        post += k @ rho_mat @ k
    return post


def _np_perturbation(rho, basis):
    post = _np_dephase(rho.mat, rho.dims, basis)
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(rho.mat - post))))


class TestCorrelationBlocks:
    def test_classical_pair(self):
        cb = D.correlation_blocks(S.make("classical-corr"))
        assert_allclose(cb.blocks[0, 0], np.diag([0.5, 0.0]), atol=1e-15)
        assert_allclose(cb.blocks[1, 1], np.diag([0.0, 0.5]), atol=1e-15)
        assert np.max(np.abs(cb.blocks[0, 1])) < 1e-15

    def test_bell_pair_off_block(self):
        cb = D.correlation_blocks(S.make("epr"))
        expected = np.zeros((2, 2))
        expected[0, 1] = 0.5
        assert_allclose(cb.blocks[0, 1], expected, atol=1e-15)

    def test_product_blocks_are_scalar_multiples(self, rng):
        a = L.random_density(2, rng)
        b = L.random_density(2, rng)
        joint = L.density(L.tensor(a, b), (2, 2), validate=False)
        cb = D.correlation_blocks(joint)
        for m in range(2):
            for n in range(2):
                assert_allclose(cb.blocks[m, n], b[m, n] * a, atol=1e-12)

    def test_invariants_on_random_states(self, rng):
        for dims in ((2, 2), (2, 3)):
            rho = random_bipartite(rng, dims)
            cb = D.correlation_blocks(rho)
            db = dims[1]
            for m in range(db):
                for n in range(db):
                    assert_allclose(
                        cb.blocks[n, m], cb.blocks[m, n].conj().T, atol=1e-12
                    )
            diag_sum = sum(cb.blocks[m, m] for m in range(db))
            assert_allclose(diag_sum, L.partial_trace(rho, 0).mat, atol=1e-12)


class TestIsZeroDiscord:
    def test_classical_pair_zero_with_computational_witness(self):
        v = D.is_zero_discord(S.make("classical-corr"))
        assert v.zero_discord
        assert_allclose(np.abs(v.witness_basis), np.eye(2), atol=1e-9)

    def test_bell_pair_nonzero(self):
        v = D.is_zero_discord(S.make("epr"))
        assert not v.zero_discord
        assert v.certificate is not None
        assert v.certificate["norm"] > 1e-8

    def test_game_state_zero(self):
        assert D.is_zero_discord(S.make("eq1")).zero_discord

    def test_nonorthogonal_pair_nonzero(self):
        u = np.array([np.cos(0.6), np.sin(0.6)], dtype=complex)
        v = np.array([1, 0], dtype=complex)
        mat = 0.6 * np.kron(np.outer(u, u.conj()), np.diag([1, 0.0])) + 0.4 * np.kron(
            np.outer(v, v.conj()), np.diag([0.0, 1])
        )
        verdict = D.is_zero_discord(L.density(mat, (2, 2)))
        assert not verdict.zero_discord

    def test_nonorthogonal_pair_via_ensemble_route(self):
        # Two overlapping preparations on A, flagged by orthogonal B states:
        # already enough for non-vanishing discord.
        u = np.array([np.cos(0.6), np.sin(0.6)], dtype=complex)
        v = np.array([1, 0], dtype=complex)
        e = S.Ensemble(
            ((0.6, np.kron(u, S.KETS["0"])), (0.4, np.kron(v, S.KETS["1"]))), (2, 2)
        )
        dm = S.ensemble_to_density(e)
        assert not D.is_zero_discord(dm).zero_discord
        # ...while genuinely orthogonal preparations stay classical.
        e0 = S.Ensemble(
            ((0.6, S.two_qubit_ket("0", "0")), (0.4, S.two_qubit_ket("1", "1"))), (2, 2)
        )
        assert D.is_zero_discord(S.ensemble_to_density(e0)).zero_discord

    def test_constructed_cq_states_always_zero(self, rng):
        for dims in ((2, 2), (2, 3)):
            for _ in range(15):
                rho = classical_quantum_state(rng, dims)
                v = D.is_zero_discord(rho)
                assert v.zero_discord
                # Soundness: the returned basis really is non-perturbing.
                assert D.measurement_perturbation(rho, v.witness_basis) <= 1e-8

    def test_verdict_invariant_under_local_unitary_on_b(self, rng):
        for _ in range(10):
            rho = classical_quantum_state(rng, (2, 3)) if rng.random() < 0.5 else random_bipartite(rng, (2, 3))
            expected = D.is_zero_discord(rho).zero_discord
            u = L.random_unitary(3, rng)
            rotated = L.apply_local(rho, L.Unitary(u), 1)
            assert D.is_zero_discord(rotated).zero_discord == expected

    def test_random_states_are_discordant(self, rng):
        for _ in range(10):
            assert not D.is_zero_discord(random_bipartite(rng)).zero_discord


class TestMeasurementPerturbation:
    def test_classical_pair_in_computational(self):
        assert D.measurement_perturbation(S.make("classical-corr"), np.eye(2)) < 1e-12

    def test_bell_pair_in_computational(self):
        epr, cc = S.make("epr"), S.make("classical-corr")
        expected = 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(epr.mat - cc.mat))))
        got = D.measurement_perturbation(epr, np.eye(2))
        assert abs(got - expected) < 1e-12
        assert abs(got - 0.5) < 1e-12

    def test_bell_pair_in_hadamard(self):
        epr = S.make("epr")
        basis = S.basis_matrix("hadamard")
        expected = _np_perturbation(epr, basis)
        got = D.measurement_perturbation(epr, basis)
        assert abs(got - expected) < 1e-12
        assert abs(got - 0.5) < 1e-12

    def test_non_orthonormal_basis_rejected(self):
        with pytest.raises(ValueError, match="orthonormal"):
            D.measurement_perturbation(S.make("epr"), np.ones((2, 2)))


class TestOracleAgreement:
    """Block criterion vs randomized basis search (scaled-down here; the
    acceptance suite runs the full 500-state sweep)."""

    ORACLE_TOL = 1e-6

    def test_cross_validation_sample(self, rng):
        disagreements = []
        for i in range(40):
            roll = i % 4
            dims = (2, 2) if i % 2 else (2, 3)
            if roll == 0:
                rho = random_bipartite(rng, dims)
            elif roll == 1:
                rho = classical_quantum_state(rng, dims)
            elif roll == 2:
                a = L.random_density(2, rng)
                b = L.random_density(dims[1], rng)
                rho = L.density(L.tensor(a, b), dims, validate=False)
            else:
                diag = rng.dirichlet(np.ones(2 * dims[1]))
                rho = L.density(np.diag(diag).astype(complex), dims, validate=False)
            verdict = D.is_zero_discord(rho)
            search = D.perturbation_search(rho, points=800, seed=1000 + i)
            oracle_zero = search.min_perturbation <= self.ORACLE_TOL
            if verdict.zero_discord != oracle_zero:
                disagreements.append((i, verdict.diagnostics, search.min_perturbation))
        assert not disagreements, disagreements

    def test_search_finds_the_basis_on_zero_discord_states(self, rng):
        rho = classical_quantum_state(rng, (2, 3))
        result = D.perturbation_search(rho, points=800, seed=3)
        assert result.min_perturbation < 1e-8

    def test_search_requires_qubit_a(self, rng):
        mat = L.random_density(6, rng)
        with pytest.raises(ValueError, match="qubit"):
            D.perturbation_search(L.density(mat, (3, 2), validate=False))
