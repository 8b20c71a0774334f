"""Core linear algebra: tensor bookkeeping, channels, metrics, eigensolver."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from quantumhouse import linalg as L
from quantumhouse import states as S

from conftest import random_bipartite


def _np_trace_distance(a, b):
    """Independent oracle: half the absolute eigenvalue sum via numpy."""
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(a - b))))


class TestTensor:
    def test_identity(self):
        assert_allclose(L.tensor(np.eye(2), np.eye(2)), np.eye(4))

    def test_maxmix_product_is_uniform_diagonal(self):
        out = L.tensor(np.eye(2) / 2, np.eye(2) / 2)
        assert_allclose(out, np.eye(4) / 4)

    def test_basis_projector_placement(self):
        p0 = np.diag([1.0, 0.0])
        p1 = np.diag([0.0, 1.0])
        out = L.tensor(p0, p1)
        expected = np.zeros((4, 4))
        expected[1, 1] = 1.0
        assert_allclose(out, expected)


class TestPartialTrace:
    def test_epr_marginal_is_maxmix(self):
        epr = S.make("epr")
        assert_allclose(L.partial_trace(epr, 0).mat, np.eye(2) / 2, atol=1e-12)
        assert_allclose(L.partial_trace(epr, 1).mat, np.eye(2) / 2, atol=1e-12)

    def test_product_marginals(self, rng):
        for i in range(200):
            db = 2 if i % 2 else 3
            a = L.random_density(2, rng)
            b = L.random_density(db, rng)
            joint = L.density(L.tensor(a, b), (2, db), validate=False)
            assert L.trace_distance(L.partial_trace(joint, 0).mat, a) < 1e-9
            assert L.trace_distance(L.partial_trace(joint, 1).mat, b) < 1e-9

    def test_eq1_marginal(self):
        out = L.partial_trace(S.make("eq1"), 0)
        assert_allclose(out.mat, np.eye(2) / 2, atol=1e-12)

    def test_trace_preserved(self, rng):
        rho = random_bipartite(rng, (2, 3))
        assert abs(L.partial_trace(rho, 1).mat.trace() - 1.0) < 1e-12

    def test_invalid_selector(self):
        rho = S.make("epr")
        with pytest.raises(ValueError):
            L.partial_trace(rho, 5)
        with pytest.raises(ValueError):
            L.partial_trace(S.make("maxmix2"), 0)


class TestApplyLocal:
    def test_flip_on_classical_pair(self):
        out = L.apply_local(S.make("classical-corr"), L.Unitary(L.PAULI_X), 0)
        assert_allclose(np.diagonal(out.mat).real, [0, 0.5, 0.5, 0], atol=1e-12)

    def test_flip_on_bell_pair(self):
        out = L.apply_local(S.make("epr"), L.Unitary(L.PAULI_X), 0)
        expected = np.zeros((4, 4), dtype=complex)
        expected[np.ix_([1, 2], [1, 2])] = 0.5
        assert_allclose(out.mat, expected, atol=1e-12)

    def test_measurement_channel_on_bell_pair(self):
        out = L.apply_local(S.make("epr"), L.MeasurementChannel(np.eye(2)), 0)
        assert L.trace_distance(out, S.make("classical-corr")) < 1e-12

    def test_unitary_preserves_spectrum(self, rng):
        for _ in range(20):
            rho = random_bipartite(rng, (2, 3))
            u = L.random_unitary(2, rng)
            out = L.apply_local(rho, L.Unitary(u), 0)
            assert_allclose(
                L.eig_hermitian(out.mat).eigenvalues,
                L.eig_hermitian(rho.mat).eigenvalues,
                atol=1e-9,
            )

    def test_measurement_idempotent(self, rng):
        for _ in range(10):
            rho = random_bipartite(rng)
            basis = L.random_unitary(2, rng)
            once = L.apply_local(rho, L.MeasurementChannel(basis), 0)
            twice = L.apply_local(once, L.MeasurementChannel(basis), 0)
            assert L.trace_distance(once, twice) < 1e-9

    def test_swap_with_prepared_matches_kraus_route(self, rng):
        # The replacement channel has an explicit Kraus family; the direct
        # construction must agree with it.
        rho = random_bipartite(rng)
        tau = L.random_density(2, rng)
        es = L.eig_hermitian(tau)
        ops = []
        for i in range(2):
            for j in range(2):
                k = np.sqrt(max(es.eigenvalues[i], 0)) * np.outer(
                    es.eigenvectors[:, i], np.eye(2)[j]
                )
                ops.append(k)
        direct = L.apply_local(rho, L.SwapWithPrepared(tau), 0)
        via_kraus = L.apply_local(rho, L.KrausChannel(tuple(ops)), 0)
        assert L.trace_distance(direct, via_kraus) < 1e-10

    def test_swap_on_second_subsystem(self, rng):
        rho = random_bipartite(rng, (2, 3))
        tau = L.random_density(3, rng)
        out = L.apply_local(rho, L.SwapWithPrepared(tau), 1)
        assert L.trace_distance(out.mat, L.tensor(L.partial_trace(rho, 0).mat, tau)) < 1e-10

    def test_bad_kraus_rejected(self):
        rho = S.make("epr")
        with pytest.raises(ValueError, match="trace preserving"):
            L.apply_local(rho, L.KrausChannel((np.eye(2) * 0.5,)), 0)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            L.apply_local(S.make("epr"), L.Unitary(np.eye(3)), 0)


class TestTraceDistance:
    def test_zero_on_equal(self, rng):
        rho = random_bipartite(rng)
        assert L.trace_distance(rho, rho) == 0.0

    def test_bell_vs_classical_pair(self):
        # Oracle: direct 4x4 eigensolve of the difference.
        epr, cc = S.make("epr"), S.make("classical-corr")
        expected = _np_trace_distance(epr.mat, cc.mat)
        assert abs(expected - 0.5) < 1e-12
        assert abs(L.trace_distance(epr, cc) - expected) < 1e-12

    def test_game_state_vs_flipped(self):
        eq1, eq3 = S.make("eq1"), S.make("eq3")
        expected = _np_trace_distance(eq1.mat, eq3.mat)
        assert abs(expected - 1 / 3) < 1e-12
        assert abs(L.trace_distance(eq1, eq3) - expected) < 1e-12

    def test_symmetry_triangle_unitary_invariance(self, rng):
        for _ in range(10):
            a, b, c = (random_bipartite(rng) for _ in range(3))
            dab, dbc, dac = (
                L.trace_distance(a, b),
                L.trace_distance(b, c),
                L.trace_distance(a, c),
            )
            assert abs(dab - L.trace_distance(b, a)) < 1e-12
            assert dac <= dab + dbc + 1e-12
            u = L.random_unitary(4, rng)
            ua = u @ a.mat @ u.conj().T
            ub = u @ b.mat @ u.conj().T
            assert abs(L.trace_distance(ua, ub) - dab) < 1e-9

    def test_dims_mismatch(self):
        with pytest.raises(ValueError):
            L.trace_distance(S.make("epr"), S.make("maxmix2"))


class TestEigHermitian:
    def test_maxmix(self):
        es = L.eig_hermitian(np.eye(2) / 2)
        assert_allclose(es.eigenvalues, [0.5, 0.5])
        assert_allclose(es.eigenvectors.conj().T @ es.eigenvectors, np.eye(2), atol=1e-12)

    def test_game_state_spectrum(self):
        es = L.eig_hermitian(S.make("eq1").mat)
        assert_allclose(es.eigenvalues, [1 / 3, 1 / 3, 1 / 6, 1 / 6], atol=1e-12)

    def test_pauli_x(self):
        es = L.eig_hermitian(L.PAULI_X)
        assert_allclose(es.eigenvalues, [1.0, -1.0], atol=1e-12)
        plus = np.array([1, 1]) / np.sqrt(2)
        minus = np.array([1, -1]) / np.sqrt(2)
        assert_allclose(np.abs(es.eigenvectors[:, 0]), np.abs(plus), atol=1e-9)
        assert_allclose(np.abs(es.eigenvectors[:, 1]), np.abs(minus), atol=1e-9)

    def test_reconstruction_random(self, rng):
        for d in (2, 3, 4, 6, 8, 16):
            for _ in range(5):
                g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
                h = (g + g.conj().T) / 2
                es = L.eig_hermitian(h)
                recon = es.eigenvectors @ np.diag(es.eigenvalues) @ es.eigenvectors.conj().T
                assert np.linalg.norm(recon - h) <= 1e-9
                assert np.linalg.norm(
                    es.eigenvectors.conj().T @ es.eigenvectors - np.eye(d)
                ) <= 1e-9
                assert_allclose(
                    es.eigenvalues, np.sort(np.linalg.eigvalsh(h))[::-1], atol=1e-9
                )

    def test_descending_order_and_determinism(self, rng):
        g = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        h = (g + g.conj().T) / 2
        a = L.eig_hermitian(h)
        b = L.eig_hermitian(h)
        assert np.all(np.diff(a.eigenvalues) <= 1e-12)
        assert np.array_equal(a.eigenvectors, b.eigenvectors)

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError, match="Hermitian"):
            L.eig_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))


class TestValidateDensity:
    def test_bell_pair_clean(self):
        d = L.validate_density(S.make("epr").mat)
        assert d.hermiticity_defect < 1e-12
        assert d.trace_defect < 1e-12
        assert d.min_eigenvalue > -1e-12
        assert d.passes()

    def test_trace_defect(self):
        d = L.validate_density(np.diag([1.0, 0.5]).astype(complex))
        assert abs(d.trace_defect - 0.5) < 1e-12
        assert not d.passes()

    def test_hermiticity_defect(self):
        m = np.eye(2, dtype=complex) / 2
        m[0, 1] = 0.1j
        d = L.validate_density(m)
        assert d.hermiticity_defect > 0.05

    def test_negative_eigenvalue(self):
        d = L.validate_density(np.diag([1.5, -0.5]).astype(complex))
        assert d.min_eigenvalue < -0.4


class TestSampleRandom:
    def test_determinism(self):
        a = L.sample_random("unitary", 2, 99)
        b = L.sample_random("unitary", 2, 99)
        assert np.array_equal(a, b)

    def test_unitary(self):
        u = L.sample_random("unitary", 4, 7)
        assert np.max(np.abs(u.conj().T @ u - np.eye(4))) < 1e-9

    def test_density(self):
        dm = L.sample_random("density", 4, 7)
        assert L.validate_density(dm.mat).passes()

    def test_pure_state_norm(self):
        v = L.sample_random("pure-state", 2, 7)
        assert abs(np.linalg.norm(v) - 1.0) < 1e-9

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            L.sample_random("spam", 2, 1)


class TestDensityMatrix:
    def test_immutable(self):
        dm = S.make("epr")
        with pytest.raises(ValueError):
            dm.mat[0, 0] = 9.0

    def test_dims_must_match(self):
        with pytest.raises(ValueError):
            L.DensityMatrix(np.eye(4) / 4, (2, 3))

    def test_dimension_cap(self):
        with pytest.raises(ValueError, match="exceeds"):
            L.DensityMatrix(np.eye(128) / 128, (128,))

    def test_validation_rejects_junk(self):
        with pytest.raises(ValueError, match="not a valid density"):
            L.density(np.eye(2), (2,))  # trace 2

    def test_permute_subsystems_roundtrip(self, rng):
        rho = random_bipartite(rng, (2, 3))
        back = L.permute_subsystems(L.permute_subsystems(rho, [1, 0]), [1, 0])
        assert L.trace_distance(rho, back) < 1e-12
