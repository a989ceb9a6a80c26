import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from remotejc.concurrence import (
    TwoQubitDensity,
    XStateElements,
    concurrence,
    concurrence_values,
    hermitian_eigenvalues,
    hermitian_eigenvalues_4x4,
    reduce_to_qubits,
    spin_flip,
    x_concurrence,
    x_project,
)
from remotejc.errors import ContractViolation
from remotejc.fock import FieldSpec, build_initial_state, evolve

BELL = np.array([0, 1, 1, 0]) / math.sqrt(2)
SY = np.array([[0, -1j], [1j, 0]])
SYSY = np.kron(SY, SY)


def wootters_oracle(rho):
    """Textbook route: general eigenvalues of rho (sy sy) rho* (sy sy)."""
    zeta = rho @ SYSY @ rho.conj() @ SYSY
    lam = np.sort(np.clip(np.linalg.eigvals(zeta).real, 0, None))[::-1]
    r = np.sqrt(lam)
    return max(0.0, r[0] - r[1] - r[2] - r[3])


def random_unitary(rng, n):
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng, rank=4):
    x = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    r = x @ x.conj().T
    return r / np.trace(r).real


def random_x_state(rng):
    a, b, c, d = rng.dirichlet(np.ones(4))
    z = math.sqrt(b * c) * rng.uniform() * np.exp(2j * math.pi * rng.uniform())
    return XStateElements(a, b, c, d, z)


def werner(p):
    return p * np.outer(BELL, BELL) + (1 - p) / 4 * np.eye(4)


class TestReduce:
    def test_bell_product_state(self):
        rho = reduce_to_qubits(build_initial_state(FieldSpec(2.0))).entries
        x = x_project(rho)
        assert (x.a, x.d) == (0.0, 0.0)
        assert x.b == pytest.approx(0.5, abs=1e-13)
        assert x.c == pytest.approx(0.5, abs=1e-13)
        assert x.z == pytest.approx(0.5, abs=1e-13)
        assert x.discarded_norm == 0.0

    @pytest.mark.parametrize("gt", [0.3, 1.0, 2.2, 4.0])
    def test_vacuum_elements(self, gt):
        x = x_project(reduce_to_qubits(evolve(build_initial_state(FieldSpec(0.0)), gt)))
        c2, s2 = math.cos(gt) ** 2, math.sin(gt) ** 2
        assert x.a == 0.0
        assert x.b == pytest.approx(c2 / 2, abs=1e-15)
        assert x.c == pytest.approx(c2 / 2, abs=1e-15)
        assert x.z == pytest.approx(c2 / 2, abs=1e-15)
        assert x.d == pytest.approx(s2, abs=1e-15)

    @pytest.mark.parametrize("gt", [0.0, 1.7, 33.0])
    def test_density_invariants(self, gt):
        rho = reduce_to_qubits(evolve(build_initial_state(FieldSpec(5.0)), gt))
        m = rho.entries
        assert np.max(np.abs(m - m.conj().T)) <= 1e-12
        assert abs(np.trace(m).real - 1) < 1e-10
        assert rho.min_eigenvalue() >= -1e-10

    def test_rejects_bad_trace(self):
        with pytest.raises(ContractViolation):
            TwoQubitDensity(np.eye(4))


class TestHermitianEigenvalues:
    def test_identity_quarter(self):
        np.testing.assert_allclose(hermitian_eigenvalues_4x4(np.eye(4) / 4), [0.25] * 4, atol=1e-15)

    def test_diagonal(self):
        np.testing.assert_allclose(hermitian_eigenvalues_4x4(np.diag([1.0, 3, 2, 4])), [4, 3, 2, 1])

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_construct_and_recover(self, seed):
        rng = np.random.default_rng(seed)
        d = np.sort(rng.uniform(-5, 5, size=4))[::-1]
        u = random_unitary(rng, 4)
        h = u @ np.diag(d) @ u.conj().T
        h = 0.5 * (h + h.conj().T)
        w = hermitian_eigenvalues_4x4(h)
        np.testing.assert_allclose(w, d, rtol=0, atol=1e-11)
        assert abs(w.sum() - np.trace(h).real) < 1e-11

    def test_degenerate(self, rng):
        u = random_unitary(rng, 4)
        h = u @ np.diag([2.0, 2.0, -1.0, -1.0]) @ u.conj().T
        np.testing.assert_allclose(hermitian_eigenvalues_4x4(h), [2, 2, -1, -1], atol=1e-12)

    def test_rejects_non_hermitian(self):
        m = np.eye(4, dtype=complex)
        m[0, 1] = 1e-3
        with pytest.raises(ContractViolation):
            hermitian_eigenvalues_4x4(m)

    def test_rejects_wrong_shape(self):
        with pytest.raises(ContractViolation):
            hermitian_eigenvalues_4x4(np.eye(3))

    def test_larger_matrix(self, rng):
        u = random_unitary(rng, 8)
        d = np.linspace(3, -2, 8)
        np.testing.assert_allclose(hermitian_eigenvalues(u @ np.diag(d) @ u.conj().T), d, atol=1e-11)


class TestConcurrence:
    def test_bell(self):
        diag = concurrence(TwoQubitDensity.from_pure(BELL))
        assert abs(diag.concurrence - 1) < 1e-12

    def test_product(self):
        assert concurrence(TwoQubitDensity.from_pure([1, 0, 0, 0])).concurrence == 0.0

    @pytest.mark.parametrize("p", [0.0, 1 / 3, 0.8, 1.0])
    def test_werner(self, p):
        rho = werner(p)
        expected = max(0.0, (3 * p - 1) / 2)
        general = concurrence(rho).concurrence
        closed = x_concurrence(x_project(rho))
        assert general == pytest.approx(expected, abs=1e-12)
        assert closed == pytest.approx(expected, abs=1e-12)

    def test_agrees_with_textbook_eigvals(self, rng):
        for _ in range(200):
            rho = random_density(rng, rank=int(rng.integers(1, 5)))
            assert concurrence(rho).concurrence == pytest.approx(wootters_oracle(rho), abs=1e-7)

    def test_lambdas_sum_to_trace_of_zeta(self, rng):
        for _ in range(50):
            rho = random_density(rng)
            zeta = rho @ spin_flip(rho)
            diag = concurrence(rho)
            assert abs(diag.lambdas.sum() - np.trace(zeta).real) < 1e-10
            assert np.all(diag.lambdas >= -1e-10)
            assert np.all(np.diff(diag.lambdas) <= 0)
            assert diag.concurrence == pytest.approx(diag.from_lambdas(diag.lambdas), abs=1e-12)

    def test_spin_flip_matches_matrix_product(self, rng):
        rho = random_density(rng)
        np.testing.assert_allclose(spin_flip(rho), SYSY @ rho.conj() @ SYSY, atol=1e-15)

    @settings(max_examples=80, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 4))
    def test_bounds(self, seed, rank):
        c = concurrence(random_density(np.random.default_rng(seed), rank)).concurrence
        assert 0.0 <= c <= 1.0

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_local_unitary_invariance(self, seed):
        rng = np.random.default_rng(seed)
        rho = random_density(rng, rank=int(rng.integers(1, 5)))
        u = np.kron(random_unitary(rng, 2), random_unitary(rng, 2))
        moved = u @ rho @ u.conj().T
        assert concurrence(moved).concurrence == pytest.approx(concurrence(rho).concurrence, abs=1e-9)

    def test_rank_deficient_small_populations_exact(self):
        # rho = cos^2 |Bell><Bell| + sin^2 |gg><gg|: C = cos^2 with no sqrt(eps) noise
        for gt in np.linspace(0, 2 * math.pi, 97):
            c2 = math.cos(gt) ** 2
            rho = c2 * np.outer(BELL, BELL) + (1 - c2) * np.diag([0, 0, 0, 1.0])
            assert abs(concurrence(rho).concurrence - c2) < 1e-12

    def test_rejects_negative_matrix(self):
        with pytest.raises(ContractViolation):
            concurrence(np.diag([1.2, -0.2, 0, 0]))

    def test_batch_matches_single(self, rng):
        rhos = np.array([random_density(rng) for _ in range(10)])
        np.testing.assert_allclose(
            concurrence_values(rhos), [concurrence(r).concurrence for r in rhos], atol=1e-15
        )


class TestXState:
    def test_project_x_type_discards_nothing(self, rng):
        x = random_x_state(rng)
        assert x_project(x.to_matrix()).discarded_norm == 0.0

    def test_project_bell(self):
        x = x_project(np.outer(BELL, BELL))
        assert (x.a, x.b, x.c, x.d, x.z) == pytest.approx((0, 0.5, 0.5, 0, 0.5))

    def test_full_coherent_run_is_not_x_type(self):
        rho = reduce_to_qubits(evolve(build_initial_state(FieldSpec(10.0)), 3.0))
        assert x_project(rho).discarded_norm > 0.0

    def test_closed_form_examples(self):
        assert x_concurrence(XStateElements(0, 0.5, 0.5, 0, 0.5)) == 1.0
        assert x_concurrence(XStateElements(0.25, 0.25, 0.25, 0.25, 0)) == 0.0

    @pytest.mark.parametrize("gt", np.linspace(0, 2 * math.pi, 13))
    def test_vacuum_dynamics(self, gt):
        c2 = math.cos(gt) ** 2
        x = XStateElements(0.0, c2 / 2, c2 / 2, 1 - c2, c2 / 2)
        assert x_concurrence(x) == pytest.approx(c2, abs=1e-15)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_two_routes_agree(self, seed):
        x = random_x_state(np.random.default_rng(seed))
        x.check()
        assert abs(concurrence(x.to_matrix()).concurrence - x_concurrence(x)) < 1e-10

    def test_check_rejects_bad_coherence(self):
        with pytest.raises(ContractViolation):
            XStateElements(0.0, 0.25, 0.25, 0.5, 0.4).check()
