import numpy as np
import pytest

from qwalk_nm.errors import IntegrityError, ShapeError, UsageError
from qwalk_nm.linalg import (
    DensityOperator,
    hermitian_eigensystem,
    matmul,
    partial_trace,
    purity,
    trace_norm_distance,
    von_neumann_entropy,
)

from reference import naive_matmul

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def random_density(rng, dim, dims=None):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = a @ a.conj().T
    m /= np.trace(m).real
    return DensityOperator(m, dims or (dim, 1))


def random_pure(rng, dim, dims=None):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    return DensityOperator.from_pure(v, dims or (dim, 1))


class TestMatmul:
    def test_identity(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        assert np.allclose(matmul(np.eye(2), x), x)

    def test_pauli_involution(self):
        assert np.allclose(matmul(SIGMA_Z, SIGMA_Z), np.eye(2))

    def test_matches_triple_loop(self):
        rng = np.random.default_rng(2)
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        assert np.max(np.abs(matmul(a, b) - naive_matmul(a, b))) < 1e-12

    def test_associativity(self):
        rng = np.random.default_rng(3)
        a, b, c = (rng.normal(size=(4, 4)) for _ in range(3))
        assert np.allclose(matmul(matmul(a, b), c), matmul(a, matmul(b, c)), atol=1e-12)

    def test_shape_error(self):
        with pytest.raises(ShapeError):
            matmul(np.eye(2), np.eye(3))


class TestEigensystem:
    def test_diagonal(self):
        w, _ = hermitian_eigensystem(np.diag([3.0, 1.0, 2.0]))
        assert np.allclose(w, [1.0, 2.0, 3.0])

    def test_pauli_x_spectrum(self):
        w, _ = hermitian_eigensystem(SIGMA_X)
        assert np.allclose(w, [-1.0, 1.0])

    def test_reconstruction(self):
        rng = np.random.default_rng(4)
        a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        h = (a + a.conj().T) / 2
        w, v = hermitian_eigensystem(h)
        assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - h)) < 1e-8
        assert np.max(np.abs(v.conj().T @ v - np.eye(8))) < 1e-8
        assert np.all(np.diff(w) >= 0)

    def test_non_square_raises(self):
        with pytest.raises(ShapeError):
            hermitian_eigensystem(np.ones((2, 3)))


class TestPartialTrace:
    def test_product_state(self):
        rng = np.random.default_rng(5)
        coin = random_density(rng, 2)
        pos = random_density(rng, 4)
        full = DensityOperator(np.kron(coin.matrix, pos.matrix), (2, 4))
        assert np.max(np.abs(partial_trace(full, "coin").matrix - coin.matrix)) < 1e-12
        assert np.max(np.abs(partial_trace(full, "position").matrix - pos.matrix)) < 1e-12

    def test_bell_like_reduction(self):
        # (|0,0> + |1,2>)/sqrt(2) over a 3-site lattice
        v = np.zeros(6, dtype=complex)
        v[0] = v[5] = 1 / np.sqrt(2)
        rho = DensityOperator.from_pure(v, (2, 3))
        assert np.max(np.abs(partial_trace(rho, "coin").matrix - np.eye(2) / 2)) < 1e-12

    def test_schmidt_spectra_agree(self):
        rng = np.random.default_rng(6)
        rho = random_pure(rng, 8, dims=(2, 4))
        wc = np.linalg.eigvalsh(partial_trace(rho, "coin").matrix)
        wp = np.linalg.eigvalsh(partial_trace(rho, "position").matrix)
        # nonzero spectra of the two reductions coincide for a pure state
        assert np.max(np.abs(np.sort(wc)[::-1][:2] - np.sort(wp)[::-1][:2])) < 1e-10

    def test_trace_preserving_and_linear(self):
        rng = np.random.default_rng(7)
        r1 = random_density(rng, 8, (2, 4))
        r2 = random_density(rng, 8, (2, 4))
        lam = 0.3
        mix = DensityOperator(lam * r1.matrix + (1 - lam) * r2.matrix, (2, 4))
        for keep in ("coin", "position"):
            red = partial_trace(mix, keep)
            assert abs(np.trace(red.matrix) - 1.0) < 1e-12
            combo = lam * partial_trace(r1, keep).matrix + (1 - lam) * partial_trace(r2, keep).matrix
            assert np.max(np.abs(red.matrix - combo)) < 1e-12

    def test_invalid_selector(self):
        rng = np.random.default_rng(8)
        with pytest.raises(UsageError):
            partial_trace(random_density(rng, 4, (2, 2)), "environment")


class TestTraceDistance:
    def test_identical_states(self):
        rng = np.random.default_rng(9)
        rho = random_density(rng, 3, (3, 1))
        assert trace_norm_distance(rho, rho) == 0.0

    def test_orthogonal_pure_states(self):
        plus = DensityOperator.from_pure(np.array([1, 1]) / np.sqrt(2), (2, 1))
        minus = DensityOperator.from_pure(np.array([1, -1]) / np.sqrt(2), (2, 1))
        assert abs(trace_norm_distance(plus, minus) - 1.0) < 1e-12

    def test_matches_eigen_sum(self):
        rng = np.random.default_rng(10)
        r1, r2 = random_density(rng, 2), random_density(rng, 2)
        w = np.linalg.eigvalsh(r1.matrix - r2.matrix)
        assert abs(trace_norm_distance(r1, r2) - 0.5 * np.sum(np.abs(w))) < 1e-10

    def test_metric_properties(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            a, b, c = (random_density(rng, 4, (4, 1)) for _ in range(3))
            dab = trace_norm_distance(a, b)
            assert abs(dab - trace_norm_distance(b, a)) < 1e-9
            assert -1e-12 <= dab <= 1.0 + 1e-12
            assert dab <= trace_norm_distance(a, c) + trace_norm_distance(c, b) + 1e-9

    def test_dimension_mismatch(self):
        rng = np.random.default_rng(12)
        with pytest.raises(ShapeError):
            trace_norm_distance(random_density(rng, 2), random_density(rng, 3, (3, 1)))


class TestEntropy:
    def test_pure_state(self):
        rng = np.random.default_rng(13)
        assert abs(von_neumann_entropy(random_pure(rng, 5, (5, 1)))) < 1e-10

    def test_maximally_mixed_qubit(self):
        assert abs(von_neumann_entropy(DensityOperator(np.eye(2) / 2)) - 1.0) < 1e-12

    def test_two_level_scalar(self):
        rho = DensityOperator(np.diag([0.25, 0.75]).astype(complex))
        assert abs(von_neumann_entropy(rho) - 0.8112781244591328) < 1e-12

    def test_additive_on_products(self):
        rng = np.random.default_rng(14)
        for _ in range(10):
            a = random_density(rng, 2)
            b = random_density(rng, 3, (3, 1))
            ab = DensityOperator(np.kron(a.matrix, b.matrix), (2, 3))
            total = von_neumann_entropy(a) + von_neumann_entropy(b)
            assert abs(von_neumann_entropy(ab) - total) < 1e-9

    def test_rejects_badly_negative_spectrum(self):
        m = np.diag([1.2, -0.2]).astype(complex)
        with pytest.raises(IntegrityError):
            von_neumann_entropy(DensityOperator(m))


class TestDensityOperator:
    def test_validate_accepts_good_state(self):
        rng = np.random.default_rng(15)
        random_density(rng, 6, (2, 3)).validate()

    def test_validate_rejects_trace(self):
        with pytest.raises(IntegrityError):
            DensityOperator(np.eye(2)).validate()

    def test_validate_rejects_non_hermitian(self):
        m = np.array([[0.5, 0.1], [0.3, 0.5]], dtype=complex)
        with pytest.raises(IntegrityError):
            DensityOperator(m).validate()

    def test_validate_rejects_negative_eigenvalue(self):
        m = np.diag([1.0 + 1e-6, -1e-6]).astype(complex)
        with pytest.raises(IntegrityError):
            DensityOperator(m).validate()
        DensityOperator(m).validate(check_positivity=False)

    def test_purity_of_pure_state(self):
        rng = np.random.default_rng(16)
        assert abs(purity(random_pure(rng, 4, (4, 1))) - 1.0) < 1e-12

    def test_dims_must_factor(self):
        with pytest.raises(ShapeError):
            DensityOperator(np.eye(4) / 4, (2, 3))
