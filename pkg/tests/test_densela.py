import numpy as np
import pytest

from aqclin import densela
from aqclin.pauli_expr import parse, to_matrix

from conftest import random_density, random_hermitian

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]])
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0])
KET0 = np.array([1.0, 0.0])
KET1 = np.array([0.0, 1.0])


def test_kron():
    np.testing.assert_array_equal(densela.kron(I2, I2), np.eye(4))
    np.testing.assert_array_equal(densela.kron(Z, I2), np.diag([1, 1, -1, -1]))
    np.testing.assert_array_equal(densela.kron(X, Y), to_matrix(parse("XY")))


def test_hermitian_certification():
    with pytest.raises(ValueError, match="not Hermitian"):
        densela.hermitian([[0, 1], [0, 0]])
    with pytest.raises(ValueError, match="square"):
        densela.hermitian(np.zeros((2, 3)))
    h = densela.hermitian(Z)
    assert not h.flags.writeable


def test_eigh_small_cases():
    es = densela.eigh(np.diag([1.0, -1.0]))
    np.testing.assert_array_equal(es.values, [-1, 1])
    es = densela.eigh(X)
    np.testing.assert_allclose(es.values, [-1, 1])
    np.testing.assert_allclose(es.vectors[:, 0], [1 / np.sqrt(2), -1 / np.sqrt(2)])
    np.testing.assert_allclose(es.vectors[:, 1], [1 / np.sqrt(2), 1 / np.sqrt(2)])


def test_eigh_instance_one_spectrum():
    w = densela.eigh(to_matrix(parse("(3III+XII-2XYI+3XYZ)/4"))).values
    np.testing.assert_allclose(w, [-0.75, -0.25, 0.25, 0.75, 0.75, 1.25, 1.75, 2.25], atol=1e-12)


def test_instance_one_block_argument():
    # A = (3I + X (x) M)/4 with M = I - 2YI + 3YZ; X(x)M has eigenvalues +-eig(M)
    m = to_matrix(parse("II-2YI+3YZ"))
    mu = np.linalg.eigvalsh(m)
    expected = np.sort(np.concatenate([(3 + mu) / 4, (3 - mu) / 4]))
    w = densela.eigh(to_matrix(parse("(3III+XII-2XYI+3XYZ)/4"))).values
    np.testing.assert_allclose(w, expected, atol=1e-12)


@pytest.mark.parametrize("dim", [1, 2, 5, 16, 32])
def test_eigh_reconstruction(rng, dim):
    h = random_hermitian(rng, dim)
    w, v = densela.eigh(h)
    nrm = np.max(np.abs(w))
    assert np.all(np.diff(w) >= 0)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(dim), atol=1e-10)
    np.testing.assert_allclose((v * w) @ v.conj().T, h, atol=1e-9 * nrm)
    for k in range(dim):
        assert np.linalg.norm(h @ v[:, k] - w[k] * v[:, k]) <= 1e-10 * nrm


def test_degenerate_basis_depends_only_on_subspace(rng):
    q, _ = np.linalg.qr(rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)))
    basis = q[:, :3]
    u, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    b1 = densela._canonical_basis(basis)
    b2 = densela._canonical_basis(basis @ u)
    np.testing.assert_allclose(b1, b2, atol=1e-12)
    np.testing.assert_allclose(b1.conj().T @ b1, np.eye(3), atol=1e-12)


def test_eigh_phase_convention(rng):
    w = np.array([0.0, 0.0, 1.0, 2.0, 2.0, 3.0])
    q, _ = np.linalg.qr(rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)))
    h = (q * w) @ q.conj().T
    v = densela.eigh((h + h.conj().T) / 2).vectors
    for k in range(6):
        first = np.flatnonzero(np.abs(v[:, k]) > 1e-8)[0]
        assert abs(v[first, k].imag) < 1e-12 and v[first, k].real > 0


def test_eigh_reports_convergence_failure(monkeypatch):
    def boom(_):
        raise np.linalg.LinAlgError("no convergence")

    monkeypatch.setattr(np.linalg, "eigh", boom)
    with pytest.raises(densela.EigenConvergenceError):
        densela.eigh(Z)


def test_expm_unitary():
    np.testing.assert_allclose(densela.expm_unitary(Z, 0.0), np.eye(2))
    np.testing.assert_allclose(densela.expm_unitary(Z, np.pi), -np.eye(2), atol=1e-15)


def test_expm_unitary_properties(rng):
    h = random_hermitian(rng, 8)
    u = densela.expm_unitary(h, 0.7)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(8), atol=1e-9)
    np.testing.assert_allclose(u @ densela.expm_unitary(h, -0.7), np.eye(8), atol=1e-9)
    np.testing.assert_allclose(
        densela.expm_unitary(h, 1.1), densela.expm_unitary(h, 0.4) @ densela.expm_unitary(h, 0.7),
        atol=1e-9,
    )


def test_condition_number_and_norm():
    a1 = to_matrix(parse("(3III+XII-2XYI+3XYZ)/4"))
    assert densela.condition_number(np.eye(4)) == pytest.approx(1)
    assert densela.condition_number(a1) == pytest.approx(9, abs=1e-10)
    assert densela.condition_number(np.diag([2.0, -1.0])) == pytest.approx(2)
    assert densela.spectral_norm(np.eye(3)) == pytest.approx(1)
    assert densela.spectral_norm(a1) == pytest.approx(9 / 4)
    assert densela.spectral_norm(Z) == pytest.approx(1)
    with pytest.raises(densela.SingularMatrixError):
        densela.condition_number(np.diag([1.0, 0.0]))


@pytest.mark.parametrize("c", [-3.0, 0.1, 7.5])
def test_condition_number_scale_invariant(rng, c):
    h = random_hermitian(rng, 6)
    assert densela.condition_number(c * h) == pytest.approx(densela.condition_number(h), rel=1e-10)


def test_partial_trace_examples():
    rho00 = np.zeros((4, 4))
    rho00[0, 0] = 1
    np.testing.assert_array_equal(densela.partial_trace(rho00, [2, 2], keep=[1]), np.diag([1, 0]))
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    rho = np.outer(bell, bell)
    for keep in ([0], [1]):
        np.testing.assert_allclose(densela.partial_trace(rho, [2, 2], keep), np.eye(2) / 2)
    with pytest.raises(ValueError):
        densela.partial_trace(rho, [2, 3], [0])


def test_partial_trace_of_product_state(rng):
    a = random_density(rng, 2)
    b = random_density(rng, 4)
    c = random_density(rng, 2)
    rho = np.kron(np.kron(a, b), c)
    np.testing.assert_allclose(densela.partial_trace(rho, [2, 4, 2], [1]), b, atol=1e-14)
    np.testing.assert_allclose(densela.partial_trace(rho, [2, 4, 2], [0, 2]), np.kron(a, c),
                               atol=1e-14)


def test_partial_trace_preserves_trace(rng):
    rho = random_density(rng, 8)
    for keep in ([0], [1, 2], [0, 2], []):
        red = densela.partial_trace(rho, [2, 2, 2], keep)
        assert np.trace(red).real == pytest.approx(1, abs=1e-12)
        densela.density_matrix(red)


def test_project_postselect():
    p0 = np.outer(KET0, KET0)
    plus = np.array([1, 1]) / np.sqrt(2)
    psi, prob = densela.project_postselect(plus, p0)
    np.testing.assert_allclose(psi, KET0)
    assert prob == pytest.approx(0.5)
    psi, prob = densela.project_postselect(KET0, p0)
    assert prob == pytest.approx(1)
    with pytest.raises(densela.PostselectionError):
        densela.project_postselect(KET1, p0)
    with pytest.raises(ValueError, match="idempotent"):
        densela.project_postselect(KET0, 2 * p0)


def test_state_and_density_validation():
    with pytest.raises(ValueError):
        densela.state([1.0, 1.0])
    with pytest.raises(ValueError, match="trace"):
        densela.density_matrix(np.eye(2))
    with pytest.raises(ValueError, match="negative"):
        densela.density_matrix(np.diag([1.5, -0.5]))
