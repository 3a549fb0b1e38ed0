"""Dense complex linear algebra on small Hermitian matrices.

Everything derives from one primitive, :func:`eigh`. Matrices are plain
numpy arrays; the ``hermitian``/``state``/``density_matrix`` constructors
validate and return read-only copies.
"""
from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

# relative to the spectral norm, used for every zero/nonzero classification
ZERO_TOL = 1e-10
MAX_DIM = 2**12


class SingularMatrixError(ValueError):
    pass


class EigenConvergenceError(RuntimeError):
    pass


class PostselectionError(ValueError):
    """Post-selection outcome has (numerically) zero probability."""

    def __init__(self, probability: float):
        self.probability = probability
        super().__init__(f"post-selection probability {probability:.3e} is below 1e-14")


class EigenSystem(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def _square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] > MAX_DIM:
        raise ValueError(f"dimension {m.shape[0]} exceeds the cap {MAX_DIM}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def hermitian(m) -> np.ndarray:
    """Certify ``m`` Hermitian (to 1e-12 relative) and return an exactly Hermitian copy."""
    m = _square(m)
    dev = np.max(np.abs(m - m.conj().T), initial=0.0)
    if dev > 1e-12 * (1.0 + np.max(np.abs(m), initial=0.0)):
        raise ValueError(f"matrix is not Hermitian (max |M - M^H| = {dev:.3e})")
    return _frozen((m + m.conj().T) / 2)


def state(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1:
        raise ValueError("state must be a vector")
    if abs(np.linalg.norm(v) - 1.0) > 1e-10:
        raise ValueError(f"state is not normalized (norm {np.linalg.norm(v)})")
    return _frozen(v)


def density_matrix(rho) -> np.ndarray:
    rho = hermitian(rho)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > 1e-10:
        raise ValueError(f"density matrix trace is {tr}, expected 1")
    lo = np.linalg.eigvalsh(rho)[0]
    if lo < -1e-10:
        raise ValueError(f"density matrix has negative eigenvalue {lo:.3e}")
    return rho


def pure_density(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(*ms) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for m in ms:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


def fix_phase(v: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Rotate ``v`` so its first component above ``tol`` (relative) is real positive."""
    v = np.asarray(v, dtype=complex)
    mags = np.abs(v)
    idx = np.flatnonzero(mags > tol * max(mags.max(initial=0.0), 1e-300))
    if idx.size == 0:
        return v.copy()
    c = v[idx[0]]
    return v * (abs(c) / c)


def _canonical_basis(vecs: np.ndarray) -> np.ndarray:
    # basis of span(vecs) that depends only on the subspace: Gram-Schmidt of P e_i
    k = vecs.shape[1]
    if k == 1:
        return fix_phase(vecs[:, 0])[:, None]
    proj = vecs @ vecs.conj().T
    chosen = []
    for i in range(proj.shape[0]):
        u = proj[:, i].copy()
        for w in chosen:
            u -= w * np.vdot(w, u)
        nrm = np.linalg.norm(u)
        if nrm > 1e-6:
            chosen.append(fix_phase(u / nrm))
            if len(chosen) == k:
                break
    return np.column_stack(chosen)


def eigh(h) -> EigenSystem:
    """Ascending eigenvalues and orthonormal eigenvectors with deterministic phases.

    Eigenvalues closer than ``ZERO_TOL`` times the spectral norm are treated as
    one degenerate cluster whose basis is canonicalized from its projector, so
    the returned vectors do not depend on LAPACK's arbitrary choice.
    """
    h = np.asarray(h, dtype=complex)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise EigenConvergenceError(f"eigendecomposition did not converge: {exc}") from exc
    tol = ZERO_TOL * max(np.max(np.abs(w), initial=0.0), 1e-300)
    out = np.empty_like(v)
    start = 0
    n = len(w)
    while start < n:
        stop = start + 1
        while stop < n and w[stop] - w[stop - 1] <= tol:
            stop += 1
        out[:, start:stop] = _canonical_basis(v[:, start:stop])
        start = stop
    return EigenSystem(w, out)


def expm_unitary(h, t: float, es: EigenSystem | None = None) -> np.ndarray:
    """``exp(-i h t)`` via the eigendecomposition of ``h``."""
    w, v = es if es is not None else eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def spectral_norm(h) -> float:
    return float(np.max(np.abs(eigh(h).values), initial=0.0))


def condition_number(h) -> float:
    mags = np.abs(eigh(h).values)
    if mags.min() <= ZERO_TOL * mags.max():
        raise SingularMatrixError(
            f"matrix is singular: min |eigenvalue| {mags.min():.3e}, max {mags.max():.3e}"
        )
    return float(mags.max() / mags.min())


def null_space(h, es: EigenSystem | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Split an eigensystem into (null vectors, nonzero eigenvalues)."""
    w, v = es if es is not None else eigh(h)
    tol = ZERO_TOL * max(np.max(np.abs(w), initial=0.0), 1e-300)
    zero = np.abs(w) <= tol
    return v[:, zero], w[~zero]


def partial_trace(rho, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Reduce ``rho`` to the subsystems in ``keep`` (0-based, order preserved)."""
    rho = np.asarray(rho, dtype=complex)
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != rho.shape[0]:
        raise ValueError(f"subsystem dims {dims} do not match matrix dimension {rho.shape[0]}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {len(dims)} subsystems")
    n = len(dims)
    t = rho.reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    if 2 * n > len(letters):
        raise ValueError("too many subsystems")
    row = list(letters[:n])
    col = [row[i] if i not in keep else letters[n + i] for i in range(n)]
    out = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    reduced = np.einsum("".join(row) + "".join(col) + "->" + out, t)
    d = int(np.prod([dims[k] for k in keep])) if keep else 1
    return reduced.reshape(d, d)


def project_postselect(psi, projector) -> tuple[np.ndarray, float]:
    p = np.asarray(projector, dtype=complex)
    if np.max(np.abs(p @ p - p)) > 1e-10:
        raise ValueError("projector is not idempotent")
    phi = p @ np.asarray(psi, dtype=complex)
    prob = float(np.vdot(phi, phi).real)
    if prob < 1e-14:
        raise PostselectionError(prob)
    return phi / np.sqrt(prob), min(prob, 1.0)
