"""Problem instances and the two families of interpolating Hamiltonians.

Algorithm 1 uses ``H(s) = A(s)^2 - A(s)|bb><bb|A(s)`` with
``A(s) = (1-s) Z(x)I + s X(x)A`` and ``|bb> = |+>|b>``; its zero mode moves
from ``|->|b>`` to ``|+>|x>``. Algorithm 2 uses the gap-amplified
``H'(s) = sigma+ (x) A(s)P + sigma- (x) P A(s)`` with ``P = I - |bb><bb|``,
whose nonzero spectrum is ``+-sqrt`` of the nonzero spectrum of ``H(s)``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import densela
from .densela import SingularMatrixError, ZERO_TOL, hermitian

log = logging.getLogger(__name__)

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)
KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)
# sigma+ = (X + iY)/2 = |0><1|
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.T.copy()


class NullityError(ValueError):
    pass


@dataclass(frozen=True)
class ProblemInstance:
    A_raw: np.ndarray
    A: np.ndarray
    b: np.ndarray
    kappa: float
    variant: str
    scale: float
    kappa_computed: float
    b_renormalized: bool = False
    expression: str | None = None
    bbar: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "bbar", np.kron(PLUS, self.b))

    @property
    def n(self) -> int:
        """Dimension N of the linear system."""
        return len(self.b)

    @property
    def n_ancilla(self) -> int:
        return 1 if self.variant == "alg1" else 2

    def summary(self) -> dict:
        return {
            "expression": self.expression,
            "dimension": self.n,
            "variant": self.variant,
            "kappa": self.kappa,
            "kappa_computed": self.kappa_computed,
            "scale": self.scale,
            "b": [[z.real, z.imag] for z in self.b.tolist()],
            "b_renormalized": self.b_renormalized,
        }


def normalize_instance(A_raw, b, variant: str = "alg1", *, kappa_override: float | None = None,
                       expression: str | None = None) -> ProblemInstance:
    """Rescale ``A_raw`` to unit spectral norm and ``b`` to unit length.

    The solution direction ``A^-1 b`` is unchanged by both rescalings; the
    spectral normalization is what makes the gap bound hold.
    """
    if variant not in ("alg1", "alg2"):
        raise ValueError(f"unknown variant {variant!r}")
    A_raw = hermitian(A_raw)
    b = np.asarray(b, dtype=complex)
    if b.ndim != 1 or len(b) != A_raw.shape[0]:
        raise ValueError(f"b has shape {b.shape}, expected ({A_raw.shape[0]},)")
    n = len(b)
    if n < 2 or n & (n - 1):
        raise ValueError(f"system dimension {n} is not a power of two >= 2")
    bnorm = np.linalg.norm(b)
    if bnorm <= 1e-300:
        raise ValueError("b is the zero vector")
    renorm = bool(abs(bnorm - 1.0) > 1e-10)
    if renorm:
        log.warning("b has norm %.6g; normalizing", bnorm)
    scale = densela.spectral_norm(A_raw)
    if scale == 0.0:
        raise SingularMatrixError("A is the zero matrix")
    A = hermitian(A_raw / scale)
    kappa = densela.condition_number(A)
    used = kappa if kappa_override is None else float(kappa_override)
    if used < 1.0:
        raise ValueError(f"kappa override must be >= 1, got {used}")
    return ProblemInstance(A_raw, A, densela.state(b / bnorm), used, variant, scale, kappa,
                           renorm, expression)


def embed_b(b) -> np.ndarray:
    return np.kron(PLUS, np.asarray(b, dtype=complex))


def A_of_s(s: float, inst: ProblemInstance) -> np.ndarray:
    n = inst.n
    return (1.0 - s) * np.kron(Z, np.eye(n)) + s * np.kron(X, inst.A)


def H_of_s(s: float, inst: ProblemInstance) -> np.ndarray:
    a = A_of_s(s, inst)
    ab = a @ inst.bbar
    return hermitian(a @ a - np.outer(ab, ab.conj()))


def Hprime_of_s(s: float, inst: ProblemInstance) -> np.ndarray:
    a = A_of_s(s, inst)
    perp = np.eye(2 * inst.n) - np.outer(inst.bbar, inst.bbar.conj())
    return hermitian(np.kron(SIGMA_PLUS, a @ perp) + np.kron(SIGMA_MINUS, perp @ a))


def hamiltonian(s: float, inst: ProblemInstance) -> np.ndarray:
    """The Hamiltonian the instance's algorithm evolves under."""
    return H_of_s(s, inst) if inst.variant == "alg1" else Hprime_of_s(s, inst)


def initial_state(inst: ProblemInstance) -> np.ndarray:
    psi = np.kron(MINUS, inst.b)
    if inst.variant == "alg2":
        psi = np.kron(KET0, psi)
    return densela.state(psi)


def expected_nullity(inst: ProblemInstance) -> int:
    return 1 if inst.variant == "alg1" else 2


@dataclass(frozen=True)
class GroundSpace:
    energy: float
    basis: np.ndarray
    gap: float
    eigensystem: densela.EigenSystem

    @property
    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T


def ground_space(h, expected_nullity: int, es: densela.EigenSystem | None = None) -> GroundSpace:
    """Null space of ``h`` (zero threshold relative to its spectral norm) and its gap."""
    es = es if es is not None else densela.eigh(h)
    basis, nonzero = densela.null_space(h, es)
    if basis.shape[1] != expected_nullity:
        raise NullityError(
            f"expected nullity {expected_nullity}, found {basis.shape[1]} "
            f"(eigenvalues nearest zero: {np.sort(np.abs(es.values))[:3]})"
        )
    w0 = es.values[np.abs(es.values) <= ZERO_TOL * np.max(np.abs(es.values))]
    gap = float(np.min(np.abs(nonzero))) if nonzero.size else float("inf")
    return GroundSpace(float(np.max(np.abs(w0))), basis, gap, es)


def target_state(inst: ProblemInstance, x) -> np.ndarray:
    """Ideal final register state: ``|+>|x>`` (alg1) or ``|0>|+>|x>`` (alg2)."""
    psi = np.kron(PLUS, np.asarray(x, dtype=complex))
    if inst.variant == "alg2":
        psi = np.kron(KET0, psi)
    return psi


def postselect_projector(inst: ProblemInstance) -> np.ndarray:
    """Projector onto the ancilla outcome that heralds the solution register."""
    p = np.outer(PLUS, PLUS.conj())
    if inst.variant == "alg2":
        p = np.kron(np.outer(KET0, KET0), p)
    return np.kron(p, np.eye(inst.n))
