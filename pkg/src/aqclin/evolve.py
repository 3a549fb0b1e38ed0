"""Randomized-time evolution: seeded pure-state trajectories and the exact averaged channel.

Each step holds the Hamiltonian fixed at ``s_j`` and evolves for a time drawn
uniformly from ``[0, t_max_j]``. Trajectory mode samples those times from
``numpy.random.Generator(PCG64(seed))`` (one draw per step, in step order).
Channel mode applies the expectation over the draw exactly: in the eigenbasis
of ``H_j`` the density-matrix element ``(a, b)`` is multiplied by
``phi((l_a - l_b) t_max_j)`` with ``phi(x) = (1 - exp(-ix)) / (ix)``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import densela, hamiltonian as ham
from .densela import PostselectionError
from .hamiltonian import ProblemInstance
from .schedule import Schedule

SEED_MAX = 2**64 - 1


@dataclass(frozen=True)
class StepSpectrum:
    s: float
    eig: densela.EigenSystem
    ground: np.ndarray
    e1: float


@dataclass
class StepRecord:
    step: int
    v: float
    s: float
    t_drawn: float | None
    t_max: float
    energy: float
    e0: float
    e1: float
    ground_fidelity: float


@dataclass
class RunReport:
    mode: str
    seed: int | None
    instance: dict
    schedule: Schedule
    steps: list[StepRecord]
    final_state: np.ndarray
    x_oracle: np.ndarray
    status: str = "ok"
    solution: np.ndarray | None = None
    success_probability: float = 0.0
    solution_fidelity: float | None = None
    traced_fidelity: float | None = None
    error: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_dict(self) -> dict:
        """JSON-ready summary (per-step records are left to the CSV writer)."""
        final = self.final_state
        return {
            "mode": self.mode,
            "seed": self.seed,
            "status": self.status,
            "error": self.error,
            "success_probability": self.success_probability,
            "solution_fidelity": self.solution_fidelity,
            "traced_fidelity": self.traced_fidelity,
            "final_ground_fidelity": self.steps[-1].ground_fidelity if self.steps else None,
            "solution": complex_list(self.solution),
            "final_state": {
                "kind": "vector" if final.ndim == 1 else "density_matrix",
                "shape": list(final.shape),
                "data": complex_list(final.ravel()),
            },
        }


def complex_list(a) -> list | None:
    if a is None:
        return None
    return [[float(z.real), float(z.imag)] for z in np.asarray(a, dtype=complex).ravel()]


def fix_phase_largest(x) -> np.ndarray:
    """Rotate ``x`` so its largest-magnitude component is real positive.

    Near-ties (within 1e-6 relative) go to the lowest index so rounding noise
    cannot flip the choice.
    """
    x = np.asarray(x, dtype=complex)
    mags = np.abs(x)
    top = mags.max(initial=0.0)
    if top == 0.0:
        return x.copy()
    k = int(np.flatnonzero(mags >= top * (1 - 1e-6))[0])
    return x * (abs(x[k]) / x[k])


def oracle_solve(inst: ProblemInstance) -> np.ndarray:
    """Normalized ``A^-1 b`` from the eigendecomposition of A."""
    w, v = densela.eigh(inst.A)
    if np.min(np.abs(w)) <= densela.ZERO_TOL * np.max(np.abs(w)):
        raise densela.SingularMatrixError("A is singular")
    x = v @ ((v.conj().T @ inst.b) / w)
    return fix_phase_largest(x / np.linalg.norm(x))


def fidelity_mixed(rho, sigma) -> float:
    """Normalized overlap ``tr(rho sigma) / sqrt(tr rho^2 tr sigma^2)``."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    p1 = np.vdot(rho, rho).real
    p2 = np.vdot(sigma, sigma).real
    if p1 <= 0.0 or p2 <= 0.0:
        raise ValueError("zero-purity input")
    return float(np.vdot(rho, sigma).real / math.sqrt(p1 * p2))


def energy(st, h) -> float:
    """``<psi|H|psi>`` for a vector or ``tr(rho H)`` for a density matrix."""
    st = np.asarray(st, dtype=complex)
    h = np.asarray(h, dtype=complex)
    if st.ndim == 1:
        val = np.vdot(st, h @ st)
    else:
        val = np.trace(st @ h)
    return float(val.real)


def phi(x):
    """``(1 - exp(-ix)) / (ix)``, continuous at 0."""
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5j * x) * np.sinc(x / (2 * np.pi))


def step_spectra(inst: ProblemInstance, sched: Schedule) -> list[StepSpectrum]:
    """Diagonalize the Hamiltonian at every grid point (reusable across seeds)."""
    if sched.variant != inst.variant:
        raise ValueError(f"schedule is for {sched.variant}, instance for {inst.variant}")
    nullity = ham.expected_nullity(inst)
    out = []
    for s in sched.s:
        h = ham.hamiltonian(float(s), inst)
        gs = ham.ground_space(h, nullity)
        w = gs.eigensystem.values
        tol = densela.ZERO_TOL * np.max(np.abs(w))
        e1 = float(np.min(w[w > tol]))
        out.append(StepSpectrum(float(s), gs.eigensystem, gs.basis, e1))
    return out


def sample_times(sched: Schedule, seed: int) -> np.ndarray:
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.uniform(0.0, np.asarray(sched.t_max))


def _record(j, sched, sp, t, energy_val, pop) -> StepRecord:
    return StepRecord(
        step=j + 1,
        v=float(sched.v[j]),
        s=float(sched.s[j]),
        t_drawn=None if t is None else float(t),
        t_max=float(sched.t_max[j]),
        energy=energy_val,
        e0=0.0,
        e1=sp.e1,
        ground_fidelity=pop,
    )


def run_trajectory(inst: ProblemInstance, sched: Schedule, seed: int, *,
                   spectra: Sequence[StepSpectrum] | None = None,
                   times: Sequence[float] | None = None,
                   psi0=None) -> RunReport:
    """One randomized trajectory. ``times`` overrides the seeded draws (testing hook)."""
    spectra = step_spectra(inst, sched) if spectra is None else spectra
    if times is None:
        times = sample_times(sched, seed)
    times = np.asarray(times, dtype=float)
    if len(times) != sched.q or len(spectra) != sched.q:
        raise ValueError("times/spectra do not match the schedule length")
    psi = np.array(ham.initial_state(inst) if psi0 is None else psi0, dtype=complex)
    steps = []
    for j, sp in enumerate(spectra):
        w, v = sp.eig
        c = np.exp(-1j * w * times[j]) * (v.conj().T @ psi)
        psi = v @ c
        pops = np.abs(c) ** 2
        g = sp.ground.conj().T @ psi
        steps.append(_record(j, sched, sp, times[j], float(pops @ w),
                             float(np.vdot(g, g).real)))
    return _finish("trajectory", int(seed), inst, sched, steps, psi)


def run_channel(inst: ProblemInstance, sched: Schedule, *,
                spectra: Sequence[StepSpectrum] | None = None, rho0=None) -> RunReport:
    """Deterministic expectation of :func:`run_trajectory` over the random times."""
    spectra = step_spectra(inst, sched) if spectra is None else spectra
    if rho0 is None:
        rho = densela.pure_density(ham.initial_state(inst))
    else:
        rho = np.array(rho0, dtype=complex)
    steps = []
    for j, sp in enumerate(spectra):
        w, v = sp.eig
        r = v.conj().T @ rho @ v
        r = r * phi(np.subtract.outer(w, w) * sched.t_max[j])
        rho = v @ r @ v.conj().T
        rho = (rho + rho.conj().T) / 2
        gb = sp.ground.conj().T @ rho @ sp.ground
        steps.append(_record(j, sched, sp, None, float(np.diagonal(r).real @ w),
                             float(np.trace(gb).real)))
    return _finish("channel", None, inst, sched, steps, rho)


def _finish(mode, seed, inst, sched, steps, final) -> RunReport:
    x = oracle_solve(inst)
    rep = RunReport(mode, seed, inst.summary(), sched, steps, final, x)
    rep.traced_fidelity = traced_fidelity(final, inst, x)
    try:
        sol, prob = extract_solution(final, inst)
    except PostselectionError as exc:
        rep.status = "postselection_failed"
        rep.success_probability = exc.probability
        rep.error = str(exc)
        return rep
    rep.solution = sol
    rep.success_probability = prob
    rep.solution_fidelity = solution_fidelity(final, inst, x)
    return rep


def _ancilla_ket(inst: ProblemInstance) -> np.ndarray:
    return ham.PLUS if inst.variant == "alg1" else np.kron(ham.KET0, ham.PLUS)


def postselected_register(final, inst: ProblemInstance):
    """Solution-register state after post-selecting the ancillas, and its probability.

    Returns a vector for pure input and a density matrix for mixed input.
    """
    final = np.asarray(final, dtype=complex)
    anc = _ancilla_ket(inst)
    n = inst.n
    if final.ndim == 1:
        phi_, prob = densela.project_postselect(final, ham.postselect_projector(inst))
        return anc.conj() @ phi_.reshape(len(anc), n), prob
    blocks = final.reshape(len(anc), n, len(anc), n)
    red = np.einsum("a,aibj,b->ij", anc.conj(), blocks, anc)
    prob = float(np.trace(red).real)
    if prob < 1e-14:
        raise PostselectionError(prob)
    return red / prob, min(prob, 1.0)


def extract_solution(final, inst: ProblemInstance) -> tuple[np.ndarray, float]:
    reg, prob = postselected_register(final, inst)
    if reg.ndim == 2:
        reg = densela.eigh(reg).vectors[:, -1]
    return fix_phase_largest(reg / np.linalg.norm(reg)), prob


def solution_fidelity(final, inst: ProblemInstance, x) -> float:
    reg, _ = postselected_register(final, inst)
    x = np.asarray(x, dtype=complex)
    if reg.ndim == 1:
        return float(abs(np.vdot(x, reg)) ** 2)
    return float(np.vdot(x, reg @ x).real)


def traced_register(final, inst: ProblemInstance) -> np.ndarray:
    """Solution-register density matrix with the ancillas traced out (no post-selection)."""
    final = np.asarray(final, dtype=complex)
    rho = densela.pure_density(final) if final.ndim == 1 else final
    dims = [2] * inst.n_ancilla + [inst.n]
    return densela.partial_trace(rho, dims, keep=[inst.n_ancilla])


def traced_fidelity(final, inst: ProblemInstance, x) -> float:
    return fidelity_mixed(traced_register(final, inst), densela.pure_density(x))


def record_rows(rep: RunReport) -> list[dict]:
    return [asdict(r) for r in rep.steps]
