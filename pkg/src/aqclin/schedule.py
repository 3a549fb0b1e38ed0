"""Annealing parametrization s(v), gap lower bound and discretized evolution grids."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_STEPS = 300
VARIANTS = ("alg1", "alg2")
PARAMETRIZATIONS = ("natural", "linear")


def _rate(kappa: float) -> float:
    # exponent scale sqrt(1+k^2)/(sqrt(2) k)
    return math.sqrt(1.0 + kappa * kappa) / (math.sqrt(2.0) * kappa)


def _check_kappa(kappa: float) -> float:
    kappa = float(kappa)
    if not math.isfinite(kappa) or kappa < 1.0:
        raise ValueError(f"condition number must be >= 1, got {kappa}")
    return kappa


def schedule_bounds(kappa: float) -> tuple[float, float]:
    """Domain ``(v_a, v_b)`` of the natural parametrization."""
    kappa = _check_kappa(kappa)
    root = math.sqrt(1.0 + kappa * kappa)
    # k*sqrt(1+k^2) - k^2 written without cancellation
    va = math.log(kappa / (root + kappa)) / _rate(kappa)
    vb = math.log(root + 1.0) / _rate(kappa)
    return va, vb


def s_of_v(v: float, kappa: float) -> float:
    kappa = _check_kappa(kappa)
    va, vb = schedule_bounds(kappa)
    slack = 1e-12 * max(1.0, abs(va), abs(vb))
    if not (va - slack <= v <= vb + slack):
        raise ValueError(f"v = {v} outside [{va}, {vb}] for kappa = {kappa}")
    c = _rate(kappa)
    k2 = kappa * kappa
    s = (math.exp(v * c) + 2.0 * k2 - k2 * math.exp(-v * c)) / (2.0 * (1.0 + k2))
    return min(max(s, 0.0), 1.0)


def gap_bound(s, kappa: float):
    """Lower bound ``(1-s)^2 + (s/kappa)^2`` on the gap of H(s); accepts arrays."""
    return (1.0 - s) ** 2 + (s / kappa) ** 2


def max_time(gap, variant: str):
    if variant == "alg1":
        return 2.0 * np.pi / gap
    if variant == "alg2":
        return 2.0 * np.pi / np.sqrt(gap)
    raise ValueError(f"unknown variant {variant!r}")


@dataclass(frozen=True)
class Schedule:
    kappa: float
    q: int
    variant: str
    parametrization: str
    v: np.ndarray
    s: np.ndarray
    gap: np.ndarray
    t_max: np.ndarray

    def __len__(self):
        return self.q

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "q": self.q,
            "variant": self.variant,
            "parametrization": self.parametrization,
            "v": self.v.tolist(),
            "s": self.s.tolist(),
            "gap_bound": self.gap.tolist(),
            "t_max": self.t_max.tolist(),
        }


def build_grid(kappa: float, q: int = DEFAULT_STEPS, variant: str = "alg1",
               parametrization: str = "natural") -> Schedule:
    """Right-endpoint grid of ``q`` steps, so the last step sits exactly at s = 1.

    ``parametrization="linear"`` is the plain interpolation baseline: s_j = j/q
    and v_j = s_j.
    """
    kappa = _check_kappa(kappa)
    q = int(q)
    if q < 1:
        raise ValueError("q must be >= 1")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    j = np.arange(1, q + 1)
    if parametrization == "natural":
        va, vb = schedule_bounds(kappa)
        v = va + j * (vb - va) / q
        v[-1] = vb
        s = np.array([s_of_v(x, kappa) for x in v])
    elif parametrization == "linear":
        s = j / q
        v = s.copy()
    else:
        raise ValueError(f"unknown parametrization {parametrization!r}")
    s[-1] = 1.0
    gap = gap_bound(s, kappa)
    t_max = max_time(gap, variant)
    for a in (v, s, gap, t_max):
        a.setflags(write=False)
    return Schedule(kappa, q, variant, parametrization, v, s, gap, t_max)
