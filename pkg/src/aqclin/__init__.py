"""Classical simulator for adiabatic-inspired quantum linear-system solvers."""
from .evolve import oracle_solve, run_channel, run_trajectory
from .hamiltonian import normalize_instance
from .pauli_expr import PauliExpr, parse, to_matrix
from .schedule import build_grid

__version__ = "0.1.0"

__all__ = [
    "PauliExpr",
    "build_grid",
    "normalize_instance",
    "oracle_solve",
    "parse",
    "run_channel",
    "run_trajectory",
    "to_matrix",
]
