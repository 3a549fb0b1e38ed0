"""Experiment configuration files and the shipped presets."""
from __future__ import annotations

import json
import os
from importlib import resources
from pathlib import Path
from typing import Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from . import pauli_expr
from .hamiltonian import ProblemInstance, normalize_instance
from .schedule import DEFAULT_STEPS

OUTPUT_ENV = "AQCLIN_OUTPUT_DIR"
PRESET_PACKAGE = "aqclin.presets"

# a complex scalar in a config file: 0.5, [re, im] or "0.5-0.1j"
Scalar = Union[float, tuple[float, float], str]


class ConfigError(ValueError):
    pass


class SeedRange(BaseModel):
    model_config = ConfigDict(extra="forbid")
    count: int = Field(ge=0)
    base: int = Field(default=0, ge=0, le=2**64 - 1)


def _complex(x) -> complex:
    if isinstance(x, str):
        return complex(x.replace(" ", ""))
    if isinstance(x, (tuple, list)):
        return complex(x[0], x[1])
    return complex(x)


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str | None = None
    matrix: Union[str, list[list[Scalar]]]
    b: Union[Literal["uniform"], list[Scalar]]
    algorithm: Literal[1, 2]
    steps: int = Field(default=DEFAULT_STEPS, ge=1)
    seeds: Union[list[int], SeedRange] = Field(default_factory=lambda: SeedRange(count=1))
    mode: Literal["trajectory", "channel", "both"] = "both"
    parametrization: Literal["natural", "linear"] = "natural"
    kappa_override: float | None = Field(default=None, ge=1.0)
    output_dir: str | None = None
    target_error: float | None = Field(default=None, gt=0.0, lt=1.0)

    @field_validator("seeds")
    @classmethod
    def _seed_range(cls, v):
        if isinstance(v, list):
            for s in v:
                if not 0 <= s <= 2**64 - 1:
                    raise ValueError(f"seed {s} is not an unsigned 64-bit integer")
            if len(set(v)) != len(v):
                raise ValueError("duplicate seeds")
        elif v.base + v.count - 1 > 2**64 - 1:
            raise ValueError("seed range exceeds 64 bits")
        return v

    @field_validator("matrix")
    @classmethod
    def _matrix_shape(cls, v):
        if isinstance(v, str):
            pauli_expr.parse(v)
            return v
        n = len(v)
        if n < 2 or n & (n - 1):
            raise ValueError(f"matrix dimension {n} is not a power of two >= 2")
        if any(len(row) != n for row in v):
            raise ValueError("matrix is not square")
        for row in v:
            for x in row:
                _complex(x)
        return v

    @model_validator(mode="after")
    def _consistent(self):
        if self.mode != "channel" and not self.seed_list():
            raise ValueError(f"mode {self.mode!r} needs at least one seed")
        if self.b != "uniform":
            for x in self.b:
                _complex(x)
            if len(self.b) != self.dimension():
                raise ValueError(
                    f"b has length {len(self.b)} but the matrix has dimension {self.dimension()}"
                )
        return self

    def seed_list(self) -> list[int]:
        if isinstance(self.seeds, list):
            return sorted(self.seeds)
        return list(range(self.seeds.base, self.seeds.base + self.seeds.count))

    def dimension(self) -> int:
        if isinstance(self.matrix, str):
            return 2 ** pauli_expr.parse(self.matrix).n_qubits
        return len(self.matrix)

    def variant(self) -> str:
        return f"alg{self.algorithm}"

    def matrix_array(self) -> np.ndarray:
        if isinstance(self.matrix, str):
            return pauli_expr.to_matrix(pauli_expr.parse(self.matrix))
        return np.array([[_complex(x) for x in row] for row in self.matrix], dtype=complex)

    def b_array(self) -> np.ndarray:
        if self.b == "uniform":
            n = self.dimension()
            return np.full(n, 1 / np.sqrt(n), dtype=complex)
        return np.array([_complex(x) for x in self.b], dtype=complex)

    def instance(self) -> ProblemInstance:
        expr = self.matrix if isinstance(self.matrix, str) else None
        return normalize_instance(self.matrix_array(), self.b_array(), self.variant(),
                                  kappa_override=self.kappa_override, expression=expr)

    def resolved_output_dir(self) -> Path:
        return Path(self.output_dir or os.environ.get(OUTPUT_ENV, "runs"))

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json", exclude_none=True), indent=2)


def _wrap(exc: ValidationError, source: str) -> ConfigError:
    lines = []
    for err in exc.errors():
        loc = ".".join(str(p) for p in err["loc"]) or "<root>"
        lines.append(f"  {loc}: {err['msg']}")
    return ConfigError(f"invalid config {source}:\n" + "\n".join(lines))


def parse_config(data: dict, source: str = "<dict>") -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        raise _wrap(exc, source) from None


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from None
    return parse_config(data, str(path))


def preset_names() -> list[str]:
    files = resources.files(PRESET_PACKAGE).iterdir()
    return sorted(f.name[:-5] for f in files if f.name.endswith(".json"))


def load_preset(name: str) -> ExperimentConfig:
    res = resources.files(PRESET_PACKAGE) / f"{name}.json"
    if not res.is_file():
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(preset_names())}")
    return parse_config(json.loads(res.read_text()), f"preset {name}")
