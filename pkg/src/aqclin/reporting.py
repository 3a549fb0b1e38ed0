"""CSV and JSON artifacts: per-run step tables, spectra, schedules and the run report."""
from __future__ import annotations

import csv
import json
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import densela, hamiltonian as ham
from .evolve import RunReport, complex_list
from .schedule import Schedule

SCHEMA_VERSION = "1.0"
STEP_COLUMNS = ["step", "v", "s", "t_drawn", "t_max", "energy", "e1", "ground_fidelity"]
SCHEDULE_COLUMNS = ["step", "v", "s", "gap_bound", "t_max"]


def _cell(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(x) for x in row])
    return path


def write_steps_csv(path, rep: RunReport) -> Path:
    rows = ([getattr(r, c) for c in STEP_COLUMNS] for r in rep.steps)
    return write_csv(path, STEP_COLUMNS, rows)


def schedule_rows(sched: Schedule):
    for j in range(sched.q):
        yield (j + 1, float(sched.v[j]), float(sched.s[j]), float(sched.gap[j]),
               float(sched.t_max[j]))


def spectrum_table(inst: ham.ProblemInstance, s_values, which: str = "h",
                   levels: int = 4) -> tuple[list[str], list[list[float]]]:
    """Eigenvalue curves along ``s``.

    ``which="h"``: the ``levels`` lowest eigenvalues of H(s).
    ``which="hprime"``: the zero level of H'(s) plus the ``levels`` nearest
    nonzero eigenvalues on each side.
    """
    rows = []
    if which == "h":
        header = ["s"] + [f"level_{k}" for k in range(levels)]
        for s in s_values:
            w = densela.eigh(ham.H_of_s(float(s), inst)).values
            rows.append([float(s)] + [float(x) for x in w[:levels]])
    elif which == "hprime":
        header = (["s"] + [f"level_-{k}" for k in range(levels, 0, -1)] + ["level_0"]
                  + [f"level_+{k}" for k in range(1, levels + 1)])
        for s in s_values:
            w = densela.eigh(ham.Hprime_of_s(float(s), inst)).values
            tol = densela.ZERO_TOL * np.max(np.abs(w))
            neg = np.sort(w[w < -tol])[::-1][:levels][::-1]
            pos = np.sort(w[w > tol])[:levels]
            zero = w[np.abs(w) <= tol]
            mid = float(np.mean(zero)) if zero.size else float("nan")
            rows.append([float(s)] + neg.tolist() + [mid] + pos.tolist())
    else:
        raise ValueError(f"unknown Hamiltonian {which!r}; use 'h' or 'hprime'")
    return header, rows


def _stats(values) -> dict | None:
    if not values:
        return None
    a = np.asarray(values, dtype=float)
    q1, med, q3 = np.percentile(a, [25, 50, 75])
    return {"n": len(values), "median": float(med), "q1": float(q1), "q3": float(q3),
            "min": float(a.min()), "max": float(a.max())}


def aggregate(reports: list[RunReport]) -> dict:
    traj = [r for r in reports if r.mode == "trajectory"]
    ok = [r for r in traj if r.ok]
    return {
        "n_runs": len(traj),
        "n_ok": len(ok),
        "n_failed": len(traj) - len(ok),
        "solution_fidelity": _stats([r.solution_fidelity for r in ok]),
        "traced_fidelity": _stats([r.traced_fidelity for r in traj]),
        "success_probability": _stats([r.success_probability for r in traj]),
    }


def build_report(cfg, inst, sched, reports: list[RunReport], x_oracle, artifacts: dict,
                 errors: list[dict], timestamp: bool = True) -> dict:
    cfg_dump = cfg.model_dump(mode="json", exclude_none=True)
    cfg_dump.pop("output_dir", None)
    failed = errors or any(not r.ok for r in reports)
    report = {
        "schema_version": SCHEMA_VERSION,
        "status": "partial" if failed else "ok",
        "config": cfg_dump,
        "instance": inst.summary(),
        "schedule": sched.to_dict(),
        "seeds": cfg.seed_list() if cfg.mode != "channel" else [],
        "x_oracle": complex_list(x_oracle),
        "runs": [r.to_dict() for r in reports],
        "errors": errors,
        "aggregate": aggregate(reports),
        "artifacts": artifacts,
    }
    if cfg.target_error is not None:
        report["target_error"] = cfg.target_error
    if timestamp:
        report["generated_at"] = datetime.now(timezone.utc).isoformat()
    return report


def write_report(path, report: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(report, indent=2) + "\n")
    return path
