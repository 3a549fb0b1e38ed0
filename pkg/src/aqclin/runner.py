"""Experiment orchestration: build the instance, run every requested mode/seed, emit files."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import evolve, reporting
from .config import ExperimentConfig
from .schedule import build_grid

log = logging.getLogger(__name__)


@dataclass
class EmittedArtifacts:
    report: Path
    trajectories: list[Path] = field(default_factory=list)
    channel: Path | None = None
    spectrum: Path | None = None
    ok: bool = True


def _trajectory_task(args):
    inst, sched, spectra, seed = args
    try:
        return seed, evolve.run_trajectory(inst, sched, seed, spectra=spectra), None
    except Exception as exc:  # surfaced in the report, never swallowed
        return seed, None, f"{type(exc).__name__}: {exc}"


def run_trajectories(inst, sched, seeds, spectra=None, jobs: int = 1):
    """Run ``seeds`` (possibly in worker processes); results come back in seed order."""
    spectra = evolve.step_spectra(inst, sched) if spectra is None else spectra
    tasks = [(inst, sched, spectra, s) for s in sorted(seeds)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_trajectory_task, tasks))
    else:
        results = [_trajectory_task(t) for t in tasks]
    return sorted(results, key=lambda r: r[0])


def run_experiment(cfg: ExperimentConfig, jobs: int = 1, out_dir=None,
                   timestamp: bool = True) -> EmittedArtifacts:
    out = Path(out_dir) if out_dir is not None else cfg.resolved_output_dir()
    out.mkdir(parents=True, exist_ok=True)
    inst = cfg.instance()
    sched = build_grid(inst.kappa, cfg.steps, inst.variant, cfg.parametrization)
    spectra = evolve.step_spectra(inst, sched)
    log.info("kappa=%.6g scale=%.6g q=%d variant=%s", inst.kappa, inst.scale, sched.q,
             inst.variant)

    reports, errors = [], []
    arts = EmittedArtifacts(report=out / "report.json")
    names: dict = {"trajectories": [], "channel": None, "spectrum": "spectrum.csv"}

    if cfg.mode in ("channel", "both"):
        try:
            rep = evolve.run_channel(inst, sched, spectra=spectra)
            reports.append(rep)
            arts.channel = reporting.write_steps_csv(out / "channel.csv", rep)
            names["channel"] = arts.channel.name
        except Exception as exc:
            errors.append({"mode": "channel", "seed": None, "error": f"{type(exc).__name__}: {exc}"})

    if cfg.mode in ("trajectory", "both"):
        for seed, rep, err in run_trajectories(inst, sched, cfg.seed_list(), spectra, jobs):
            if err is not None:
                errors.append({"mode": "trajectory", "seed": seed, "error": err})
                continue
            reports.append(rep)
            p = reporting.write_steps_csv(out / f"trajectory_seed{seed}.csv", rep)
            arts.trajectories.append(p)
            names["trajectories"].append(p.name)

    header = ["step", "s", "e0", "e1"]
    rows = [(j + 1, sp.s, 0.0, sp.e1) for j, sp in enumerate(spectra)]
    arts.spectrum = reporting.write_csv(out / "spectrum.csv", header, rows)

    report = reporting.build_report(cfg, inst, sched, reports, evolve.oracle_solve(inst),
                                    names, errors, timestamp=timestamp)
    reporting.write_report(arts.report, report)
    arts.ok = report["status"] == "ok"
    return arts
