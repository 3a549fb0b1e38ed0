"""Command-line front end: ``aqclin solve|spectrum|schedule|oracle``."""
from __future__ import annotations

import csv
import json
import logging
import sys

import click
import numpy as np

from . import evolve, reporting
from .config import OUTPUT_ENV, ConfigError, load_config, load_preset, preset_names
from .schedule import build_grid


def _parse_seeds(text: str):
    """``"20"`` is a count; ``"3,7,42"`` (any comma) is an explicit list."""
    text = text.strip()
    try:
        if "," in text:
            return [int(s) for s in text.split(",") if s.strip()]
        return int(text)
    except ValueError:
        raise click.BadParameter(f"expected a count or a comma-separated list, got {text!r}")


def _load(config, preset, algorithm=None, steps=None, seeds=None, seed_base=None, mode=None,
          linear=False, kappa=None):
    if (config is None) == (preset is None):
        raise click.UsageError("give exactly one of --config or --preset")
    try:
        cfg = load_config(config) if config else load_preset(preset)
        data = cfg.model_dump(mode="json", exclude_none=True)
        if algorithm is not None:
            data["algorithm"] = algorithm
        if steps is not None:
            data["steps"] = steps
        if seeds is not None:
            parsed = _parse_seeds(seeds)
            if isinstance(parsed, list):
                data["seeds"] = parsed
            else:
                base = seed_base if seed_base is not None else 0
                data["seeds"] = {"count": parsed, "base": base}
        elif seed_base is not None and isinstance(data["seeds"], dict):
            data["seeds"]["base"] = seed_base
        if mode is not None:
            data["mode"] = mode
        if linear:
            data["parametrization"] = "linear"
        if kappa is not None:
            data["kappa_override"] = kappa
        return type(cfg).model_validate(data)
    except (ConfigError, ValueError) as exc:
        raise click.ClickException(str(exc))


config_opt = click.option("--config", type=click.Path(exists=True, dir_okay=False),
                          help="Experiment config (JSON).")
preset_opt = click.option("--preset", help="Shipped preset name, e.g. alg1_paper.")
algorithm_opt = click.option("--algorithm", type=click.Choice(["1", "2"]), default=None,
                             help="Override the algorithm.")
steps_opt = click.option("--steps", type=click.IntRange(min=1), default=None,
                         help="Number of evolution steps q.")


def _emit_csv(header, rows, out):
    if out is None:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([reporting._cell(x) for x in row])
    else:
        path = reporting.write_csv(out, header, rows)
        click.echo(f"wrote {path}", err=True)


@click.group()
@click.option("-v", "--verbose", is_flag=True)
def main(verbose):
    """Simulate adiabatic-inspired linear-system solvers."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


@main.command()
@config_opt
@preset_opt
@algorithm_opt
@steps_opt
@click.option("--seeds", default=None, help="Seed count (N) or list (a,b,c).")
@click.option("--seed-base", type=click.IntRange(min=0), default=None,
              help="First seed when --seeds is a count.")
@click.option("--mode", type=click.Choice(["trajectory", "channel", "both"]), default=None)
@click.option("--linear", is_flag=True, help="Linear s = j/q baseline schedule.")
@click.option("--kappa", type=float, default=None, help="Override the condition number.")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default=None,
              help=f"Output directory (default: ${OUTPUT_ENV} or ./runs).")
@click.option("--no-timestamp", is_flag=True, help="Omit generated_at from report.json.")
def solve(config, preset, algorithm, steps, seeds, seed_base, mode, linear, kappa, jobs, out,
          no_timestamp):
    """Run trajectories and/or the averaged channel and write report.json + CSVs."""
    from .runner import run_experiment

    cfg = _load(config, preset, int(algorithm) if algorithm else None, steps, seeds, seed_base,
                mode, linear, kappa)
    try:
        arts = run_experiment(cfg, jobs=jobs, out_dir=out, timestamp=not no_timestamp)
    except Exception as exc:
        raise click.ClickException(f"{type(exc).__name__}: {exc}")
    report = json.loads(arts.report.read_text())
    agg = report["aggregate"]
    for run in report["runs"]:
        label = run["mode"] if run["seed"] is None else f"seed {run['seed']}"
        fid = run["solution_fidelity"]
        click.echo(f"{label:>12}  status={run['status']}  p_success={run['success_probability']:.6f}"
                   f"  fidelity={'n/a' if fid is None else f'{fid:.6f}'}")
    if agg["solution_fidelity"]:
        click.echo(f"median trajectory fidelity {agg['solution_fidelity']['median']:.6f}")
    click.echo(f"wrote {arts.report}")
    if not arts.ok:
        for err in report["errors"]:
            click.echo(f"error ({err['mode']}, seed {err['seed']}): {err['error']}", err=True)
        sys.exit(1)


@main.command()
@config_opt
@preset_opt
@click.option("--hamiltonian", "which", type=click.Choice(["h", "hprime"]), default="h",
              show_default=True)
@click.option("--points", type=click.IntRange(min=2), default=51, show_default=True)
@click.option("--levels", type=click.IntRange(min=1), default=4, show_default=True,
              help="Lowest levels (h) or levels on each side of zero (hprime).")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="CSV file (default stdout).")
def spectrum(config, preset, which, points, levels, out):
    """Eigenvalue curves of H(s) or H'(s) on a uniform s grid."""
    inst = _load(config, preset).instance()
    header, rows = reporting.spectrum_table(inst, np.linspace(0.0, 1.0, points), which, levels)
    _emit_csv(header, rows, out)


@main.command("schedule")
@config_opt
@preset_opt
@algorithm_opt
@steps_opt
@click.option("--linear", is_flag=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="CSV file (default stdout).")
def schedule_cmd(config, preset, algorithm, steps, linear, out):
    """Dump the evolution grid (v, s, gap bound, t_max)."""
    cfg = _load(config, preset, int(algorithm) if algorithm else None, steps, linear=linear)
    inst = cfg.instance()
    sched = build_grid(inst.kappa, cfg.steps, inst.variant, cfg.parametrization)
    _emit_csv(reporting.SCHEDULE_COLUMNS, reporting.schedule_rows(sched), out)


@main.command()
@config_opt
@preset_opt
def oracle(config, preset):
    """Direct (classical) solution of the normalized system."""
    inst = _load(config, preset).instance()
    x = evolve.oracle_solve(inst)
    click.echo(json.dumps({
        "kappa": inst.kappa,
        "scale": inst.scale,
        "x": evolve.complex_list(x),
    }, indent=2))


@main.command()
def presets():
    """List shipped presets."""
    for name in preset_names():
        click.echo(name)


if __name__ == "__main__":
    main()
