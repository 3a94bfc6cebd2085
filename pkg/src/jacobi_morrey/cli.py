"""Command-line front end.

Subcommands map one to one onto the experiments::

    jacobi-morrey region    --p 2 --lambda 0
    jacobi-morrey norms     --alpha 0 --beta 0 --p 8 --lambda 0 --n 64:2048
    jacobi-morrey dual      --p 2 --lambda 0.5 --n 16:1024
    jacobi-morrey necessity --p 2 --lambda 0
    jacobi-morrey boundary  --p 3 --lambda 0.25
    jacobi-morrey hilbert   --p 8 --lambda 0 --weight-points 1 --weight-exponents -0.25
    jacobi-morrey converge  --function exp --p 2 --lambda 0.25 --n 4:32
    jacobi-morrey mnt       --function one --p 2 --lambda 0
    jacobi-morrey sweep     --p-grid 1.2,1.8,3.7,5,6 --lambda-grid 0,0.25,0.4,0.5,0.65

Settings come from a flat JSON file (``--config``) whose keys are the
:class:`RunConfig` field names; flags override the file.  Results go to
``<output_dir>/<experiment>.csv`` and ``<experiment>_summary.jsonl``; the
sweep also writes ``sweep_region_plot.py``.

Exit status: 0 all verdicts consistent, 1 some verdict inconsistent,
2 configuration error, 3 numerical failure.  ``JACOBI_MORREY_VERBOSITY``
selects ``quiet``, ``normal`` (default) or ``debug`` output.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import experiments as ex
from .jacobi_core import JacobiFunction, JacobiParams
from .morrey import MorreyExponents, PowerWeight, ScanSpec

__all__ = ["RunConfig", "ConfigError", "build_parser", "load_config", "run", "main", "n_grid", "CSV_COLUMNS"]

log = logging.getLogger("jacobi_morrey")

EXIT_OK, EXIT_INCONSISTENT, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3
VERBOSITY_ENV = "JACOBI_MORREY_VERBOSITY"
_LEVELS = {"quiet": logging.WARNING, "normal": logging.INFO, "debug": logging.DEBUG}

EXPERIMENTS = ("region", "norms", "dual", "necessity", "boundary", "hilbert", "converge", "mnt", "sweep")
CSV_COLUMNS = (
    "experiment", "alpha", "beta", "p", "lambda", "n",
    "measured", "predicted_slope", "fitted_slope", "residual", "verdict",
)
MAX_GRID_CELLS = 400

# default sweep grid: no cell on or next to a boundary line, and every
# outside cell has a predicted witness slope of at least 0.09
DEFAULT_P_GRID = (1.2, 1.8, 3.7, 5.0, 6.0)
DEFAULT_LAM_GRID = (0.0, 0.25, 0.4, 0.5, 0.65)

_DEFAULT_N = {
    "norms": (64, 2048),
    "dual": (16, 1024),
    "necessity": (64, 2048),
    "boundary": (64, 2048),
    "converge": (4, 32),
    "mnt": (64, 2048),
    "sweep": (64, 2048),
    "hilbert": (64, 2048),
    "region": (64, 2048),
}

FUNCTIONS = {
    "exp": (np.exp, None),
    "abs": (np.abs, (0.0,)),
    "one": (np.ones_like, None),
    "zero": (np.zeros_like, None),
    "indicator": (lambda x: np.where(np.asarray(x) > 0.5, 1.0, 0.0), (0.5,)),
    "p5": (None, None),
}


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run; serialized as flat JSON."""

    experiment: str = "norms"
    alpha: float = 0.0
    beta: float = 0.0
    p: float = 2.0
    lam: float = 0.0
    p_grid: tuple = ()
    lam_grid: tuple = ()
    n_min: int = 64
    n_max: int = 2048
    n_count: int = 0
    center_count: int = 64
    radius_levels: int = 28
    endpoint_clustering: float = 3.0
    weight_points: tuple = (-1.0, 1.0)
    weight_exponents: tuple = (-0.25, -0.25)
    function: str = "exp"
    output_dir: str = "results"
    seed: int = 0

    def to_dict(self) -> dict:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d

    @classmethod
    def from_dict(cls, d) -> "RunConfig":
        names = {f.name: f for f in fields(cls)}
        unknown = set(d) - set(names)
        if unknown:
            raise ConfigError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
        kw = {}
        for k, v in d.items():
            default = names[k].default
            try:
                if isinstance(default, tuple):
                    kw[k] = tuple(float(x) for x in v)
                elif isinstance(default, bool):
                    kw[k] = bool(v)
                elif isinstance(default, int):
                    if float(v) != int(v):
                        raise ValueError
                    kw[k] = int(v)
                elif isinstance(default, float):
                    kw[k] = float(v)
                else:
                    kw[k] = str(v)
            except (TypeError, ValueError):
                raise ConfigError(f"bad value for {k}: {v!r}") from None
        return cls(**kw)


# --------------------------------------------------------------------------
# validation


def n_grid(cfg: RunConfig):
    """Geometric n grid from n_min..n_max (n_count points; powers of two when 0)."""
    lo, hi = cfg.n_min, cfg.n_max
    if lo < 1 or hi <= lo:
        raise ConfigError(f"need 1 <= n_min < n_max, got {lo}:{hi}")
    count = cfg.n_count or int(round(math.log2(hi / lo))) + 1
    if count < 2:
        raise ConfigError("the n grid needs at least two points")
    ns = np.unique(np.round(np.geomspace(lo, hi, count)).astype(int))
    return [int(n) for n in ns]


def _cells(cfg: RunConfig):
    ps = cfg.p_grid or (cfg.p,)
    ls = cfg.lam_grid or (cfg.lam,)
    if cfg.experiment == "sweep" and not cfg.p_grid and not cfg.lam_grid:
        ps, ls = DEFAULT_P_GRID, DEFAULT_LAM_GRID
    cells = [(float(p), float(lam)) for lam in ls for p in ps]
    if len(cells) > MAX_GRID_CELLS:
        raise ConfigError(f"grid has {len(cells)} cells, limit is {MAX_GRID_CELLS}")
    return sorted(set(cells))


def validate(cfg: RunConfig):
    """Check every precondition before any computation starts."""
    if cfg.experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {cfg.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
    try:
        params = JacobiParams(cfg.alpha, cfg.beta)
        scan = ScanSpec(cfg.center_count, cfg.radius_levels, cfg.endpoint_clustering)
        cells = _cells(cfg)
        for p, lam in cells:
            exps = MorreyExponents(p, lam)
            if cfg.experiment in ("dual", "necessity", "sweep") and not exps.conjugate_finite:
                raise ConfigError(f"{cfg.experiment} needs p > 1, got p = {p}")
            if cfg.experiment in ("norms", "sweep"):
                if not params.nonnegative:
                    raise ConfigError("norm growth needs alpha >= 0 and beta >= 0")
                if lam > 0.75:
                    raise ConfigError(f"norm growth needs lambda <= 3/4, got lambda = {lam}")
            if cfg.experiment == "boundary" and not ex.region_membership(p, lam).on_boundary:
                raise ConfigError(f"boundary needs (p, lambda) on a boundary line; ({p}, {lam}) is not")
        if cfg.experiment in ("converge", "mnt") and cfg.function not in FUNCTIONS:
            raise ConfigError(f"unknown function {cfg.function!r}; choose from {', '.join(FUNCTIONS)}")
        if cfg.experiment == "hilbert":
            PowerWeight(cfg.weight_points, cfg.weight_exponents)
            if not cfg.weight_points:
                raise ConfigError("hilbert needs at least one weight point")
        if cfg.experiment != "region" and cfg.experiment != "hilbert":
            n_grid(cfg)
    except ConfigError:
        raise
    except ValueError as err:
        raise ConfigError(str(err)) from None
    return params, scan, cells


# --------------------------------------------------------------------------
# execution


def _function(name, params):
    f, bps = FUNCTIONS[name]
    if name == "p5":
        return JacobiFunction(params, 5), None
    return f, bps


def _run_cell(cfg_dict, p, lam):
    """One (experiment, p, lambda) cell; module level so worker processes can run it."""
    cfg = RunConfig.from_dict(cfg_dict)
    params = JacobiParams(cfg.alpha, cfg.beta)
    scan = ScanSpec(cfg.center_count, cfg.radius_levels, cfg.endpoint_clustering)
    exps = MorreyExponents(p, lam)
    name = cfg.experiment
    out = []
    if name in ("norms", "sweep"):
        r = ex.norm_growth_experiment(params, exps, n_grid(cfg), scan)
        out.append(("norms", [r], r.verdict, {}))
    if name in ("necessity", "sweep"):
        r = ex.necessity_experiment(params, exps, n_grid(cfg), scan)
        out.append(("necessity", r.series, r.verdict, r.extras))
    if name == "dual":
        r = ex.dual_growth_experiment(params, exps, n_grid(cfg), scan)
        out.append(("dual", r.series, r.verdict, r.extras))
    elif name == "boundary":
        r = ex.boundary_divergence_experiment(params, exps, n_grid(cfg), scan)
        out.append(("boundary", r.series, r.verdict, r.extras))
    elif name == "hilbert":
        w = PowerWeight(cfg.weight_points, cfg.weight_exponents)
        r = ex.hilbert_weight_experiment(w, exps, scan)
        out.append(("hilbert", r.series, r.verdict, r.extras))
    elif name == "converge":
        f, bps = _function(cfg.function, params)
        r = ex.convergence_experiment(f, params, exps, n_grid(cfg), scan, breakpoints=bps)
        out.append(("converge", [r], r.verdict, {}))
    elif name == "mnt":
        g, bps = _function(cfg.function, params)
        r = ex.mnt_check(g, params, exps, n_grid(cfg), scan, breakpoints=bps)
        out.append(("mnt", r.series, r.verdict, r.extras))
    return (p, lam), out


def _fmt(v):
    if isinstance(v, str):
        return v
    v = float(v)
    if math.isnan(v):
        raise FloatingPointError("NaN in results")
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return "%.17g" % v


def _jsonable(obj):
    if isinstance(obj, float):
        if math.isnan(obj):
            raise FloatingPointError("NaN in results")
        return obj if math.isfinite(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return _jsonable(obj.item())
    return obj


def _execute(cfg: RunConfig, cells, workers):
    cfg_dict = cfg.to_dict()
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_cell, cfg_dict, p, lam) for p, lam in cells]
            results = [f.result() for f in futures]
    else:
        results = [_run_cell(cfg_dict, p, lam) for p, lam in cells]
    # deterministic merge, independent of completion order
    return sorted(results, key=lambda r: r[0])


def _write_outputs(cfg: RunConfig, results):
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows, records = [], []
    for (p, lam), blocks in results:
        region = ex.region_membership(p, lam) if lam < 0.75 else None
        for name, series, verdict, extras in blocks:
            for s in series:
                exp_name = f"{name}/{s.label}" if s.label else name
                for n, m in zip(s.n_values, s.measured):
                    rows.append([
                        exp_name, cfg.alpha, cfg.beta, p, lam, n, m,
                        s.predicted_slope, s.fitted_log_slope, s.fit_residual, verdict,
                    ])
            records.append({
                "experiment": name,
                "p": p,
                "lambda": lam,
                "classification": region.classification if region else "out_of_scope",
                "verdict": verdict,
                "series": [
                    {
                        "label": s.label,
                        "fitted_slope": s.fitted_log_slope,
                        "predicted_slope": s.predicted_slope,
                        "residual": s.fit_residual,
                        "behaviour": s.behaviour,
                        "verdict": s.verdict,
                        "log_fit": asdict(s.log_fit) if s.log_fit else None,
                    }
                    for s in series
                ],
                "extras": extras,
                "seed": cfg.seed,
                "config": cfg.to_dict(),
            })
    csv_path = out / f"{cfg.experiment}.csv"
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow([_fmt(v) if not isinstance(v, (int, np.integer)) else str(v) for v in r])
    summary_path = out / f"{cfg.experiment}_summary.jsonl"
    with open(summary_path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(_jsonable(rec), sort_keys=True) + "\n")
    log.info("wrote %s and %s", csv_path, summary_path)
    return records


def _sweep_map(records):
    """Per-cell empirical verdict (from the necessity witnesses) against the region."""
    cells = []
    for rec in records:
        if rec["experiment"] != "necessity":
            continue
        cls = rec["classification"]
        emp = rec["extras"]["behaviour"]
        if cls in ("lower_boundary", "upper_boundary"):
            match = "boundary"
        else:
            match = (cls == "inside") == (emp == "bounded")
        cells.append((rec["p"], rec["lambda"], cls, emp, match))
    return cells


_PLOT_TEMPLATE = '''"""Region diagram with the measured sweep verdicts overlaid.

Run with python; writes sweep_region.png next to this script.
"""
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

# (p, lambda, classification, empirical verdict, match)
CELLS = {cells!r}

lam = np.linspace(0.0, 0.75, 301)
fig, ax = plt.subplots(figsize=(6.0, 4.5))
ax.fill_betweenx(lam, 4 * (1 - lam) / 3, 4 * (1 - lam), color="0.88", label="convergence region")
ax.plot(4 * (1 - lam) / 3, lam, "k--", lw=1)
ax.plot(4 * (1 - lam), lam, "k--", lw=1)
for p, l, cls, emp, match in CELLS:
    marker = "o" if emp == "bounded" else "^"
    color = "tab:orange" if match == "boundary" else ("tab:green" if match else "tab:red")
    ax.scatter([p], [l], marker=marker, c=color, s=45, edgecolors="k", linewidths=0.5)
ax.scatter([], [], marker="o", c="w", edgecolors="k", label="bounded")
ax.scatter([], [], marker="^", c="w", edgecolors="k", label="growing")
ax.set_xlabel("p")
ax.set_ylabel("lambda")
ax.set_xlim(1.0, max(6.5, max(c[0] for c in CELLS) + 0.5))
ax.set_ylim(0.0, 0.8)
ax.legend(loc="upper right", fontsize=8)
fig.tight_layout()
fig.savefig(Path(__file__).with_name("sweep_region.png"), dpi=150)
'''


def _write_plot_script(cfg: RunConfig, cells):
    path = Path(cfg.output_dir) / f"{cfg.experiment}_region_plot.py"
    path.write_text(_PLOT_TEMPLATE.format(cells=[tuple(c) for c in cells]))
    return path


def run(cfg: RunConfig, workers=1, plot_script=None, stream=None) -> int:
    """Validate, compute, write artifacts; returns the exit status."""
    stream = stream or sys.stdout
    try:
        params, scan, cells = validate(cfg)
    except ConfigError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG

    if cfg.experiment == "region":
        for p, lam in cells:
            v = ex.region_membership(p, lam)
            if not v.in_scope:
                log.warning("lambda = %s is outside the scope of the convergence theory", lam)
            print(v.classification if len(cells) == 1 else f"p={p:g} lambda={lam:g} {v.classification}", file=stream)
        return EXIT_OK

    log.debug("config %s", cfg.to_dict())
    try:
        with np.errstate(over="raise", invalid="ignore", divide="ignore"):
            results = _execute(cfg, cells, workers)
        records = _write_outputs(cfg, results)
    except (FloatingPointError, OverflowError, ZeroDivisionError, np.linalg.LinAlgError, ValueError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL

    inconsistent = 0
    for rec in records:
        fitted = ", ".join(f"{s['label']}={s['fitted_slope']:.4f}" for s in rec["series"])
        line = f"{rec['experiment']} p={rec['p']:g} lambda={rec['lambda']:g} [{rec['classification']}] slopes {fitted}: {rec['verdict']}"
        if rec["verdict"] == "inconsistent":
            inconsistent += 1
        log.info("%s", line)
    if cfg.experiment == "sweep" or plot_script:
        cells_map = _sweep_map(records)
        if cells_map:
            for p, lam, cls, emp, match in cells_map:
                flag = "" if match in (True, "boundary") else "  <-- mismatch"
                tag = " boundary" if match == "boundary" else ""
                print(f"p={p:<6g} lambda={lam:<6g} theory={cls:<15s} measured={emp}{tag}{flag}", file=stream)
            path = _write_plot_script(cfg, cells_map)
            log.info("wrote %s", path)
    if cfg.experiment != "sweep":
        for rec in records:
            print(f"{rec['experiment']} p={rec['p']:g} lambda={rec['lambda']:g}: " + ", ".join(
                f"{s['label'] or 'fit'} slope {s['fitted_slope']:.4f} (predicted {s['predicted_slope']:.4f})" for s in rec["series"]
            ) + f" -> {rec['verdict']}", file=stream)
    return EXIT_INCONSISTENT if inconsistent else EXIT_OK


# --------------------------------------------------------------------------
# argument parsing


def _float_list(text):
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _n_range(text):
    parts = text.split(":")
    try:
        vals = [int(v) for v in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected n_min:n_max[:count], got {text!r}") from None
    if len(vals) not in (2, 3):
        raise argparse.ArgumentTypeError(f"expected n_min:n_max[:count], got {text!r}")
    return vals


def build_parser():
    parser = argparse.ArgumentParser(prog="jacobi-morrey", description="Morrey-norm experiments for Fourier-Jacobi expansions.")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="flat JSON file with RunConfig keys")
        sp.add_argument("--alpha", type=float)
        sp.add_argument("--beta", type=float)
        sp.add_argument("--p", type=float)
        sp.add_argument("--lambda", dest="lam", type=float)
        sp.add_argument("--p-grid", dest="p_grid", type=_float_list)
        sp.add_argument("--lambda-grid", dest="lam_grid", type=_float_list)
        sp.add_argument("--n", dest="n_range", type=_n_range, help="n_min:n_max[:count]")
        sp.add_argument("--center-count", type=int)
        sp.add_argument("--radius-levels", type=int)
        sp.add_argument("--endpoint-clustering", type=float)
        sp.add_argument("--weight-points", type=_float_list)
        sp.add_argument("--weight-exponents", type=_float_list)
        sp.add_argument("--function")
        sp.add_argument("--output-dir")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--workers", type=int, default=os.cpu_count() or 1)
        sp.add_argument("--plot-script", action="store_true", help="also write the region plot script")
    return parser


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise ConfigError(f"cannot read config {path}: {err}") from None
    if not isinstance(data, dict) or any(isinstance(v, dict) for v in data.values()):
        raise ConfigError("config must be a flat JSON object")
    return data


def config_from_args(args) -> RunConfig:
    data = {}
    lo, hi = _DEFAULT_N[args.experiment]
    data.update({"n_min": lo, "n_max": hi})
    if args.config:
        data.update(load_config(args.config))
    data["experiment"] = args.experiment
    for key in ("alpha", "beta", "p", "lam", "p_grid", "lam_grid", "center_count", "radius_levels",
                "endpoint_clustering", "weight_points", "weight_exponents", "function", "output_dir", "seed"):
        v = getattr(args, key)
        if v is not None:
            data[key] = v
    if args.n_range is not None:
        data["n_min"], data["n_max"] = args.n_range[:2]
        data["n_count"] = args.n_range[2] if len(args.n_range) == 3 else 0
    return RunConfig.from_dict(data)


def _setup_logging():
    level = os.environ.get(VERBOSITY_ENV, "normal").strip().lower()
    if level not in _LEVELS:
        raise ConfigError(f"{VERBOSITY_ENV} must be one of quiet, normal, debug; got {level!r}")
    if not log.handlers:
        h = logging.StreamHandler(sys.stderr)
        h.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
        log.addHandler(h)
    log.setLevel(_LEVELS[level])
    log.propagate = False


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_OK
    try:
        _setup_logging()
        cfg = config_from_args(args)
        if args.workers < 1:
            raise ConfigError("--workers must be >= 1")
    except ConfigError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg, workers=args.workers, plot_script=args.plot_script)


if __name__ == "__main__":
    sys.exit(main())
