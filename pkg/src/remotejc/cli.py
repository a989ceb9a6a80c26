"""Command-line front end.

Runs the requested concurrence estimators over a ``gt`` grid and writes
``series.csv``, ``overlay.svg``, ``revivals.json`` and ``manifest.json``.

Exit codes: 0 success, 2 invalid configuration, 3 truncation budget
exceeded, 4 internal contract violation.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import platform
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, _accel
from .analysis import TimeSeries, analyze
from .errors import ConfigurationError, ContractViolation, TruncationError
from .fock import FieldSpec
from .sweep import MODES, available_workers, default_dt, make_grid, run_mode

log = logging.getLogger("remotejc")

EXIT_OK, EXIT_CONFIG, EXIT_TRUNCATION, EXIT_CONTRACT = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigurationError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="remotejc", description=__doc__.splitlines()[0])
    p.add_argument("--alpha", type=float, default=10.0, help="coherent amplitude of both fields")
    p.add_argument("--cutoff", type=int, default=None, help="highest Fock index (default: automatic)")
    p.add_argument("--t-max", type=float, default=140.0, help="end of the gt grid")
    p.add_argument("--dt", type=float, default=None, help="gt grid step (default: tau/20)")
    p.add_argument("--modes", default=",".join(MODES), help="comma list of full|fock|xseries|approx")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--zero-tol", type=float, default=1e-12)
    p.add_argument("--revival-threshold", type=float, default=0.05)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--seed", type=int, default=None, help="recorded only; used by property-test generators")
    p.add_argument("--allow-coarse-dt", action="store_true", help="permit dt > tau/20")
    p.add_argument("--no-plot", action="store_true")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _finite(name, value):
    if not math.isfinite(value):
        raise ConfigurationError(f"{name} must be finite, got {value!r}")


def resolve_config(args) -> dict:
    for name in ("alpha", "t_max", "zero_tol", "revival_threshold"):
        _finite("--" + name.replace("_", "-"), getattr(args, name))
    if args.alpha < 0:
        raise ConfigurationError(f"--alpha must be >= 0, got {args.alpha!r}")
    if args.t_max <= 0:
        raise ConfigurationError(f"--t-max must be > 0, got {args.t_max!r}")
    if args.cutoff is not None and args.cutoff < 1:
        raise ConfigurationError(f"--cutoff must be >= 1, got {args.cutoff!r}")
    if args.zero_tol < 0:
        raise ConfigurationError(f"--zero-tol must be >= 0, got {args.zero_tol!r}")
    if not 0 < args.revival_threshold < 1:
        raise ConfigurationError(f"--revival-threshold must lie in (0, 1), got {args.revival_threshold!r}")
    if args.workers is not None and args.workers < 1:
        raise ConfigurationError(f"--workers must be >= 1, got {args.workers!r}")
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    bad = [m for m in modes if m not in MODES]
    if not modes or bad:
        raise ConfigurationError(f"--modes: unknown mode(s) {bad or modes!r}; choose from {','.join(MODES)}")
    if len(set(modes)) != len(modes):
        raise ConfigurationError(f"--modes lists a mode twice: {args.modes!r}")
    field = FieldSpec(args.alpha, args.cutoff)
    limit = default_dt(field)
    if args.dt is None:
        dt = limit
    else:
        _finite("--dt", args.dt)
        if args.dt <= 0:
            raise ConfigurationError(f"--dt must be > 0, got {args.dt!r}")
        if args.dt > limit * (1 + 1e-12) and not args.allow_coarse_dt:
            raise ConfigurationError(
                f"--dt {args.dt!r} exceeds tau/20 = {limit:.6g}; pass --allow-coarse-dt to override"
            )
        dt = args.dt
    if dt > args.t_max:
        raise ConfigurationError(f"--dt {dt!r} exceeds --t-max {args.t_max!r}")
    return {
        "alpha": field.alpha,
        "nbar": field.nbar,
        "cutoff": field.cutoff,
        "poisson_tail": field.tail_mass,
        "t_max": args.t_max,
        "dt": dt,
        "tau": field.tau if math.isfinite(field.tau) else None,
        "modes": modes,
        "zero_tol": args.zero_tol,
        "revival_threshold": args.revival_threshold,
        "workers": args.workers or available_workers(),
        "seed": args.seed,
        "backend": _accel.backend_name(),
        "field": field,
    }


def format_csv(gts, columns: dict) -> str:
    """Header ``gt,<modes>``; every number with 17 significant digits."""
    names = list(columns)
    lines = [",".join(["gt"] + names)]
    cols = [np.asarray(gts, dtype=float)] + [np.asarray(columns[n], dtype=float) for n in names]
    for row in zip(*cols):
        lines.append(",".join(f"{v:.16e}" for v in row))
    return "\n".join(lines) + "\n"


def read_csv(path):
    """Inverse of :func:`format_csv`; returns ``(gt, {mode: values})``."""
    text = Path(path).read_text(encoding="utf-8").splitlines()
    names = text[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in text[1:]], dtype=float)
    data = data.reshape(-1, len(names))
    return data[:, 0], {n: data[:, i] for i, n in enumerate(names) if i > 0}


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigurationError as exc:
        print(f"remotejc: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return _run(args)
    except ConfigurationError as exc:
        print(f"remotejc: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TruncationError as exc:
        print(f"remotejc: truncation: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except ContractViolation as exc:
        print(f"remotejc: contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


def _run(args) -> int:
    cfg = resolve_config(args)
    field = cfg.pop("field")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    gts = make_grid(cfg["t_max"], cfg["dt"])
    timings = {}
    columns = {}
    norm_loss = {}
    for mode in cfg["modes"]:
        t0 = time.perf_counter()
        res = run_mode(mode, field, gts, cfg["workers"])
        timings[mode] = time.perf_counter() - t0
        columns[mode] = res.values
        norm_loss[mode] = res.norm_loss
        log.info("%s: %d points in %.2f s", mode, gts.size, timings[mode])

    paths = {
        "series": out / "series.csv",
        "overlay": out / "overlay.svg",
        "revivals": out / "revivals.json",
        "manifest": out / "manifest.json",
    }
    t0 = time.perf_counter()
    paths["series"].write_text(format_csv(gts, columns), encoding="utf-8", newline="\n")
    timings["csv"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    tau = cfg["tau"] if cfg["tau"] is not None else 20.0 * cfg["dt"]
    reports = {
        mode: analyze(TimeSeries(gts, vals, mode), tau, cfg["zero_tol"], cfg["revival_threshold"]).to_dict()
        for mode, vals in columns.items()
    }
    doc = {
        "schema": "remotejc.revivals/1",
        "time_unit": "gt",
        "tau": tau,
        "zero_tol": cfg["zero_tol"],
        "revival_threshold": cfg["revival_threshold"],
        "modes": reports,
    }
    paths["revivals"].write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    timings["analysis"] = time.perf_counter() - t0

    if args.no_plot:
        del paths["overlay"]
    else:
        from .plot import write_overlay_svg

        t0 = time.perf_counter()
        write_overlay_svg(paths["overlay"], gts, columns, title=f"alpha = {cfg['alpha']:g}")
        timings["plot"] = time.perf_counter() - t0

    manifest = {
        "config": cfg,
        "grid_points": int(gts.size),
        "versions": {
            "remotejc": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "numba": _accel.numba.__version__ if _accel.HAVE_NUMBA else None,
        },
        "outputs": {k: str(v) for k, v in paths.items()},
        "norm_loss": norm_loss,
        "wall_clock_s": timings,
    }
    paths["manifest"].write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def main():  # pragma: no cover
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
