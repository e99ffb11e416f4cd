"""Command-line front end.

    uqtb profile            flux moments/percentiles across space
    uqtb converge-variance  variance error against expansion order
    uqtb converge-quantile  sampled-percentile error against sample count
    uqtb mass               total-mass statistics against the mean ratio
    uqtb eval               a single deterministic flux value

Settings are resolved as: flags, then ``--config`` (a JSON object with the
same keys as the manifest written next to every CSV), then the per-study
defaults.  Study output goes to ``--output-dir``, ``$UQTB_OUTPUT_DIR``
or the current directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from .bench import StudyConfig, run_study
from .errors import ConvergenceError, DomainError, MonotonicityError
from .sources import KINDS, SourceConfig, source_flux

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONVERGENCE = 3
EXIT_IO = 4

STUDIES = {
    "profile": "profiles",
    "converge-variance": "variance_convergence",
    "converge-quantile": "quantile_convergence",
    "mass": "mass_vs_cbar",
}


class UsageError(Exception):
    pass


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text):
    try:
        return [int(float(v)) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _source_args(p):
    p.add_argument("--source", choices=KINDS + ("plane_pulse",))
    p.add_argument("--x0", type=float, help="square-source half-width")
    p.add_argument("--t0", type=float, help="finite-source duration")
    p.add_argument("--sigma", type=float, help="Gaussian width in exp(-x^2/sigma^2)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="uqtb", description="Uncertainty benchmarks for time-dependent transport.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in STUDIES:
        p = sub.add_parser(name, argument_default=argparse.SUPPRESS)
        _source_args(p)
        p.add_argument("--config", help="JSON file of study settings")
        p.add_argument("--output-dir", help="directory for the CSV and JSON manifest")
        p.add_argument("--workers", type=int, help="threads used over grid points")
        p.add_argument("--cbar", type=float, help="mean scattering ratio")
        p.add_argument("--omega1", type=float, help="absolute half-width of the c interval")
        p.add_argument("--relative-width", dest="relative_width", type=float,
                       help="half-width as a fraction of cbar (used when omega1 is unset)")
        p.add_argument("--t", dest="times", type=_floats, help="comma-separated times")
        p.add_argument("--points", type=int, help="spatial grid size")
        p.add_argument("--positions", type=_floats, help="explicit spatial grid")
        p.add_argument("--x", dest="position", type=float, help="probe position (converge-quantile)")
        p.add_argument("--order", type=int, help="expansion order N")
        p.add_argument("--orders", type=_ints, help="orders swept by converge-variance")
        p.add_argument("--samples", dest="n_samples", type=int, help="Sobol samples for percentiles")
        p.add_argument("--sample-sizes", dest="sample_sizes", type=_ints)
        p.add_argument("--percentiles", type=_floats)
        p.add_argument("--cbar-grid", dest="cbar_grid", type=_floats)
        p.add_argument("--no-aliasing-check", dest="check_aliasing", action="store_false")
    p = sub.add_parser("eval", help="print one FluxValue")
    _source_args(p)
    p.add_argument("--x", type=float, required=True, help="position (radius for the line source)")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    return parser


def _source(kind, args):
    kind = kind or "plane"
    params = {k: getattr(args, k) for k in ("x0", "t0", "sigma") if getattr(args, k, None) is not None}
    base = SourceConfig.default(kind)
    merged = {**base.to_dict(), **params}
    return SourceConfig(**merged)


def resolve_config(args) -> StudyConfig:
    """Merge defaults, the config file and explicit flags into a StudyConfig."""
    study = STUDIES[args.command]
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config", "output_dir", "workers")}
    file_cfg = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            file_cfg = json.load(fh)
        if not isinstance(file_cfg, dict):
            raise UsageError("config file must hold a JSON object")
        file_study = file_cfg.pop("study", study)
        if file_study != study:
            raise UsageError(f"config is for study {file_study!r}, not {study!r}")
        file_cfg.pop("notes", None)
    kind = flags.pop("source", None) or file_cfg.pop("source", None) or "plane"
    src_file = {k: file_cfg.pop(k) for k in ("x0", "t0", "sigma") if k in file_cfg}
    src_flags = {k: flags.pop(k) for k in ("x0", "t0", "sigma") if k in flags}
    source = SourceConfig(**{**SourceConfig.default(kind).to_dict(), **src_file, **src_flags})
    merged = StudyConfig.defaults(study, source).to_dict()
    merged.update(file_cfg)
    merged.update(flags)
    if "omega1" in flags and "relative_width" not in flags:
        merged["relative_width"] = None
    merged["source"] = source
    merged = {k: v for k, v in merged.items() if k not in ("x0", "t0", "sigma")}
    try:
        return StudyConfig.from_dict(merged)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _write_atomic(path, text):
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".uqtb-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        return tmp
    except BaseException:
        os.unlink(tmp)
        raise


def run(args) -> int:
    """Execute a parsed invocation; returns the process exit status."""
    if args.command == "eval":
        if args.source == "line" and args.x < 0:
            raise UsageError("line-source radius must be non-negative")
        cfg = _source(args.source, args)
        value = source_flux(cfg, args.x, args.t, args.c)
        print(json.dumps({"uncollided": float(value.uncollided), "collided": float(value.collided),
                          "total": float(value.total)}))
        return EXIT_OK

    cfg = resolve_config(args)
    out_dir = getattr(args, "output_dir", None) or os.environ.get("UQTB_OUTPUT_DIR") or "."
    table = run_study(cfg, workers=getattr(args, "workers", 1))
    os.makedirs(out_dir, exist_ok=True)
    stem = os.path.join(out_dir, args.command)
    staged = []
    try:
        staged.append((_write_atomic(stem + ".csv", table.to_csv()), stem + ".csv"))
        staged.append((_write_atomic(stem + ".json", cfg.manifest()), stem + ".json"))
        for tmp, final in staged:
            os.replace(tmp, final)
    except BaseException:
        for tmp, final in staged:
            for p in (tmp, final):
                if os.path.exists(p):
                    os.unlink(p)
        raise
    print(stem + ".csv")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "source", None) == "line":
            radii = [getattr(args, "x", None), getattr(args, "position", None), *(getattr(args, "positions", None) or [])]
            if any(r is not None and r < 0 for r in radii):
                raise UsageError("line-source radius must be non-negative")
        return run(args)
    except UsageError as exc:
        print(f"uqtb: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MonotonicityError as exc:
        print(f"uqtb: numerical failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (DomainError, ValueError) as exc:
        print(f"uqtb: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"uqtb: non-convergence: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"uqtb: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
