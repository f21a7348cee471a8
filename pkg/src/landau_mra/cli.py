"""landau-mra command line.

Every JSON output embeds the run configuration; ``--replay FILE`` reruns it.
Relative output paths resolve under $LANDAU_MRA_OUTPUT_DIR when set.
Exit codes: 0 pass, 1 numeric failure, 2 usage or I/O error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .coulomb import MonteCarloConfig, delta_e, wigner_energy
from .filters import (
    FilterBank,
    FilterParseError,
    InvalidFilterError,
    builtin,
    load_filter,
    validate_orthonormality,
    validate_sum_rule,
)
from .generator import from_filter, max_identity_deviation, onc_matrix
from .landau import LLLState, sample_field
from .lattice import PATTERNS, SHAPES, TRIANGULAR, make_lattice
from .zak import j_d_flatness, t_d_zak_function

OUTPUT_ENV = "LANDAU_MRA_OUTPUT_DIR"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- config plumbing

def _filter_config(args) -> dict:
    if args.file:
        try:
            f = load_filter(args.file)
        except OSError as exc:
            raise UsageError(f"cannot read filter file: {exc}") from None
    else:
        f = builtin(args.builtin, getattr(args, "filter_d", None))
    return {"name": f.name, "d": f.d, "coeffs": [[n, c.real, c.imag] for n, c in f.coeffs.items()]}


def _filter_from(cfg: dict) -> FilterBank:
    return FilterBank(cfg["d"], {int(n): complex(re, im) for n, re, im in cfg["coeffs"]}, name=cfg.get("name"))


def build_config(args) -> dict:
    cfg = {"command": args.command, "version": __version__, "filter": _filter_config(args)}
    d = cfg["filter"]["d"]
    if args.command == "validate":
        cfg["tol"] = args.tol
    elif args.command == "onc-check":
        cfg.update(lattice={"shape": args.shape, "d": args.d or d, "pattern": args.pattern},
                   nmax=args.nmax, mmax=args.mmax, tol=args.tol)
    elif args.command == "zak-check":
        cfg.update(lattice={"shape": args.shape, "d": args.d or d, "pattern": "along_a2"},
                   grid=args.grid, tol=args.tol)
    elif args.command == "synthesize":
        cfg.update(lattice={"shape": args.shape, "d": 1, "pattern": "along_a2"}, level=args.level,
                   translate=list(args.translate),
                   grid={"xmin": args.xmin, "xmax": args.xmax, "ymin": args.ymin, "ymax": args.ymax,
                         "step": args.step},
                   format=args.format)
    elif args.command == "coulomb":
        mc = MonteCarloConfig(seed=args.seed, n_points=args.points, sampler=args.sampler,
                              half_width=args.half_width)
        cfg.update(lattice={"shape": args.shape, "d": args.d or d, "pattern": args.pattern},
                   radius=args.radius, exchange=args.exchange, mc=mc.as_dict())
    return cfg


def _lattice(cfg):
    lat = cfg["lattice"]
    return make_lattice(lat["shape"], lat["d"], lat["pattern"])


# ---------------------------------------------------------------- commands

def cmd_validate(cfg, threads=1):
    f = _filter_from(cfg["filter"])
    rep = validate_orthonormality(f, cfg["tol"])
    # the sum rule is advisory: reported, never decides the exit code
    return rep.passed, {"validation": rep.as_dict(), "sum_rule_residual": validate_sum_rule(f)}


def cmd_onc_check(cfg, threads=1):
    f = _filter_from(cfg["filter"])
    lat = _lattice(cfg)
    mat = onc_matrix(from_filter(f, lat), lat, cfg["nmax"], cfg["mmax"])
    dev = max_identity_deviation(mat)
    return dev <= cfg["tol"], {
        "max_deviation": dev,
        "matrix_re": mat.real.tolist(),
        "matrix_im": mat.imag.tolist(),
    }


def cmd_zak_check(cfg, threads=1):
    f = _filter_from(cfg["filter"])
    lat = _lattice(cfg)
    rep = j_d_flatness(t_d_zak_function(f, lat), lat.d, cfg["grid"])
    return rep.max_deviation < cfg["tol"], {"target": rep.target, "max_deviation": rep.max_deviation}


def cmd_synthesize(cfg, threads=1):
    f = _filter_from(cfg["filter"])
    lat = _lattice(cfg)
    g = cfg["grid"]
    if not g["step"] > 0 or g["xmax"] < g["xmin"] or g["ymax"] < g["ymin"]:
        raise UsageError("grid needs step > 0 and min <= max")
    x = np.arange(round((g["xmax"] - g["xmin"]) / g["step"]) + 1) * g["step"] + g["xmin"]
    y = np.arange(round((g["ymax"] - g["ymin"]) / g["step"]) + 1) * g["step"] + g["ymin"]
    state = LLLState.from_filter(f, lat, cfg["level"]).translated(*cfg["translate"])
    field = sample_field(state, x, y, {"filter": f.name, "lattice": lat.as_dict(), "translate": cfg["translate"]})
    return True, {"norm_estimate": field.norm_estimate, "field": field}


def cmd_coulomb(cfg, threads=1):
    f = _filter_from(cfg["filter"])
    lat = _lattice(cfg)
    mc = MonteCarloConfig.from_dict({**cfg["mc"], "threads": threads})
    state = LLLState.from_filter(f, lat)
    with warnings.catch_warnings():
        # recorded in the report provenance instead
        warnings.simplefilter("ignore", RuntimeWarning)
        rep = delta_e(state, lat, lat.d, cfg["radius"] * lat.a, mc, include_exchange=cfg["exchange"])
    for note in rep.provenance["warnings"]:
        print(f"landau-mra: note: {note}", file=sys.stderr)
    return math.isfinite(rep.delta_e), {"report": rep}


COMMANDS = {
    "validate": cmd_validate,
    "onc-check": cmd_onc_check,
    "zak-check": cmd_zak_check,
    "synthesize": cmd_synthesize,
    "coulomb": cmd_coulomb,
}


# ---------------------------------------------------------------- output

def _resolve(path: str) -> Path:
    p = Path(path)
    if not p.is_absolute() and os.environ.get(OUTPUT_ENV):
        p = Path(os.environ[OUTPUT_ENV]) / p
    return p


def _write_csv(field, path: Path):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "re", "im", "abs"])
        for row in field.rows():
            w.writerow(["%.17g" % v for v in row])


def _write_pairs_csv(report, path: Path):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "m", "distance", "direct", "direct_stderr", "exchange", "exchange_stderr", "classical", "term"])
        for p in report.pairs:
            ex = p.exchange
            w.writerow([p.site.n, p.site.m] + ["%.17g" % v for v in (
                p.distance, p.direct.value, p.direct.stderr,
                ex.value if ex else 0.0, ex.stderr if ex else 0.0, p.classical, p.value)])


def _jsonable(result: dict) -> dict:
    out = {}
    for k, v in result.items():
        if k == "field":
            out["grid"] = {"x": v.x.tolist(), "y": v.y.tolist()}
            out["values_re"] = v.values.real.tolist()
            out["values_im"] = v.values.imag.tolist()
        elif k == "report":
            out.update(v.as_dict())
        else:
            out[k] = v
    return out


def emit(cfg, passed, result, args) -> None:
    # json writes floats as shortest round-trip repr, i.e. bit-exact
    doc = {"config": cfg, "passed": bool(passed), "result": _jsonable(result)}
    fmt = cfg.get("format", "json")
    if args.output:
        path = _resolve(args.output)
        path.parent.mkdir(parents=True, exist_ok=True)
        if fmt == "csv" and "field" in result:
            _write_csv(result["field"], path)
        else:
            path.write_text(json.dumps(doc, indent=1) + "\n")
    else:
        summary = {k: v for k, v in doc["result"].items() if k not in ("values_re", "values_im", "grid", "pairs")}
        print(json.dumps({"command": cfg["command"], "passed": doc["passed"], **summary}, indent=1))
    if getattr(args, "pairs_csv", None) and "report" in result:
        _write_pairs_csv(result["report"], _resolve(args.pairs_csv))


# ---------------------------------------------------------------- argparse

def _add_filter(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--builtin", help="haar2, haar3, haar<d> or haar_d (with --filter-d)")
    g.add_argument("--file", help="filter file: 'd=<int>' header then '<n> <re> <im>' lines")
    p.add_argument("--filter-d", type=int, help="dilation for --builtin haar_d")


def _add_lattice(p, with_pattern=True):
    p.add_argument("--shape", choices=SHAPES, default=TRIANGULAR)
    p.add_argument("--d", type=int, help="sublattice period (defaults to the filter dilation)")
    if with_pattern:
        p.add_argument("--pattern", choices=PATTERNS, default="along_a2")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="landau-mra", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--replay", metavar="FILE", help="rerun the config embedded in a JSON output")
    parser.add_argument("--threads", type=int, default=1, help="worker cap; never changes results")
    parser.add_argument("--output", "-o", help="output file (default: summary on stdout)")
    # also accepted after the subcommand; SUPPRESS keeps the top-level value otherwise
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    common.add_argument("--output", "-o", default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("validate", parents=[common], help="check the filter orthonormality residuals")
    _add_filter(p)
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("onc-check", parents=[common], help="s-space ONC matrix of the generator")
    _add_filter(p)
    _add_lattice(p)
    p.add_argument("--nmax", type=int, default=2)
    p.add_argument("--mmax", type=int, default=2)
    p.add_argument("--tol", type=float, default=1e-8)

    p = sub.add_parser("zak-check", parents=[common], help="flatness of J_d on a grid over the Zak cell")
    _add_filter(p)
    _add_lattice(p, with_pattern=False)
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("synthesize", parents=[common], help="sample the wavefunction on a rectangular grid")
    _add_filter(p)
    p.add_argument("--shape", choices=SHAPES, default=TRIANGULAR)
    p.add_argument("--level", type=int, default=0)
    p.add_argument("--translate", type=int, nargs=2, default=(0, 0), metavar=("N", "M"))
    for name, val in (("xmin", -5.0), ("xmax", 5.0), ("ymin", -5.0), ("ymax", 5.0)):
        p.add_argument(f"--{name}", type=float, default=val)
    p.add_argument("--step", type=float, default=0.5)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("coulomb", parents=[common], help="Monte Carlo quantum correction delta E")
    _add_filter(p)
    _add_lattice(p)
    p.add_argument("--radius", type=float, default=6.0, help="lattice truncation radius in units of a")
    p.add_argument("--points", type=int, default=250_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--sampler", choices=("gaussian", "uniform"), default="gaussian")
    p.add_argument("--half-width", type=float, help="sampling box half-width (default 6a)")
    p.add_argument("--exchange", action="store_true", help="include exchange integrals")
    p.add_argument("--pairs-csv", help="also write per-pair terms as CSV")

    p = sub.add_parser("wigner", parents=[common], help="classical Wigner crystal energy by Ewald summation")
    p.add_argument("--nu", type=float, default=1.0)
    p.add_argument("--kappa", type=float)
    return parser


def run(cfg: dict, threads: int = 1):
    if cfg["command"] == "wigner":
        e = wigner_energy(cfg["nu"], cfg.get("kappa"))
        return True, {"E_W": e, "coefficient": e / math.sqrt(cfg["nu"])}
    return COMMANDS[cfg["command"]](cfg, threads)


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        if args.replay:
            cfg = json.loads(Path(args.replay).read_text())["config"]
            args.pairs_csv = None
        elif args.command is None:
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
        elif args.command == "wigner":
            cfg = {"command": "wigner", "version": __version__, "nu": args.nu, "kappa": args.kappa}
        else:
            cfg = build_config(args)
        passed, result = run(cfg, args.threads)
        emit(cfg, passed, result, args)
    except (UsageError, OSError, KeyError, json.JSONDecodeError, FilterParseError, InvalidFilterError) as exc:
        print(f"landau-mra: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"landau-mra: numeric failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK if passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
