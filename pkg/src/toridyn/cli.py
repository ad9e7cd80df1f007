"""Command-line front end: ``toridyn <command> MAP [options]``.

Every run writes one JSON report (``<prefix>.json``) plus CSV/SVG/PPM/PBM
artifacts into ``--outdir``.  Options may also come from ``--config FILE``
holding ``key = value`` lines; later lines override earlier ones and flags
on the command line override the file.

Exit codes: 0 success, 2 configuration error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import io
from .linking import LinkingError, isotopy_path, linking_number_periodic, linking_number_region
from .orbit_regions import classify_torus, default_eps
from .orbits import (
    RealizationTarget, annularity_probe, find_periodic_realizing, irrotational_probe,
)
from .regions import GridRegion
from .rotation import Ball, estimate_local_rotation_set, estimate_rotation_set
from .torus import LinearPartError, MapSpecError, map_from_spec

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

THREADS_ENV = "TORIDYN_THREADS"


class ConfigError(ValueError):
    """Bad option value, config file or map spec."""


class NumericFailure(RuntimeError):
    """The computation ran but produced no usable result."""


def _pair(text: str) -> tuple:
    try:
        a, b = (float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}") from None
    if not (math.isfinite(a) and math.isfinite(b)):
        raise argparse.ArgumentTypeError("coordinates must be finite")
    return a, b


def _int_pair(text: str) -> tuple:
    try:
        a, b = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a,b' integers, got {text!r}") from None
    return a, b


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def _default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="toridyn", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help_text):
        c = sub.add_parser(name, help=help_text, description=help_text)
        c.add_argument("map", nargs="?", help="map spec such as 'zaslavsky(0.19,1.69)'")
        c.add_argument("--config", help="file of 'key = value' lines")
        c.add_argument("--seed", type=int, default=0, help="seed for sampled starts (0)")
        c.add_argument("--threads", type=_positive_int, default=None,
                       help=f"worker threads (default ${THREADS_ENV} or the CPU count)")
        c.add_argument("--outdir", default=".", help="output directory (.)")
        c.add_argument("--prefix", default=None, help="output file prefix (the command name)")
        return c

    c = command("portrait", "phase portrait of seeded orbits as a P6 pixmap")
    c.add_argument("--orbits", type=_positive_int, default=400)
    c.add_argument("--steps", type=_positive_int, default=3000)
    c.add_argument("--size", type=_positive_int, default=800)

    c = command("rotset", "rotation-set estimate over a G x G grid of starts")
    c.add_argument("-G", "--grid", dest="G", type=_positive_int, default=16)
    c.add_argument("-N", "--horizon", dest="N", type=_positive_int, default=1000)

    c = command("localrot", "local rotation set over a ball or a bitmap region")
    c.add_argument("--center", type=_pair, default=None, help="ball center 'x,y'")
    c.add_argument("--eps", type=_positive_float, default=0.05, help="ball radius (0.05)")
    c.add_argument("--region", default=None, help="P1 bitmap file used instead of a ball")
    c.add_argument("-S", "--samples", dest="S", type=_positive_int, default=512)
    c.add_argument("-N", "--horizon", dest="N", type=_positive_int, default=1000)

    c = command("classify", "essential/inessential map and island census")
    c.add_argument("-R", "--resolution", dest="R", type=_positive_int, default=128)
    c.add_argument("-N", "--horizon", dest="N", type=_positive_int, default=300)
    c.add_argument("--eps", type=_positive_float, default=None,
                   help="ball radius of the point test (max(1/64, 2/R))")
    c.add_argument("--model", choices=("shadow", "quad"), default="shadow")

    c = command("winding", "linking number of a periodic point or region with a fixed point")
    c.add_argument("-q", "--point", dest="q", type=_pair, default=None,
                   help="periodic point 'x,y' (lift coordinates)")
    c.add_argument("--region-center", type=_pair, default=None,
                   help="center of a ball region used instead of a point")
    c.add_argument("--region-radius", type=_positive_float, default=0.02)
    c.add_argument("-R", "--resolution", dest="R", type=_positive_int, default=128)
    c.add_argument("-k", "--period", dest="k", type=_positive_int, required=False, default=None)
    c.add_argument("-p", "--fixed", dest="p", type=_pair, default=None,
                   help="fixed point 'x,y' of the lift")

    c = command("porbit", "periodic points realizing a rational rotation vector")
    c.add_argument("--target", default=None, help="'p1,p2,q'")
    c.add_argument("--grid", type=_positive_int, default=16)
    c.add_argument("--tol", type=_positive_float, default=1e-10)
    c.add_argument("--iters", type=_positive_int, default=50)

    c = command("annular", "deviation growth transverse to a lattice direction")
    c.add_argument("--direction", type=_int_pair, default=(1, 0), help="'a,b' (1,0)")
    c.add_argument("-S", "--samples", dest="S", type=_positive_int, default=256)
    c.add_argument("-N", "--horizon", dest="N", type=_positive_int, default=2000)
    c.add_argument("-G", "--grid", dest="G", type=_positive_int, default=16,
                   help="grid of the irrotationality check (16)")
    return p


# -- config files ------------------------------------------------------------------

def read_config(path) -> list:
    """``(key, value)`` pairs in file order; blank lines and ``#`` comments skipped."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    out = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"{path}:{n}: expected 'key = value'")
        out.append((key.strip(), value.strip()))
    return out


def config_text(config: dict) -> str:
    """Inverse of :func:`read_config` for a report's config echo."""
    lines = []
    for k, v in config.items():
        if v is None or k in ("command", "config"):
            continue
        if isinstance(v, (list, tuple)):
            v = ",".join(repr(x) if isinstance(x, float) else str(x) for x in v)
        elif isinstance(v, float):
            v = repr(v)
        lines.append(f"{k} = {v}")
    return "\n".join(lines) + "\n"


def _option_table(parser: argparse.ArgumentParser, command: str) -> dict:
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    table = {}
    for action in sub.choices[command]._actions:
        longs = [s for s in action.option_strings if s.startswith("--")]
        if not longs:
            continue
        table[action.dest] = longs[0]
        for s in longs:
            table[s[2:].replace("-", "_")] = longs[0]
    return table


def parse_args(argv) -> argparse.Namespace:
    """Parse ``argv``, folding in ``--config`` entries below the explicit flags."""
    argv = list(argv)
    parser = build_parser()
    first = parser.parse_args(argv)
    if first.config is None:
        return first
    table = _option_table(parser, first.command)
    tokens, config_map = [], None
    for key, value in read_config(first.config):
        if key == "map":
            config_map = value
        elif key in table:
            tokens += [table[key], value]
        else:
            raise ConfigError(f"unknown config key {key!r} for {first.command}")
    i = argv.index(first.command)
    args = parser.parse_args(argv[:i + 1] + tokens + argv[i + 1:])
    if args.map is None:
        args.map = config_map
    return args


# -- commands --------------------------------------------------------------------

def _load_map(args):
    if not args.map:
        raise ConfigError("no map spec given")
    try:
        return map_from_spec(args.map)
    except MapSpecError as e:
        raise ConfigError(str(e)) from None


def _echo(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("config",)}
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in cfg.items()}


def _out(args, suffix: str) -> Path:
    return Path(args.outdir) / f"{args.prefix}{suffix}"


def cmd_portrait(args, m) -> dict:
    img = io.portrait(m, args.orbits, args.steps, args.size, args.seed)
    path = _out(args, ".ppm")
    io.write_ppm(path, img)
    plotted = int(np.sum(np.any(img != io.BACKGROUND, axis=-1)))
    return {"image": path.name, "plotted_pixels": plotted}


def _write_estimate(args, est) -> dict:
    io.write_samples_csv(_out(args, "_samples.csv"), est)
    io.write_points_csv(_out(args, "_hull.csv"), est.hull.vertices)
    io.write_text(_out(args, "_hull.svg"), io.hull_svg(est.hull.vertices, est.values))
    out = est.to_dict()
    out["files"] = [_out(args, s).name for s in ("_samples.csv", "_hull.csv", "_hull.svg")]
    return out


def cmd_rotset(args, m) -> dict:
    return _write_estimate(args, estimate_rotation_set(m, args.G, args.N, args.threads))


def cmd_localrot(args, m) -> dict:
    if args.region is not None:
        try:
            U = GridRegion.from_pbm(Path(args.region).read_text())
        except (OSError, ValueError) as e:
            raise ConfigError(f"cannot load region {args.region}: {e}") from None
        if len(U) == 0:
            raise ConfigError("region is empty")
    elif args.center is not None:
        U = Ball(args.center, args.eps)
    else:
        raise ConfigError("localrot needs --center or --region")
    est = estimate_local_rotation_set(m, U, args.S, args.N, args.seed, args.threads)
    return _write_estimate(args, est)


def cmd_classify(args, m) -> dict:
    eps = default_eps(args.R) if args.eps is None else args.eps
    if eps < 2.0 / args.R:
        raise ConfigError(f"eps must be at least 2/R = {2.0 / args.R!r}")
    tc = classify_torus(m, eps, args.N, args.R, model=args.model, threads=args.threads)
    io.write_ppm(_out(args, ".ppm"), io.classification_image(tc))
    io.write_pbm(_out(args, "_ess.pbm"), tc.ess)
    io.write_pbm(_out(args, "_ine.pbm"), tc.ine)
    out = tc.summary()
    out["census"] = [i.to_dict() for i in tc.census]
    out["files"] = [_out(args, s).name for s in (".ppm", "_ess.pbm", "_ine.pbm")]
    return out


def cmd_winding(args, m) -> dict:
    if args.k is None or args.p is None:
        raise ConfigError("winding needs --period and --fixed")
    if (args.q is None) == (args.region_center is None):
        raise ConfigError("winding needs exactly one of --point and --region-center")
    if args.q is not None:
        index = linking_number_periodic(m, args.q, args.k, args.p)
        io.write_points_csv(_out(args, "_path.csv"), isotopy_path(m, args.q, args.k).vertices)
        return {"q": list(args.q), "k": args.k, "p": list(args.p), "index": index,
                "files": [_out(args, "_path.csv").name]}
    U = GridRegion.ball(args.region_center, args.region_radius, args.R)
    if len(U) == 0:
        raise ConfigError("region ball holds no cell centers; raise --region-radius or -R")
    index = linking_number_region(m, U, args.k, args.p)
    io.write_pbm(_out(args, "_region.pbm"), U)
    region_id = {"center": list(args.region_center), "radius": args.region_radius, "R": args.R}
    return {"region": region_id, "k": args.k, "p": list(args.p), "index": index,
            "files": [_out(args, "_region.pbm").name]}


def cmd_porbit(args, m) -> dict:
    if args.target is None:
        raise ConfigError("porbit needs --target p1,p2,q")
    try:
        t = RealizationTarget.parse(args.target)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    r = find_periodic_realizing(m, t, args.grid, args.iters, args.tol)
    io.write_roots_csv(_out(args, "_roots.csv"), r.roots, r.residuals)
    out = r.to_dict()
    out["files"] = [_out(args, "_roots.csv").name]
    return out


def cmd_annular(args, m) -> dict:
    if args.N < 8:
        raise ConfigError("annular needs -N of at least 8")
    try:
        curve = annularity_probe(m, args.direction, args.S, args.N, args.seed, args.threads)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    io.write_deviation_csv(_out(args, "_deviation.csv"), curve)
    out = curve.to_dict()
    out["irrotational"] = irrotational_probe(m, args.G, args.N).to_dict()
    out["files"] = [_out(args, "_deviation.csv").name]
    return out


COMMANDS = {
    "portrait": cmd_portrait, "rotset": cmd_rotset, "localrot": cmd_localrot,
    "classify": cmd_classify, "winding": cmd_winding, "porbit": cmd_porbit,
    "annular": cmd_annular,
}


def run(argv) -> tuple[int, dict]:
    """Execute one command; returns the exit code and the report (if any)."""
    args = parse_args(argv)
    if args.threads is None:
        args.threads = _default_threads()
    if args.prefix is None:
        args.prefix = args.command
    m = _load_map(args)
    Path(args.outdir).mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    try:
        results = COMMANDS[args.command](args, m)
    except LinearPartError as e:
        raise ConfigError(str(e)) from None
    except (LinkingError, ArithmeticError, np.linalg.LinAlgError) as e:
        raise NumericFailure(str(e)) from None
    report = io.make_report(args.command, _echo(args), results, time.perf_counter() - start)
    io.write_report(_out(args, ".json"), report)
    code = EXIT_OK
    if args.command == "porbit" and not results["found"]:
        code = EXIT_NUMERIC
    return code, report


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        code, report = run(argv)
    except ConfigError as e:
        print(f"toridyn: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericFailure as e:
        print(f"toridyn: numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as e:
        print(f"toridyn: I/O error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    summary = {k: v for k, v in report["results"].items() if k not in ("census", "roots", "hull")}
    print(io.dumps({"command": report["command"], "results": summary}), end="")
    if code == EXIT_NUMERIC:
        print("toridyn: no roots found", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
