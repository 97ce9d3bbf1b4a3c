"""Command-line entry point: ``catmood solve`` and ``catmood converge``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .driver import ConfigError, RunConfig, convergence_study, l1_error, run
from .io import apply_overrides, parse_config, write_convergence_table
from .mood import SolverFatalError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_FATAL = 3


def _add_overrides(p: argparse.ArgumentParser):
    p.add_argument("--case")
    p.add_argument("--scheme")
    p.add_argument("--nx", type=int)
    p.add_argument("--ny", type=int)
    p.add_argument("--cfl", type=float)
    p.add_argument("--tfinal", type=float, dest="t_final")
    p.add_argument("--outdir")
    p.add_argument("--cascade")
    p.add_argument("--parachute")
    p.add_argument("--limiter")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="catmood", description="CAT / ACAT / CATMOOD solver")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="run one case")
    ps.add_argument("--config", help="key=value configuration file")
    _add_overrides(ps)

    pc = sub.add_parser("converge", help="convergence study on a case with an exact solution")
    pc.add_argument("--case", required=True)
    pc.add_argument("--scheme", required=True)
    pc.add_argument("--resolutions", default="50,100,200")
    pc.add_argument("--cfl", type=float)
    pc.add_argument("--tfinal", type=float, dest="t_final")
    return parser


def _solve(args) -> int:
    if args.config:
        cfg = parse_config(Path(args.config).read_text())
    else:
        cfg = RunConfig()
    cfg = apply_overrides(cfg, case=args.case, scheme=args.scheme, nx=args.nx, ny=args.ny,
                          cfl=args.cfl, t_final=args.t_final, outdir=args.outdir,
                          cascade=args.cascade, parachute=args.parachute, limiter=args.limiter)
    res = run(cfg)
    print(f"case={cfg.case} scheme={cfg.scheme} t={res.t:.6g} steps={res.steps} "
          f"wall={res.wall_time:.2f}s")
    if res.stats:
        shares = ", ".join(f"{n}={res.mean_share(k):.2f}%" for k, n in enumerate(res.scheme_names))
        print(f"mean share per scheme: {shares}")
    if res.case.exact is not None:
        print(f"L1 density error (per unit measure): {l1_error(res, normalize=True):.6e}")
    print("relative conservation drift: " + " ".join(f"{d:.3e}" for d in res.drift))
    return EXIT_OK


def _converge(args) -> int:
    try:
        ns = [int(s) for s in args.resolutions.split(",") if s.strip()]
    except ValueError:
        raise ConfigError(f"bad --resolutions {args.resolutions!r}") from None
    if len(ns) < 1:
        raise ConfigError("need at least one resolution")
    kw = {}
    if args.cfl is not None:
        kw["cfl"] = args.cfl
    if args.t_final is not None:
        kw["t_final"] = args.t_final
    rows = convergence_study(args.case, args.scheme, ns, **kw)
    sys.stdout.write(write_convergence_table(rows))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "solve":
            return _solve(args)
        return _converge(args)
    except (ConfigError, FileNotFoundError) as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverFatalError as e:
        print(f"solver failure: {e}", file=sys.stderr)
        if e.state is not None:
            print(f"  state: {e.state}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
