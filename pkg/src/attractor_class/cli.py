"""Command-line entry point.

Exit codes: 0 success (or "equivalent"), 1 "not equivalent" or a failed
verification, 2 invalid input or usage.  Data goes to stdout, diagnostics to
stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

import numpy as np

from .dynamics import NoCrossing, NonFiniteField
from .feasible import FeasibleError, dumps_feasible, loads_feasible
from .skeleton import ConfigError, canonical_feasible_set, decide_equivalence, parse_configuration
from .synthesis import PortraitOptions, render_portrait, synthesize_configuration

EXIT_OK, EXIT_NO, EXIT_INPUT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_validate(args) -> int:
    L = loads_feasible(_read(args.feasible))
    print(f"valid: t={L.t} n={L.n} |V|={len(L.base)} |L|={len(L)}")
    return EXIT_OK


def cmd_canonical(args) -> int:
    cfg = parse_configuration(_read(args.config))
    L = canonical_feasible_set(cfg, args.orientation, args.sigma)
    print(dumps_feasible(L))
    return EXIT_OK


def cmd_equiv(args) -> int:
    a = parse_configuration(_read(args.a))
    b = parse_configuration(_read(args.b))
    res = decide_equivalence(a, b)
    print("equivalent" if res.equivalent else "not equivalent")
    if args.witness and res.witness is not None:
        th1, s1, th2, s2 = res.witness
        print(json.dumps({"orientation_a": th1.value, "sigma_a": s1,
                          "orientation_b": th2.value, "sigma_b": s2}, sort_keys=True))
    return EXIT_OK if res.equivalent else EXIT_NO


def cmd_synth(args) -> int:
    L = loads_feasible(_read(args.feasible))
    _write(args.out, synthesize_configuration(L).to_json() + "\n")
    return EXIT_OK


def cmd_portrait(args) -> int:
    L = loads_feasible(_read(args.feasible))
    opts = PortraitOptions(samples_per_block=args.samples, step=args.step, max_arc=args.max_arc,
                           ymax=args.ymax, seed=args.seed)
    doc = render_portrait(L, opts)
    doc.write(svg=args.svg, csv_path=args.csv, json_path=args.json)
    if args.png:
        from .plotting import plot_portrait
        plot_portrait(doc, args.png)
    n_flag = sum(c.role != "generic" for c in doc.curves)
    print(f"{len(doc.curves)} curves ({n_flag} separatrices and representatives) written",
          file=sys.stderr)
    return EXIT_OK


def cmd_example_verify(args) -> int:
    from .example_system import run_all_checks
    if not args.all:
        raise UsageError("example verify: pass --all to run every check")
    checks = run_all_checks(step=args.step)
    print("TAP version 13")
    print(f"1..{len(checks)}")
    for k, c in enumerate(checks, start=1):
        print(f"{'ok' if c.passed else 'not ok'} {k} - {c.name} # {c.detail}")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_NO


def cmd_example_ymap(args) -> int:
    from .example_system import y_map
    if not (0 < args.start < args.stop) or args.points < 1:
        raise UsageError("y-map needs 0 < --from < --to and --points >= 1")
    pairs = y_map(np.geomspace(args.start, args.stop, args.points), step=args.step)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["y0", "Y"])
    for y0, yy in pairs:
        writer.writerow([f"{y0:.17g}", f"{yy:.17g}"])
    _write(args.csv, buf.getvalue())
    if args.png:
        from .plotting import plot_y_map
        plot_y_map(pairs, args.png)
    print(f"min Y = {min(p[1] for p in pairs):.6f}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="attractor-class",
                description="Feasible-set classification of flows with a global attractor.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", help="check a feasible-set JSON file")
    s.add_argument("--feasible", required=True)
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("canonical", help="canonical feasible set of a configuration")
    s.add_argument("--config", required=True)
    s.add_argument("--orientation", choices=["ccw", "cw"], default="ccw")
    s.add_argument("--sigma", required=True, help="orbit id of a heteroclinic separatrix")
    s.set_defaults(func=cmd_canonical)

    s = sub.add_parser("equiv", help="decide topological equivalence of two configurations")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--witness", action="store_true")
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("synth", help="configuration of the flow built from a feasible set")
    s.add_argument("--feasible", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("portrait", help="render the phase portrait of the built flow")
    s.add_argument("--feasible", required=True)
    s.add_argument("--svg", required=True)
    s.add_argument("--csv")
    s.add_argument("--json")
    s.add_argument("--png")
    s.add_argument("--ymax", type=float, default=3.0)
    s.add_argument("--step", type=float, default=1e-2)
    s.add_argument("--max-arc", type=float, default=20.0)
    s.add_argument("--samples", type=int, default=2, help="generic orbits per block")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_portrait)

    s = sub.add_parser("example", help="the explicit polynomial example")
    ex = s.add_subparsers(dest="example_command", required=True, parser_class=_Parser)
    v = ex.add_parser("verify", help="run the numerical checks (TAP output)")
    v.add_argument("--all", action="store_true")
    v.add_argument("--step", type=float, default=1e-3)
    v.set_defaults(func=cmd_example_verify)
    y = ex.add_parser("y-map", help="tabulate the crossing map with y = -2x")
    y.add_argument("--from", dest="start", type=float, default=1e-3)
    y.add_argument("--to", dest="stop", type=float, default=10.0)
    y.add_argument("--points", type=int, default=60)
    y.add_argument("--step", type=float, default=1e-3)
    y.add_argument("--csv")
    y.add_argument("--png")
    y.set_defaults(func=cmd_example_ymap)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
    except (FeasibleError, ConfigError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"i/o error: {exc.strerror or exc}: {exc.filename}", file=sys.stderr)
    except (ValueError, NoCrossing, NonFiniteField) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
