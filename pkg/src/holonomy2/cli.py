"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .catgroup import matrix_to_json
from .config import DEFAULT
from .lie import MODULES, NEGATIVE_MODULES, crossed_axiom_residuals, get_module
from .scenarios import ScenarioError, get_scenario, list_scenarios
from .transport import TransportConfig, line_holonomy, surface_holonomy

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------- output helpers


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _table(rows: list[dict], columns: list[str]) -> str:
    cells = [[_fmt(r.get(c)) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    fmt = "  ".join("{:<%d}" % w for w in widths)
    lines = [fmt.format(*columns), fmt.format(*("-" * w for w in widths))]
    lines += [fmt.format(*row) for row in cells]
    return "\n".join(lines)


def _csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([r.get(c) for c in columns])
    return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "pass" if v else "FAIL"
    if isinstance(v, float):
        return f"{v:.3e}"
    return "" if v is None else str(v)


def _emit(args, payload, rows, columns):
    if args.format == "json":
        text = _dumps(payload)
    elif args.format == "csv":
        text = _csv(rows, columns)
    else:
        text = _table(rows, columns)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _config(args) -> TransportConfig:
    try:
        return TransportConfig(steps_t=args.steps_t, steps_s=args.steps_s, steps_x=args.steps_x,
                               integrator_order=args.order)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _params(args) -> dict:
    if not getattr(args, "params", None):
        return {}
    try:
        p = json.loads(args.params)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--params is not valid JSON: {exc}") from None
    if not isinstance(p, dict):
        raise ConfigError("--params must be a JSON object")
    return p


def _scenario(args):
    try:
        return get_scenario(args.scenario, _params(args))
    except (ScenarioError, KeyError) as exc:
        raise ConfigError(str(exc)) from None


def _surface(sc, key):
    if key not in sc.surfaces:
        raise ConfigError(f"scenario {sc.name} has no surface {key!r}; available: {sorted(sc.surfaces)}")
    return sc.surfaces[key]


# ---------------------------------------------------------------- subcommands


def cmd_axioms(args) -> int:
    names = args.module or sorted(MODULES)
    tol = DEFAULT.axioms if args.tol is None else args.tol
    rows = []
    for name in names:
        try:
            cm = get_module(name)
        except KeyError as exc:
            raise ConfigError(str(exc.args[0])) from None
        res = crossed_axiom_residuals(cm, args.samples, args.seed)
        worst = max(res.values())
        rows.append({"module": name, "residual": float(worst), "tolerance": tol, "pass": bool(worst <= tol),
                     **{k: float(v) for k, v in res.items()}})
    _emit(args, {"seed": args.seed, "samples": args.samples, "modules": rows}, rows,
          ["module", "residual", "tolerance", "pass"])
    return EXIT_OK if all(r["pass"] for r in rows) else EXIT_FAIL


def cmd_holonomy(args) -> int:
    sc = _scenario(args)
    cfg = _config(args)
    G2 = _surface(sc, args.surface)
    loop = G2.bottom() if args.edge == "bottom" else G2.top()
    F1 = line_holonomy(sc.conn, loop, cfg)
    G = sc.module.base
    defect = float(G.constraint_defect(F1))
    tol = DEFAULT.group_constraint if args.tol is None else args.tol
    payload = {"scenario": sc.name, "surface": args.surface, "edge": args.edge, "config": cfg.to_json(),
               "holonomy": matrix_to_json(F1), "group_defect": defect, "pass": defect <= tol}
    _emit(args, payload, [{"scenario": sc.name, "loop": f"{args.surface}.{args.edge}", "group_defect": defect,
                           "pass": defect <= tol}], ["scenario", "loop", "group_defect", "pass"])
    return EXIT_OK if defect <= tol else EXIT_FAIL


def cmd_surface(args) -> int:
    sc = _scenario(args)
    cfg = _config(args)
    res = surface_holonomy(sc.conn, _surface(sc, args.surface), cfg)
    tol = DEFAULT.target_law if args.tol is None else args.tol
    ok = res.target_defect <= tol
    payload = {"scenario": sc.name, "surface": args.surface, "config": cfg.to_json(), **res.to_json(),
               "tolerance": tol, "pass": ok}
    _emit(args, payload, [{"scenario": sc.name, "surface": args.surface, "target_defect": res.target_defect,
                           "tolerance": tol, "pass": ok}],
          ["scenario", "surface", "target_defect", "tolerance", "pass"])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_wilson(args) -> int:
    from . import wilson as W

    cfg = _config(args)
    if args.kind == "monopole":
        sc = W.monopole(args.n)
    else:
        sc = W.heis_sphere()
    if args.reverse:
        sc = W.orientation_reversed(sc)
    res = W.wilson_sphere(sc, cfg)
    tol = DEFAULT.wilson_integer if args.tol is None else args.tol
    ok = res.kernel_defect <= DEFAULT.kernel_membership and (res.rounding_distance is None
                                                              or res.rounding_distance <= tol)
    payload = {"scenario": args.kind, "n": args.n if args.kind == "monopole" else None, "config": cfg.to_json(),
               **res.to_json(), "pass": ok}
    row = {"scenario": args.kind, "orientation": res.orientation, "integer_label": res.integer_label,
           "rounding_distance": res.rounding_distance, "kernel_defect": res.kernel_defect, "pass": ok}
    _emit(args, payload, [row], list(row))
    return EXIT_OK if ok else EXIT_FAIL


def _verify_one(job):
    from .verify import run_suite

    name, cfg_kw, seed, tol, params = job
    rep = run_suite(name, TransportConfig(**cfg_kw), seed=seed, tol=tol, params=params)
    return rep.to_json(), rep.to_table(), rep.to_csv()


def cmd_verify(args) -> int:
    names = list_scenarios() if args.all or not args.scenario else args.scenario
    known = set(list_scenarios())
    bad = [n for n in names if n not in known]
    if bad:
        raise ConfigError(f"unknown scenario(s) {bad}; known: {sorted(known)}")
    cfg = _config(args)
    cfg_kw = {k: v for k, v in cfg.to_json().items()}
    jobs = [(n, cfg_kw, args.seed, args.tol, _params(args)) for n in names]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_verify_one, jobs))
    else:
        results = [_verify_one(j) for j in jobs]
    reports = [r[0] for r in results]
    if args.format == "json":
        text = _dumps(reports[0] if len(reports) == 1 else {"reports": reports})
    elif args.format == "csv":
        parts = [r[2] for r in results]
        text = parts[0] + "".join(p.split("\n", 1)[1] for p in parts[1:])
    else:
        text = "\n\n".join(r[1] for r in results)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text, end="" if text.endswith("\n") else "\n")
    # exit 0 only when every row passes; a negative control that fails exactly its
    # targeted rows still exits 1, and the table notes that the failures match
    ok = all(r["pass"] for r in reports)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sweep(args) -> int:
    sc = _scenario(args)
    base = _config(args)
    G2 = _surface(sc, args.surface)
    steps = sorted(args.steps)
    rows = []
    prev = None
    for n in steps:
        try:
            cfg = TransportConfig(steps_t=n, steps_s=n, steps_x=base.steps_x, integrator_order=base.integrator_order)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        res = surface_holonomy(sc.conn, G2, cfg)
        row = {"steps": n, "target_defect": res.target_defect,
               "change": None if prev is None else float(np.abs(res.e - prev.e).max()),
               "ratio": None}
        if rows and rows[-1]["target_defect"] > 0 and res.target_defect > 0:
            row["ratio"] = rows[-1]["target_defect"] / res.target_defect
        rows.append(row)
        prev = res
    tol = DEFAULT.target_law if args.tol is None else args.tol
    ok = rows[-1]["target_defect"] <= tol
    _emit(args, {"scenario": sc.name, "surface": args.surface, "order": base.integrator_order, "rows": rows,
                 "tolerance": tol, "pass": ok}, rows, ["steps", "target_defect", "change", "ratio"])
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    d = TransportConfig()
    common.add_argument("--steps-t", type=int, default=d.steps_t)
    common.add_argument("--steps-s", type=int, default=d.steps_s)
    common.add_argument("--steps-x", type=int, default=d.steps_x)
    common.add_argument("--order", type=int, choices=(2, 4), default=d.integrator_order)
    common.add_argument("--tol", type=float, default=None, help="override every row tolerance")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv", "table"), default="table")
    common.add_argument("--output", default=None, help="write to this file instead of stdout")
    common.add_argument("--jobs", type=int, default=1)

    p = argparse.ArgumentParser(prog="holonomy2", description="Categorical holonomy of 2-connections.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("axioms", parents=[common], help="crossed-module axiom residuals")
    a.add_argument("--module", action="append", choices=sorted(MODULES) + sorted(NEGATIVE_MODULES))
    a.add_argument("--samples", type=int, default=100)
    a.set_defaults(func=cmd_axioms)

    h = sub.add_parser("holonomy", parents=[common], help="1-holonomy of a scenario loop")
    h.add_argument("scenario")
    h.add_argument("--surface", default="G1")
    h.add_argument("--edge", choices=("bottom", "top"), default="bottom")
    h.add_argument("--params", default=None, help="JSON object of scenario parameters")
    h.set_defaults(func=cmd_holonomy)

    s = sub.add_parser("surface", parents=[common], help="surface holonomy of a scenario 2-path")
    s.add_argument("scenario")
    s.add_argument("--surface", default="G1")
    s.add_argument("--params", default=None)
    s.set_defaults(func=cmd_surface)

    w = sub.add_parser("wilson", parents=[common], help="Wilson sphere")
    w.add_argument("kind", nargs="?", choices=("monopole", "heis-sphere"), default="monopole")
    w.add_argument("--n", type=int, default=1)
    w.add_argument("--reverse", action="store_true", help="reverse the orientation")
    w.set_defaults(func=cmd_wilson)

    v = sub.add_parser("verify", parents=[common], help="run the law suite")
    v.add_argument("scenario", nargs="*")
    v.add_argument("--all", action="store_true")
    v.add_argument("--params", default=None)
    v.set_defaults(func=cmd_verify)

    sw = sub.add_parser("sweep", parents=[common], help="convergence of the target law")
    sw.add_argument("scenario")
    sw.add_argument("--steps", type=int, nargs="+", default=[32, 64, 128])
    sw.add_argument("--surface", default="G1")
    sw.add_argument("--params", default=None)
    sw.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        print("holonomy2: error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"holonomy2: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
