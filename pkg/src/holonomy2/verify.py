"""One-call invariant harness: every structural and holonomy law evaluated on a scenario."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import catgroup as C
from . import forms as F
from .config import DEFAULT
from .lie import _fro, check_crossed_axioms
from .paths import dsmoothstep, hconcat2, reparametrize2, reverse2_s, smoothstep, vconcat2
from .scenarios import Scenario, get_scenario
from .transport import (DEFAULT_CONFIG, TransportConfig, family_derivative_check, gauge_transform, surface_holonomy,
                        translate_basepoint_check, vertical_inverse_defect)
from .forms import gauge_transform_connection

LAW_SET_VERSION = 1


@dataclass
class Entry:
    law: str
    identity: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)

    def to_json(self) -> dict:
        return {"law": self.law, "identity": self.identity, "residual": float(self.residual),
                "tolerance": float(self.tolerance), "pass": self.passed}


@dataclass
class VerifyReport:
    scenario: str
    entries: list
    config: dict
    targeted: tuple = ()
    seed: int = 0

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def failed(self) -> list:
        return [e.law for e in self.entries if not e.passed]

    @property
    def as_expected(self) -> bool:
        """Failures coincide with the scenario's targeted rows (empty for ordinary scenarios)."""
        return set(self.failed) == set(self.targeted)

    def entry(self, law: str) -> Entry:
        for e in self.entries:
            if e.law == law:
                return e
        raise KeyError(law)

    def to_json(self) -> dict:
        return {"scenario": self.scenario, "seed": self.seed, "config": self.config,
                "law_set_version": LAW_SET_VERSION, "targeted": sorted(self.targeted),
                "pass": self.passed, "as_expected": self.as_expected,
                "entries": [e.to_json() for e in self.entries]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def to_table(self) -> str:
        head = ("law", "residual", "tolerance", "status")
        rows = [(e.law, f"{e.residual:.3e}", f"{e.tolerance:.1e}", "pass" if e.passed else "FAIL")
                for e in self.entries]
        widths = [max(len(r[i]) for r in rows + [head]) for i in range(4)]
        fmt = "  ".join("{:<%d}" % w for w in widths)
        lines = [f"scenario: {self.scenario}", fmt.format(*head), fmt.format(*("-" * w for w in widths))]
        lines += [fmt.format(*r) for r in rows]
        if self.targeted:
            lines.append(f"targeted rows: {', '.join(sorted(self.targeted))}; "
                         f"{'failures match' if self.as_expected else 'failures DO NOT match'}")
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["scenario", "law", "residual", "tolerance", "pass"])
        for e in self.entries:
            w.writerow([self.scenario, e.law, repr(float(e.residual)), repr(float(e.tolerance)), int(e.passed)])
        return buf.getvalue()


# ---------------------------------------------------------------- law evaluation


class _Context:
    """Shared state for one suite run; caches the base surface holonomies."""

    def __init__(self, sc: Scenario, cfg: TransportConfig, seed: int):
        self.sc = sc
        self.cfg = cfg
        self.seed = seed
        self._hol = {}

    def hol(self, key):
        if key not in self._hol:
            self._hol[key] = surface_holonomy(self.sc.conn, self.sc.surfaces[key], self.cfg)
        return self._hol[key]


def _crossed(ctx):
    return check_crossed_axioms(ctx.sc.module, 100, ctx.seed)


def _cartan(ctx):
    return F.check_cartan_structure(ctx.sc.conn, 16, ctx.seed)


def _two_structure(ctx):
    return F.check_two_structure(ctx.sc.conn, 16, ctx.seed)


def _fake(ctx):
    return F.check_fake_curvature(ctx.sc.conn, 32, ctx.seed)


def _bianchi(ctx):
    return F.check_bianchi(ctx.sc.conn, 32, ctx.seed)


def _two_bianchi(ctx):
    return F.check_2bianchi(ctx.sc.conn, 32, ctx.seed)


def _alternation(ctx):
    return F.check_alternation(ctx.sc.conn, 32, ctx.seed)


def _target(ctx):
    return max(ctx.hol(k).target_defect for k in ("G1", "G2", "G3"))


def _vertical(ctx):
    sc, cfg = ctx.sc, ctx.cfg
    whole = surface_holonomy(sc.conn, vconcat2(sc.surfaces["G1"], sc.surfaces["G2"]),
                             replace(cfg, steps_s=2 * cfg.steps_s)).morphism
    prod = C.compose(ctx.hol("G1").morphism, ctx.hol("G2").morphism, tol=np.inf)
    return C.morphism_distance(whole, prod)


def _horizontal(ctx):
    sc, cfg = ctx.sc, ctx.cfg
    whole = surface_holonomy(sc.conn, hconcat2(sc.surfaces["G1"], sc.surfaces["G3"]),
                             replace(cfg, steps_t=2 * cfg.steps_t)).morphism
    return C.morphism_distance(whole, C.tensor(ctx.hol("G1").morphism, ctx.hol("G3").morphism))


def _interchange(ctx):
    rng = np.random.default_rng(ctx.seed)
    worst = 0.0
    for _ in range(100):
        worst = max(worst, C.check_interchange(*C.random_interchange_grid(ctx.sc.module, rng, 0.7)))
    return worst


def _reparam(ctx):
    sc = ctx.sc
    other = surface_holonomy(sc.conn, reparametrize2(sc.surfaces["G1"], smoothstep, dsmoothstep), ctx.cfg)
    return C.morphism_distance(ctx.hol("G1").morphism, other.morphism)


def _inverse(ctx):
    return vertical_inverse_defect(ctx.sc.conn, ctx.sc.surfaces["G1"], ctx.cfg, forward=ctx.hol("G1"))


def _gauge(ctx):
    sc = ctx.sc
    phi = sc.gauge
    new = surface_holonomy(gauge_transform_connection(sc.conn, phi), sc.surfaces["G1"], ctx.cfg).morphism
    b = sc.surfaces["G1"](0.0, 0.0)
    g = sc.module.base.inv(phi.value(b)[0])
    return C.morphism_distance(new, gauge_transform(ctx.hol("G1").morphism, g))


def _basepoint(ctx):
    return translate_basepoint_check(ctx.sc.conn, ctx.sc.surfaces["G1"], ctx.sc.mu, ctx.cfg)


def _family(ctx):
    sc = ctx.sc
    moving = family_derivative_check(sc.conn, sc.family, ctx.cfg)
    return moving


T = DEFAULT

# (name, formula, evaluator, default tolerance)
LAWS: tuple = (
    ("crossed_axioms", "d(X|>e) = X d(e) X^-1, d(e)|>f = e f e^-1 and algebra versions", _crossed, T.axioms),
    ("cartan_structure", "d omega + 1/2 [omega ^ omega] = Ad(g^-1) pi* Omega0 on M x G", _cartan, T.structure_fd),
    ("two_structure", "dm + omega ^|> m = g^-1 |> pi* M0 on M x G", _two_structure, T.structure_fd),
    ("fake_curvature", "d(m0) = Omega0", _fake, T.structure_fd),
    ("bianchi", "d Omega0 + [omega0 ^ Omega0] = 0", _bianchi, T.structure_fd),
    ("two_bianchi", "d M0 + omega0 ^|> M0 = 0", _two_bianchi, T.structure_fd),
    ("alternation", "d(m0) ^|> m0 = 0", _alternation, T.structure_analytic),
    ("target_law", "g0 d(e) = g1", _target, T.target_law),
    ("vertical_functoriality", "F(G1 over G2) = F(G1) o F(G2)", _vertical, T.functoriality),
    ("horizontal_monoidality", "F(G1 beside G2) = F(G1) (x) F(G2)", _horizontal, T.functoriality),
    ("interchange", "(a o b) (x) (c o d) = (a (x) c) o (b (x) d)", _interchange, T.interchange),
    ("reparametrization_invariance", "F(Gamma(t, f(s))) = F(Gamma)", _reparam, T.reparametrization),
    ("vertical_inverse", "e(reversed Gamma) = e(Gamma)^-1", _inverse, T.vertical_inverse),
    ("gauge_covariance", "F under phi = phi(b)^-1 |> F", _gauge, T.gauge),
    ("basepoint_translation", "F_x(mu^-1 Gamma mu) = F_y(Gamma) at the transported frame", _basepoint, T.basepoint),
    ("family_derivative", "e^-1 de/dx = int int b^-1 |> M0(J_x, J_t, J_s) (relative)", _family,
     T.family_derivative),
)

LAW_NAMES: tuple = tuple(name for name, *_ in LAWS)


def run_suite(scenario, cfg: TransportConfig = DEFAULT_CONFIG, seed: int = 0, tol: float | None = None,
              params: dict | None = None, laws=None, progress: Callable | None = None) -> VerifyReport:
    """Evaluate every registered law on ``scenario`` (a name or a Scenario).

    ``tol`` overrides all row tolerances; ``laws`` restricts to a subset
    (the report then only holds those rows).
    """
    sc = scenario if isinstance(scenario, Scenario) else get_scenario(scenario, params)
    ctx = _Context(sc, cfg, seed)
    wanted = LAW_NAMES if laws is None else tuple(laws)
    unknown = set(wanted) - set(LAW_NAMES)
    if unknown:
        raise KeyError(f"unknown laws: {sorted(unknown)}")
    entries = []
    for name, formula, fn, default_tol in LAWS:
        if name not in wanted:
            continue
        if progress is not None:
            progress(name)
        residual = float(fn(ctx))
        entries.append(Entry(name, formula, residual, default_tol if tol is None else tol))
    return VerifyReport(sc.name, entries, {**cfg.to_json(), "params": sc.params}, tuple(sorted(sc.targeted)), seed)
