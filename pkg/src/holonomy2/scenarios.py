"""Registry of named scenarios: a local connection plus the test paths used by the law checks.

Builtin scenarios are generated deterministically from a seed.  Extra
scenarios can be dropped into ``$HOLONOMY2_SCENARIO_DIR`` as JSON files of
the form ``{"name": ..., "base": <builtin name>, "params": {...}}``.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import paths as P
from .forms import (GaugeFunction, LocalConnection, poly_form, random_poly_form, wedge, zero_form)
from .lie import _comm, get_module


class ScenarioError(ValueError):
    pass


@dataclass(eq=False)
class Scenario:
    name: str
    conn: LocalConnection
    surfaces: dict
    mu: P.Path1
    family: P.Path3
    family_const: P.Path3
    gauge: GaugeFunction
    params: dict = field(default_factory=dict)
    targeted: frozenset = frozenset()
    description: str = ""

    @property
    def module(self):
        return self.conn.module

    @property
    def negative(self) -> bool:
        return bool(self.targeted)

    @property
    def chart_dim(self) -> int:
        return self.conn.chart_dim


# ---------------------------------------------------------------- data builders


def poly_connection(cm, n, rng, omega_scale=0.5, beta=0.0, m_factor=1.0, max_degree=2, name=""):
    """Random polynomial omega0 with m0 = m_factor * section(Omega0) + beta * (kernel-valued 2-form).

    With m_factor = 1 the pair is fake flat; any other factor breaks it.
    """
    G, E = cm.base, cm.fiber
    w = random_poly_form(rng, 1, n, G.basis, max_degree, omega_scale)
    curv = w.d() + wedge(w, w, _comm, G.dim).scale(0.5)
    m0 = curv.map(cm.section, E.dim).scale(m_factor)
    if beta and len(cm.kernel_basis):
        m0 = m0 + random_poly_form(rng, 2, n, cm.kernel_basis, max_degree, beta)
    return LocalConnection(cm, w, m0, n, name=name)


def inner_connection(cm, n, rng, scale=0.5, beta=0.0, max_degree=2, name=""):
    """omega0 = d(xi), m0 = d xi + 1/2 [xi ^ xi] + beta kappa for a fiber-valued 1-form xi.

    Fake flat for any crossed module because the boundary map is a Lie algebra map.
    """
    E = cm.fiber
    xi = random_poly_form(rng, 1, n, E.basis, max_degree, scale)
    w = xi.map(cm.boundary_alg, cm.base.dim)
    m0 = xi.d() + wedge(xi, xi, _comm, E.dim).scale(0.5)
    if beta and len(cm.kernel_basis):
        m0 = m0 + random_poly_form(rng, 2, n, cm.kernel_basis, max_degree, beta)
    return LocalConnection(cm, w, m0, n, name=name)


def _test_paths(n, rng, base, amp):
    b = np.asarray(base, dtype=np.float64)

    def c(k=2):
        return rng.normal(scale=amp, size=(k, n))

    A, B, D = c(), c(), c()
    surfaces = {
        "G1": P.bump_square(b, A, B, c(1)),
        "G2": P.bump_square(b, B, D, c(1)),
        "G3": P.bump_square(b, c(), c(), c(1)),
    }
    mu = P.segment(b, b + rng.normal(scale=amp, size=n))
    cm0, cm1, ctw = c(), c(1), c(2)
    qv, qa = rng.normal(scale=amp, size=n), rng.normal(scale=amp / 2, size=n)
    family = P.x_bubble(b, qv, qa, cm0, cm1, ctw)
    const = P.x_bubble(b, None, None, cm0, None, ctw)
    return surfaces, mu, family, const


def _gauge(G, n, rng, scale):
    gens = np.array([G.random_alg(rng, (), scale) for _ in range(n)])
    return GaugeFunction(G, G.random(rng, (), scale), gens)


def _assemble(name, conn, params, rng, targeted=(), description=""):
    n = conn.chart_dim
    base = params.get("base_point", [0.1] * n)
    if len(base) != n:
        raise ScenarioError(f"base_point must have {n} entries")
    surfaces, mu, fam, const = _test_paths(n, rng, base, params.get("amplitude", 0.3))
    phi = _gauge(conn.module.base, n, rng, params.get("gauge_scale", 0.4))
    return Scenario(name, conn, surfaces, mu, fam, const, phi, dict(params), frozenset(targeted), description)


# ---------------------------------------------------------------- builtins


def _flat_trivial(name, p):
    cm = get_module("heis-r2")
    n = p.get("chart_dim", 4)
    conn = LocalConnection(cm, zero_form(1, n, cm.base.dim), zero_form(2, n, cm.fiber.dim), n, name=name)
    return _assemble(name, conn, p, np.random.default_rng(p.get("seed", 0)),
                     description="zero connection on heis-r2")


def _poly(module, chart_dim, beta=0.0, m_factor=1.0, targeted=(), description=""):
    def build(name, p):
        cm = get_module(p.get("module", module))
        n = p.get("chart_dim", chart_dim)
        rng = np.random.default_rng(p.get("seed", 0))
        conn = poly_connection(cm, n, rng, p.get("omega_scale", 0.5), p.get("beta", beta),
                               p.get("m_factor", m_factor), p.get("max_degree", 2), name=name)
        return _assemble(name, conn, p, rng, targeted, description)
    return build


def _inner(module, chart_dim, beta=0.0, description=""):
    def build(name, p):
        cm = get_module(p.get("module", module))
        n = p.get("chart_dim", chart_dim)
        rng = np.random.default_rng(p.get("seed", 0))
        conn = inner_connection(cm, n, rng, p.get("omega_scale", 0.5), p.get("beta", beta),
                                p.get("max_degree", 2), name=name)
        return _assemble(name, conn, p, rng, (), description)
    return build


def _corrupted(name, p):
    cm = get_module("su2-so3-corrupted")
    n = p.get("chart_dim", 4)
    conn = LocalConnection(cm, zero_form(1, n, 3), zero_form(2, n, 2, np.complex128), n, name=name)
    return _assemble(name, conn, p, np.random.default_rng(p.get("seed", 0)),
                     targeted=("crossed_axioms", "interchange"),
                     description="negative control: SO(3) acts on SU(2) through the transposed rotation")


def heis_sphere_connection(scale=1.0) -> LocalConnection:
    """heis-r2 with omega0 = 0 and m0 = scale * x3 dx1 ^ dx2 Z on a 3-dimensional chart."""
    cm = get_module("heis-r2")
    Z = cm.fiber.basis[2]
    comp = np.zeros((3, 3, 3, 3))
    comp[0, 1] = scale * Z
    m0 = poly_form(2, 3, [((0, 0, 1), comp)])
    return LocalConnection(cm, zero_form(1, 3, 3), m0, 3, name="heis-sphere")


def _heis_sphere(name, p):
    conn = heis_sphere_connection(p.get("scale", 1.0))
    conn.name = name
    sc = _assemble(name, conn, {**p, "base_point": p.get("base_point", [0.1, 0.1, 0.1])},
                   np.random.default_rng(p.get("seed", 0)),
                   description="central 2-form x3 dx1^dx2 Z; the unit sphere encloses a ball")
    sc.surfaces["sphere"] = P.sphere_d2(center=(0.0, 0.0, 0.0), radius=1.0)
    return sc


_BROKEN_ROWS = ("fake_curvature", "target_law", "horizontal_monoidality", "family_derivative")

BUILTINS: dict[str, Callable] = {
    "flat-trivial": _flat_trivial,
    "heis-poly": _poly("heis-r2", 4, beta=0.5, description="heis-r2, polynomial data, central nonzero 2-curvature"),
    "su2-so3-poly": _poly("su2-so3", 4, description="su2-so3, polynomial data, m0 = d^{-1} Omega0"),
    "u1-poly": _poly("u1-exp", 3, description="abelian u1-exp, polynomial data"),
    "g-adjoint-poly": _poly("g-adjoint", 4, description="SO(3) acting on itself by conjugation"),
    "ad-heis-poly": _inner("ad-heis", 4, beta=0.5, description="Heisenberg in its automorphisms, inner data"),
    "heis-sphere": _heis_sphere,
    "broken-fake-curvature": _poly("heis-r2", 4, beta=0.5, m_factor=2.0, targeted=_BROKEN_ROWS,
                                   description="negative control: heis-poly with m0 scaled away from d(m0) = Omega0"),
    "corrupted-action": _corrupted,
}

# default parameters echoed in reports
DEFAULT_PARAMS: dict[str, dict] = {name: {"seed": 0} for name in BUILTINS}


def _external_dir():
    d = os.environ.get("HOLONOMY2_SCENARIO_DIR")
    return Path(d) if d else None


def external_scenarios() -> dict[str, dict]:
    """JSON scenario records found in $HOLONOMY2_SCENARIO_DIR, keyed by name."""
    d = _external_dir()
    out = {}
    if d is None:
        return out
    if not d.is_dir():
        raise ScenarioError(f"HOLONOMY2_SCENARIO_DIR={d} is not a directory")
    for f in sorted(d.glob("*.json")):
        try:
            rec = json.loads(f.read_text())
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{f}: invalid JSON ({exc})") from None
        if not isinstance(rec, dict) or "name" not in rec or "base" not in rec:
            raise ScenarioError(f"{f}: scenario files need 'name' and 'base' keys")
        if rec["base"] not in BUILTINS:
            raise ScenarioError(f"{f}: unknown base scenario {rec['base']!r}")
        out[rec["name"]] = {"base": rec["base"], "params": dict(rec.get("params", {}))}
    return out


def list_scenarios() -> list[str]:
    return sorted(set(BUILTINS) | set(external_scenarios()))


def get_scenario(name: str, params: dict | None = None) -> Scenario:
    params = dict(params or {})
    if name in BUILTINS:
        return BUILTINS[name](name, params)
    ext = external_scenarios()
    if name in ext:
        rec = ext[name]
        merged = {**rec["params"], **params}
        sc = BUILTINS[rec["base"]](name, merged)
        return sc
    raise ScenarioError(f"unknown scenario {name!r}; known: {list_scenarios()}")
