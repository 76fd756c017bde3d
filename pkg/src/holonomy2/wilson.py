"""Wilson spheres: kernel-valued surface holonomy of parametrised 2-spheres.

Two kinds of field data are supported: a local connection on a trivial
bundle (delegates to the surface holonomy) and the abelian monopole, whose
curvature is globally defined so that the fiber element is the plain
integral of its pullback.

Sign convention: the builtin sphere parametrisation has p . (d_t p x d_s p) < 0
(inward normal), and the monopole of charge n carries the curvature
-(i n / 2) times the area form; with these choices charge n reports label +n.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .config import DEFAULT
from .forms import LocalConnection
from .lie import _fro, get_module
from .paths import Path2, reparametrize2, reparametrize2_t, reverse2_t, smoothstep, dsmoothstep, sphere_d2
from .transport import DEFAULT_CONFIG, TransportConfig, simpson_weights, surface_holonomy


class UnsupportedScenario(ValueError):
    pass


@dataclass(frozen=True)
class MonopoleField:
    """Abelian u(1) curvature -(i n / 2) sin(theta) dtheta ^ dphi on a sphere around ``center``."""

    n: int
    center: tuple = (0.0, 0.0, 0.0)
    scale: float = 1.0

    def pullback(self, P: Path2, t, s):
        """F(d_t P, d_s P) on a grid; purely imaginary."""
        c = np.asarray(self.center, dtype=np.float64)
        p = P(t, s)[..., :3] - c
        pt = P.dt(t, s)[..., :3]
        ps = P.ds(t, s)[..., :3]
        r = np.linalg.norm(p, axis=-1)
        area = np.einsum("...i,...i", p, np.cross(pt, ps)) / r ** 3
        return -0.5j * self.n * self.scale * area


@dataclass(frozen=True, eq=False)
class SphereScenario:
    module: object
    parametrization: Path2
    field: object  # LocalConnection or MonopoleField
    orientation: int = 1
    name: str = ""

    def __post_init__(self):
        u = np.linspace(0, 1, 33)
        P = self.parametrization
        edges = np.concatenate([P(u, 0 * u), P(u, 0 * u + 1), P(0 * u, u), P(0 * u + 1, u)])
        if np.abs(edges - edges[0]).max() > 1e-9:
            raise UnsupportedScenario("sphere parametrisation must collapse the square boundary to one point")
        if isinstance(self.field, MonopoleField):
            cm = self.module
            if cm.name != "u1-exp":
                raise UnsupportedScenario("the monopole fast path needs the abelian u1-exp module")
        elif not isinstance(self.field, LocalConnection):
            raise UnsupportedScenario("field must be a LocalConnection or a MonopoleField")


@dataclass
class WilsonResult:
    kernel_element: np.ndarray
    kernel_defect: float
    integer_label: int | None = None
    rounding_distance: float | None = None
    value: complex | None = None
    orientation: int = 1

    def to_json(self) -> dict:
        from .catgroup import matrix_to_json

        out = {"kernel_element": matrix_to_json(self.kernel_element), "kernel_defect": self.kernel_defect,
               "orientation": self.orientation}
        if self.value is not None:
            out["value"] = [float(np.real(self.value)), float(np.imag(self.value))]
        if self.integer_label is not None:
            out["integer_label"] = self.integer_label
            out["rounding_distance"] = self.rounding_distance
        return out


def monopole(n: int, orientation: int = 1, rotation=None, radius: float = 1.0, scale: float = 1.0) -> SphereScenario:
    P = sphere_d2(radius=radius, rotation=rotation)
    sc = SphereScenario(get_module("u1-exp"), P, MonopoleField(int(n), scale=scale), 1, f"monopole-{n}")
    return orientation_reversed(sc) if orientation < 0 else sc


def heis_sphere(rotation=None, scale: float = 1.0) -> SphereScenario:
    from .scenarios import heis_sphere_connection

    conn = heis_sphere_connection(scale)
    return SphereScenario(conn.module, sphere_d2(rotation=rotation), conn, 1, "heis-sphere")


def orientation_reversed(sc: SphereScenario) -> SphereScenario:
    """Reflect the parametrisation t -> 1 - t."""
    return replace(sc, parametrization=reverse2_t(sc.parametrization), orientation=-sc.orientation)


def _integral(field: MonopoleField, P: Path2, cfg: TransportConfig):
    t = np.linspace(0.0, 1.0, cfg.steps_t + 1)
    s = np.linspace(0.0, 1.0, cfg.steps_s + 1)
    T, S = np.meshgrid(t, s, indexing="ij")
    vals = field.pullback(P, T, S)
    return simpson_weights(cfg.steps_t) @ vals @ simpson_weights(cfg.steps_s)


def wilson_sphere(sc: SphereScenario, cfg: TransportConfig = DEFAULT_CONFIG) -> WilsonResult:
    cm = sc.module
    E = cm.fiber
    if isinstance(sc.field, MonopoleField):
        val = complex(_integral(sc.field, sc.parametrization, cfg))
        xi = np.zeros((2, 2), dtype=np.complex128)
        xi[0, 1] = val
        e = E.exp(xi)
        label = val.imag / (2 * np.pi)
        k = int(np.rint(label))
        defect = float(_fro(cm.boundary_group(e) - cm.base.identity()))
        return WilsonResult(e, defect, k, float(abs(label - k)), val, sc.orientation)
    res = surface_holonomy(sc.field, sc.parametrization, cfg)
    e = res.e
    defect = float(_fro(cm.boundary_group(e) - cm.base.identity()))
    out = WilsonResult(e, defect, orientation=sc.orientation)
    if cm.name == "u1-exp":
        val = complex(e[0, 1])
        label = val.imag / (2 * np.pi)
        out.value = val
        out.integer_label = int(np.rint(label))
        out.rounding_distance = float(abs(label - out.integer_label))
    return out


def wilson_monopole(n: int, cfg: TransportConfig = DEFAULT_CONFIG, orientation: int = 1) -> WilsonResult:
    return wilson_sphere(monopole(n, orientation), cfg)


# ---------------------------------------------------------------- parametrisation independence


def _action_on_kernel_trivial(cm, n_samples=8, seed=0) -> bool:
    K = cm.kernel_basis
    if len(K) == 0:
        return True
    rng = np.random.default_rng(seed)
    g = cm.base.random(rng, (n_samples,), 1.0)
    moved = cm.act_group_alg(g[:, None], K[None])
    return bool(np.abs(moved - K[None]).max() < 1e-12)


def aligned_distance(cm, e1, e2, n_starts: int = 8, seed: int = 0) -> float:
    """min over g of |g |> e1 - e2|; plain distance when G acts trivially on the kernel."""
    d0 = float(_fro(e1 - e2))
    if _action_on_kernel_trivial(cm):
        return d0
    from scipy.optimize import minimize

    G = cm.base
    rng = np.random.default_rng(seed)

    def cost(c):
        g = G.exp(G.from_coords(c))
        return float(_fro(cm.act_group(g, e1) - e2))

    best = d0
    for _ in range(n_starts):
        r = minimize(cost, rng.normal(size=G.alg_dim), method="Nelder-Mead",
                     options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
        best = min(best, float(r.fun))
    return best


def reparametrization_orbit_check(scenarios, cfg: TransportConfig = DEFAULT_CONFIG) -> float:
    """Max pairwise distance, modulo the G-action, between the Wilson elements of a family."""
    scenarios = list(scenarios)
    if len(scenarios) < 2:
        return 0.0
    cm = scenarios[0].module
    els = [wilson_sphere(sc, cfg).kernel_element for sc in scenarios]
    worst = 0.0
    for i in range(len(els)):
        for j in range(i + 1, len(els)):
            worst = max(worst, aligned_distance(cm, els[i], els[j]))
    return worst


def rotated_family(sc: SphereScenario, rotations) -> list:
    out = [sc]
    for R in rotations:
        P = sphere_d2(rotation=R, chart_dim=sc.parametrization.chart_dim)
        out.append(replace(sc, parametrization=P))
    return out


def smoothstep_family(sc: SphereScenario) -> list:
    P = sc.parametrization
    return [sc, replace(sc, parametrization=reparametrize2(P, smoothstep, dsmoothstep)),
            replace(sc, parametrization=reparametrize2_t(P, smoothstep, dsmoothstep))]


def rotation_matrix(axis, angle) -> np.ndarray:
    a = np.asarray(axis, dtype=np.float64)
    a = a / np.linalg.norm(a)
    K = np.array([[0, -a[2], a[1]], [a[2], 0, -a[0]], [-a[1], a[0], 0]])
    return np.eye(3) + np.sin(angle) * K + (1 - np.cos(angle)) * K @ K


WILSON_TOL = DEFAULT.wilson_integer
