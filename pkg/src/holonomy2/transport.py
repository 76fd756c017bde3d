"""Line and surface holonomy of a local categorical connection.

Conventions (trivial bundle, left trivialisation):

* the frame along gamma solves ``a' = -omega0(gamma') a`` with ``a(0) = u``;
  ``g_gamma = u^{-1} a(1)`` and the 1-holonomy is ``F1(gamma) = g_gamma^{-1}``;
* for a 2-path Gamma with loops gamma_s the fiber element solves
  ``e' = e V(s)``, ``V(s) = int_0^1 a_s(t)^{-1} |> m0(d_t Gamma, d_s Gamma) dt``;
* the result is the morphism ``(g_0^{-1}, e)`` from ``F1(gamma_0)`` to
  ``F1(gamma_1)``; consistency requires ``g_0 d(e) = g_1``.

The t-transport of all s-rows is advanced together with a commutator-free
order-4 integrator; the t-integral uses composite Simpson on the full nodes.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .catgroup import CatMorphism, compose, morphism_distance, target
from .config import DEFAULT, Tolerances
from .forms import GaugeFunction, LocalConnection, contract, gauge_transform_connection
from .lie import KindMismatch, _fro
from .paths import Path1, Path2, Path3, PathError, collar_defect, hconcat2, identity2, reverse1


class BrokenConnection(RuntimeError):
    """Target law violated far beyond integrator error: the data is not fake flat."""


@dataclass(frozen=True)
class TransportConfig:
    steps_t: int = 256
    steps_s: int = 256
    steps_x: int = 64
    integrator_order: int = 4
    fd_step: float = DEFAULT.path_fd_step
    # extrapolate the fiber ODE against the same samples at twice the step
    richardson_s: bool = True
    tol: Tolerances = field(default=DEFAULT, repr=False)

    def __post_init__(self):
        for name in ("steps_t", "steps_s", "steps_x"):
            n = getattr(self, name)
            if int(n) != n or n < 8:
                raise ValueError(f"{name} must be an integer >= 8, got {n}")
            if n % 2:
                raise ValueError(f"{name} must be even (composite Simpson), got {n}")
        if self.integrator_order not in (2, 4):
            raise ValueError("integrator_order must be 2 or 4")
        if not self.fd_step > 0:
            raise ValueError("fd_step must be positive")

    def scaled(self, factor: int) -> "TransportConfig":
        return replace(self, steps_t=self.steps_t * factor, steps_s=self.steps_s * factor)

    def to_json(self) -> dict:
        return {"steps_t": self.steps_t, "steps_s": self.steps_s, "steps_x": self.steps_x,
                "integrator_order": self.integrator_order, "fd_step": self.fd_step,
                "richardson_s": self.richardson_s}


DEFAULT_CONFIG = TransportConfig()


def _half_grid(n):
    return np.linspace(0.0, 1.0, 2 * n + 1)


def simpson_weights(n):
    """Composite Simpson weights on n+1 equispaced nodes of [0, 1] (n even)."""
    if n % 2:
        raise ValueError("Simpson needs an even number of intervals")
    w = np.full(n + 1, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w / (3.0 * n)


def _as_real(M, real):
    return np.ascontiguousarray(M.real) if real else M


def _start(G, frame):
    return G.identity() if frame is None else np.asarray(frame, dtype=G.dtype)


# ---------------------------------------------------------------- 1-holonomy


def line_transport(conn: LocalConnection, path: Path1, cfg: TransportConfig = DEFAULT_CONFIG,
                   frame=None, steps: int | None = None):
    """Frames a(t_k) at the full nodes t_k = k / steps, shape (steps+1, d, d)."""
    G = conn.module.base
    n = cfg.steps_t if steps is None else steps
    u = _half_grid(n)
    x = path(u)
    v = path.velocity(u)
    A = -contract(conn.omega0.components(x), [v])
    a = _kernels.cf4_sequence_left(np.ascontiguousarray(A, dtype=np.complex128), 1.0 / n,
                                   np.asarray(_start(G, frame), dtype=np.complex128), cfg.integrator_order)
    return G.project(_as_real(a, G.real))


def parallel_transport(conn, path: Path1, cfg: TransportConfig = DEFAULT_CONFIG, frame=None):
    """End frame a(1)."""
    return line_transport(conn, path, cfg, frame)[-1]


def path_holonomy(conn, path: Path1, cfg: TransportConfig = DEFAULT_CONFIG, frame=None):
    """g_gamma = u^{-1} a(1)."""
    G = conn.module.base
    u = _start(G, frame)
    return G.inv(u) @ parallel_transport(conn, path, cfg, u)


def line_holonomy(conn, loop: Path1, cfg: TransportConfig = DEFAULT_CONFIG, frame=None):
    """1-holonomy F1(gamma) = g_gamma^{-1} of a loop."""
    if np.abs(loop.start - loop.end).max() > cfg.tol.endpoint_match:
        raise PathError("line_holonomy needs a loop")
    return conn.module.base.inv(path_holonomy(conn, loop, cfg, frame))


# ---------------------------------------------------------------- 2-holonomy


@dataclass(eq=False)
class SurfaceHolonomy:
    g0: np.ndarray
    g1: np.ndarray
    e: np.ndarray
    morphism: CatMorphism
    s_trace: np.ndarray | None = None
    frame: np.ndarray | None = None

    @property
    def module(self):
        return self.morphism.module

    @property
    def target_defect(self) -> float:
        cm = self.module
        return float(_fro(self.g0 @ cm.boundary_group(self.e) - self.g1))

    def to_json(self) -> dict:
        from .catgroup import matrix_to_json

        return {"g0": matrix_to_json(self.g0), "g1": matrix_to_json(self.g1), "e": matrix_to_json(self.e),
                "morphism": self.morphism.to_json(), "target_defect": self.target_defect}


def _check_bigon(G2: Path2, tol):
    u = np.linspace(0, 1, 33)
    for edge in (G2.left(), G2.right()):
        pts = edge(u)
        if np.abs(pts - pts[0]).max() > tol:
            raise PathError("surface holonomy needs a 2-path whose left and right edges are constant")


def _sweep(conn: LocalConnection, G2: Path2, cfg: TransportConfig, frame, extras: Sequence[Callable] = (),
           chunk: int = 16):
    """Transport every s-row along t and accumulate lifted t-integrals.

    Returns (V, Y1, extra_integrals): V and each extra integral are sampled
    on the s half-grid, Y1 are the frames a_s(1).  Each extra is called as
    ``f(t, s)`` with t scalar and must return raw fiber-algebra values for
    all s rows; it is lifted by the same frames as m0.
    """
    cm = conn.module
    G = cm.base
    Nt, Ns = cfg.steps_t, cfg.steps_s
    order = cfg.integrator_order
    every = cfg.tol.reproject_every
    t = _half_grid(Nt)
    s = _half_grid(Ns)
    R = s.size
    h = 1.0 / Nt
    w = simpson_weights(Nt)
    u = _start(G, frame)
    Y = np.ascontiguousarray(np.broadcast_to(u, (R,) + u.shape), dtype=np.complex128)
    edim = cm.fiber.dim
    V = np.zeros((R, edim, edim), dtype=cm.fiber.dtype)
    acc = [np.zeros_like(V) for _ in extras]
    om, mm = conn.omega0, conn.m0

    def lifted(Yr, vals):
        return cm.act_group_alg(G.inv(Yr), vals)

    for c0 in range(0, Nt, chunk):
        c1 = min(Nt, c0 + chunk)
        tt = t[2 * c0: 2 * c1 + 1]
        T, S = np.meshgrid(tt, s, indexing="ij")
        pts = G2(T, S).reshape(-1, conn.chart_dim)
        vt = G2.dt(T, S).reshape(-1, conn.chart_dim)
        A = -contract(om.components(pts), [vt]).reshape(T.shape + (G.dim, G.dim))
        A = np.ascontiguousarray(A, dtype=np.complex128)
        full = slice(None, None, 2)
        Tf, Sf = T[full], S[full]
        pf = G2(Tf, Sf).reshape(-1, conn.chart_dim)
        mv = contract(mm.components(pf), [G2.dt(Tf, Sf).reshape(pf.shape), G2.ds(Tf, Sf).reshape(pf.shape)])
        mv = mv.reshape(Tf.shape + (edim, edim))
        last = c1 == Nt
        for k in range(c0, c1 + (1 if last else 0)):
            j = k - c0
            Yr = _as_real(Y, G.real)
            V += w[k] * lifted(Yr, mv[j])
            for i, f in enumerate(extras):
                acc[i] += w[k] * lifted(Yr, f(t[2 * k], s))
            if k == Nt:
                break
            Y = _kernels.cf4_step_left(Y, A[2 * j], A[2 * j + 1], A[2 * j + 2], h, order)
            if (k + 1) % every == 0:
                Y = np.ascontiguousarray(G.project(_as_real(Y, G.real)), dtype=np.complex128)
    Y1 = G.project(_as_real(Y, G.real))
    return V, Y1, acc


def _fiber_sequence(cm, V, Ns, order):
    E = cm.fiber
    seq = _kernels.cf4_sequence_right(np.ascontiguousarray(V, dtype=np.complex128), 1.0 / Ns,
                                      np.asarray(E.identity(), dtype=np.complex128), order)
    return _as_real(seq, E.real)


def _integrate_fiber(cm, V, Ns, order, richardson=False):
    """Fiber ODE e' = e V on the s half-grid; returns (e(1), sampled e on the full nodes).

    With ``richardson`` the end value is extrapolated against the run on
    the full nodes only (step 2/Ns), which raises the order by two.
    """
    E = cm.fiber
    seq = _fiber_sequence(cm, V, Ns, order)
    e = seq[-1]
    if richardson and Ns % 2 == 0:
        coarse = _fiber_sequence(cm, V[::2], Ns // 2, order)[-1]
        e = e + (e - coarse) / (2 ** order - 1)
    return E.project(e), E.project(seq)


def surface_holonomy(conn: LocalConnection, G2: Path2, cfg: TransportConfig = DEFAULT_CONFIG,
                     frame=None, keep_trace: bool = False) -> SurfaceHolonomy:
    _check_bigon(G2, 1e-10)
    cm = conn.module
    G = cm.base
    u = _start(G, frame)
    V, Y1, _ = _sweep(conn, G2, cfg, u)
    e, seq = _integrate_fiber(cm, V, cfg.steps_s, cfg.integrator_order, cfg.richardson_s)
    ui = G.inv(u)
    g0 = ui @ Y1[0]
    g1 = ui @ Y1[-1]
    return SurfaceHolonomy(g0, g1, e, CatMorphism(G.inv(g0), e, cm), seq if keep_trace else None, u)


def categorical_holonomy(conn: LocalConnection, G2: Path2, cfg: TransportConfig = DEFAULT_CONFIG,
                         frame=None) -> CatMorphism:
    res = surface_holonomy(conn, G2, cfg, frame)
    limit = cfg.tol.broken_factor * cfg.tol.target_law
    if res.target_defect > limit:
        raise BrokenConnection(f"target law defect {res.target_defect:.3e} exceeds {limit:.1e}; "
                               "the connection is not fake flat")
    return res.morphism


def gauge_transform(result, g):
    """Left action (X, e) -> (g X g^{-1}, g |> e) on a morphism or a SurfaceHolonomy."""
    if isinstance(result, SurfaceHolonomy):
        cm = result.module
        G = cm.base
        g = _check_base(cm, g)
        gi = G.inv(g)
        return SurfaceHolonomy(g @ result.g0 @ gi, g @ result.g1 @ gi, cm.act_group(g, result.e),
                               gauge_transform(result.morphism, g), None,
                               None if result.frame is None else result.frame @ gi)
    cm = result.module
    g = _check_base(cm, g)
    return CatMorphism(g @ result.X @ cm.base.inv(g), cm.act_group(g, result.e), cm)


def _check_base(cm, g):
    g = np.asarray(g)
    G = cm.base
    if g.shape != (G.dim, G.dim):
        raise KindMismatch(f"expected a {G.name} element")
    return g.real if G.real and np.iscomplexobj(g) else g


# ---------------------------------------------------------------- law checks


def target_law_defect(conn, G2, cfg: TransportConfig = DEFAULT_CONFIG, frame=None) -> float:
    return surface_holonomy(conn, G2, cfg, frame).target_defect


def vertical_functoriality_defect(conn, G1: Path2, G2: Path2, cfg: TransportConfig = DEFAULT_CONFIG) -> float:
    """F(G1 then G2) against F(G1) composed with F(G2); the composite is run at twice the s resolution."""
    from .paths import vconcat2

    whole = surface_holonomy(conn, vconcat2(G1, G2), replace(cfg, steps_s=2 * cfg.steps_s)).morphism
    m1 = surface_holonomy(conn, G1, cfg).morphism
    m2 = surface_holonomy(conn, G2, cfg).morphism
    return morphism_distance(whole, compose(m1, m2, tol=np.inf))


def horizontal_monoidality_defect(conn, G1: Path2, G2: Path2, cfg: TransportConfig = DEFAULT_CONFIG) -> float:
    """F(G1 beside G2) against F(G1) (x) F(G2); the composite is run at twice the t resolution."""
    from .catgroup import tensor

    whole = surface_holonomy(conn, hconcat2(G1, G2), replace(cfg, steps_t=2 * cfg.steps_t)).morphism
    m1 = surface_holonomy(conn, G1, cfg).morphism
    m2 = surface_holonomy(conn, G2, cfg).morphism
    return morphism_distance(whole, tensor(m1, m2))


def vertical_inverse_defect(conn, G2: Path2, cfg: TransportConfig = DEFAULT_CONFIG,
                            forward: SurfaceHolonomy | None = None) -> float:
    """Fiber of the s-reversed 2-path against the inverse fiber, and its source against g1^{-1}."""
    from .paths import reverse2_s

    fwd = surface_holonomy(conn, G2, cfg) if forward is None else forward
    rev = surface_holonomy(conn, reverse2_s(G2), cfg)
    E, G = conn.module.fiber, conn.module.base
    return float(max(_fro(rev.e @ fwd.e - E.identity()), _fro(fwd.e @ rev.e - E.identity()),
                     _fro(rev.morphism.X - G.inv(fwd.g1))))


def reparametrization_defect(conn, G2: Path2, cfg: TransportConfig = DEFAULT_CONFIG, f=None, df=None) -> float:
    from .paths import reparametrize2, smoothstep, dsmoothstep

    f = smoothstep if f is None else f
    df = dsmoothstep if f is smoothstep and df is None else df
    a = surface_holonomy(conn, G2, cfg).morphism
    b = surface_holonomy(conn, reparametrize2(G2, f, df), cfg).morphism
    return morphism_distance(a, b)


def gauge_covariance_defect(conn, G2: Path2, phi: GaugeFunction, cfg: TransportConfig = DEFAULT_CONFIG) -> float:
    """Holonomy of gauge-changed data at frame 1 against phi(b)^{-1} acting on the original."""
    new = surface_holonomy(gauge_transform_connection(conn, phi), G2, cfg).morphism
    old = surface_holonomy(conn, G2, cfg).morphism
    b = G2(0.0, 0.0)
    g = conn.module.base.inv(phi.value(b)[0])
    return morphism_distance(new, gauge_transform(old, g))


def frame_covariance_defect(conn, G2: Path2, g, cfg: TransportConfig = DEFAULT_CONFIG) -> float:
    """F at frame g against g^{-1} acting on F at frame 1."""
    G = conn.module.base
    a = surface_holonomy(conn, G2, cfg, frame=g).morphism
    b = gauge_transform(surface_holonomy(conn, G2, cfg).morphism, G.inv(g))
    return morphism_distance(a, b)


def whisker(mu: Path1, G2: Path2) -> Path2:
    """The 2-path mu^{-1} . Gamma . mu based at mu(1), for Gamma based at mu(0)."""
    return hconcat2(hconcat2(identity2(reverse1(mu)), G2), identity2(mu))


def translate_basepoint_check(conn, G2: Path2, mu: Path1, cfg: TransportConfig = DEFAULT_CONFIG,
                              frame=None) -> float:
    """Defect between F at the far end of mu for the whiskered 2-path and F of Gamma at the frame carried over.

    mu runs from the base point y of Gamma to x.  The whiskered composite is
    evaluated at x with the given frame v; Gamma itself at y with the frame
    obtained by transporting v back along mu.
    """
    y = G2(0.0, 0.0)
    if np.abs(mu.start - y).max() > cfg.tol.endpoint_match:
        raise PathError("mu must start at the base point of the 2-path")
    G = conn.module.base
    v = _start(G, frame)
    # the composite squeezes Gamma into a quarter of [0, 1]
    wide = replace(cfg, steps_t=4 * cfg.steps_t)
    lhs = surface_holonomy(conn, whisker(mu, G2), wide, frame=v).morphism
    u_y = line_transport(conn, reverse1(mu), cfg, v)[-1]
    rhs = surface_holonomy(conn, G2, cfg, frame=u_y).morphism
    return morphism_distance(lhs, rhs)


# ---------------------------------------------------------------- family derivative


def _fd4_points(x, h):
    return [x - 2 * h, x - h, x + h, x + 2 * h]


def family_derivative(conn, J: Path3, x: float, cfg: TransportConfig = DEFAULT_CONFIG, frames=None):
    """(lhs, rhs, e) of the family identity at x.

    lhs = e_x^{-1} d e_x / dx by a 4th-order central difference with step
    1/steps_x, each e computed at the frame u transported along q(x);
    rhs = int int b^{-1} |> M0(d_x J, d_t J, d_s J) over the lifted square.
    """
    cm = conn.module
    E = cm.fiber
    hx = 1.0 / cfg.steps_x
    if x - 2 * hx < -1e-12 or x + 2 * hx > 1 + 1e-12:
        raise ValueError("x sample too close to the ends of [0, 1] for the difference stencil")
    if frames is None:
        frames = family_frames(conn, J, cfg)

    def frame_at(xv):
        k = int(round(xv * cfg.steps_x))
        return frames[k]

    es = [surface_holonomy(conn, J.slice(xv), cfg, frame=frame_at(xv)).e for xv in _fd4_points(x, hx)]
    de = (es[0] - 8 * es[1] + 8 * es[2] - es[3]) / (12 * hx)
    M = conn.two_curvature_form()
    n = conn.chart_dim

    def integrand(t, s):
        tt = np.full_like(s, t)
        xx = np.full_like(s, x)
        p = J(tt, s, xx).reshape(-1, n)
        return contract(M.components(p), [J.dx(tt, s, xx), J.dt(tt, s, xx), J.ds(tt, s, xx)])

    Gx = J.slice(x)
    V, _, (W,) = _sweep(conn, Gx, cfg, frame_at(x), extras=[integrand])
    e, _ = _integrate_fiber(cm, V, cfg.steps_s, cfg.integrator_order, cfg.richardson_s)
    rhs = np.tensordot(simpson_weights(2 * cfg.steps_s), W, axes=(0, 0))
    lhs = E.inv(e) @ de
    return lhs, rhs, e


def family_frames(conn, J: Path3, cfg: TransportConfig = DEFAULT_CONFIG, frame=None):
    """Frames u_x at x = k / steps_x transported along q(x) = J(0, 0, x)."""
    sub = 4
    a = line_transport(conn, J.base_curve(), cfg, frame, steps=sub * cfg.steps_x)
    return a[::sub]


def family_derivative_check(conn, J: Path3, cfg: TransportConfig = DEFAULT_CONFIG,
                            xs: Sequence[float] = (0.25, 0.5, 0.75), noise_floor: float = 1e-8) -> float:
    """Max relative defect of the family identity over the x samples.

    Where the right-hand side is below ``noise_floor`` the absolute defect
    is reported instead.
    """
    if collar_defect(J) > 1e-8:
        raise PathError("the 3-path does not sit on its collars")
    frames = family_frames(conn, J, cfg)
    worst = 0.0
    for x in xs:
        lhs, rhs, _ = family_derivative(conn, J, x, cfg, frames)
        scale = float(_fro(rhs))
        d = float(_fro(lhs - rhs))
        worst = max(worst, d / scale if scale > noise_floor else d)
    return worst
