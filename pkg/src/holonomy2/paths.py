"""Smooth 1-, 2- and 3-paths with sitting instants.

Raw parametrisations on [0,1]^k are composed with a flat-ended warp so that
every path is constant on a collar of width ``margin`` at its ends; this
makes concatenations smooth.  Maps are vectorised: parameters broadcast and
values have a trailing axis of length ``chart_dim``.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from .config import DEFAULT


class PathError(ValueError):
    pass


# ---------------------------------------------------------------- warp


def _flat(x):
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def _dflat(x):
    out = np.zeros_like(x)
    pos = x > 0
    xp = x[pos]
    out[pos] = np.exp(-1.0 / xp) / xp ** 2
    return out


def step(x):
    """Smooth step: 0 for x <= 0, 1 for x >= 1, all derivatives vanish at both ends."""
    x = np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0)
    a, b = _flat(x), _flat(1 - x)
    return a / (a + b)


def dstep(x):
    x = np.asarray(x, dtype=np.float64)
    inside = (x > 0) & (x < 1)
    xc = np.clip(x, 0.0, 1.0)
    a, b = _flat(xc), _flat(1 - xc)
    da, db = _dflat(xc), _dflat(1 - xc)
    out = (da * b + a * db) / (a + b) ** 2
    return np.where(inside, out, 0.0)


def warp(u, margin=DEFAULT.sitting_margin):
    """Flat-ended reparametrisation of [0,1]; constant on [0, margin] and [1-margin, 1]."""
    return step((np.asarray(u, dtype=np.float64) - margin) / (1 - 2 * margin))


def dwarp(u, margin=DEFAULT.sitting_margin):
    return dstep((np.asarray(u, dtype=np.float64) - margin) / (1 - 2 * margin)) / (1 - 2 * margin)


def smoothstep(u):
    u = np.clip(np.asarray(u, dtype=np.float64), 0.0, 1.0)
    return 3 * u ** 2 - 2 * u ** 3


def dsmoothstep(u):
    u = np.clip(np.asarray(u, dtype=np.float64), 0.0, 1.0)
    return 6 * u - 6 * u ** 2


# ---------------------------------------------------------------- path types


def _fd(fn, args, i, h):
    a_p = list(args)
    a_m = list(args)
    a_p[i] = np.asarray(args[i], dtype=np.float64) + h
    a_m[i] = np.asarray(args[i], dtype=np.float64) - h
    return (fn(*a_p) - fn(*a_m)) / (2 * h)


class _PathBase:
    arity = 0

    def __init__(self, fn: Callable, partials=None, chart_dim: int | None = None,
                 margin: float = DEFAULT.sitting_margin, fd_step: float = DEFAULT.path_fd_step):
        self._fn = fn
        self._partials = partials
        self.margin = margin
        self.fd_step = fd_step
        if chart_dim is None:
            chart_dim = np.asarray(fn(*([np.array(0.5)] * self.arity))).shape[-1]
        self.chart_dim = chart_dim

    @property
    def analytic(self):
        return self._partials is not None

    def __call__(self, *args):
        return self._fn(*[np.asarray(a, dtype=np.float64) for a in args])

    def partial(self, i, *args):
        args = [np.asarray(a, dtype=np.float64) for a in args]
        if self._partials is not None:
            return self._partials[i](*args)
        return _fd(self._fn, args, i, self.fd_step)


class Path1(_PathBase):
    arity = 1

    def velocity(self, t):
        return self.partial(0, t)

    @property
    def start(self):
        return self(0.0)

    @property
    def end(self):
        return self(1.0)


class Path2(_PathBase):
    """Gamma(t, s) = gamma_s(t)."""

    arity = 2

    def dt(self, t, s):
        return self.partial(0, t, s)

    def ds(self, t, s):
        return self.partial(1, t, s)

    def loop(self, s) -> Path1:
        s = float(s)
        return Path1(lambda t: self(t, s), (lambda t: self.dt(t, s),), self.chart_dim, self.margin)

    def bottom(self) -> Path1:
        return self.loop(0.0)

    def top(self) -> Path1:
        return self.loop(1.0)

    def left(self) -> Path1:
        return Path1(lambda s: self(0.0, s), (lambda s: self.ds(0.0, s),), self.chart_dim, self.margin)

    def right(self) -> Path1:
        return Path1(lambda s: self(1.0, s), (lambda s: self.ds(1.0, s),), self.chart_dim, self.margin)


class Path3(_PathBase):
    """J(t, s, x): a family of 2-paths Gamma^x."""

    arity = 3

    def dt(self, t, s, x):
        return self.partial(0, t, s, x)

    def ds(self, t, s, x):
        return self.partial(1, t, s, x)

    def dx(self, t, s, x):
        return self.partial(2, t, s, x)

    def slice(self, x) -> Path2:
        x = float(x)
        return Path2(lambda t, s: self(t, s, x), (lambda t, s: self.dt(t, s, x), lambda t, s: self.ds(t, s, x)),
                     self.chart_dim, self.margin)

    def base_curve(self) -> Path1:
        """q(x) = J(0, 0, x)."""
        return Path1(lambda x: self(0.0, 0.0, x), (lambda x: self.dx(0.0, 0.0, x),), self.chart_dim, self.margin)


# ---------------------------------------------------------------- constructors


def from_raw1(R, dR, chart_dim, margin=DEFAULT.sitting_margin) -> Path1:
    def fn(t):
        return R(warp(t, margin))

    def vel(t):
        return dR(warp(t, margin)) * dwarp(t, margin)[..., None]

    return Path1(fn, (vel,), chart_dim, margin)


def from_raw2(R, RT, RS, chart_dim, margin=DEFAULT.sitting_margin) -> Path2:
    def fn(t, s):
        return R(warp(t, margin), warp(s, margin))

    def dt(t, s):
        return RT(warp(t, margin), warp(s, margin)) * dwarp(t, margin)[..., None]

    def ds(t, s):
        return RS(warp(t, margin), warp(s, margin)) * dwarp(s, margin)[..., None]

    return Path2(fn, (dt, ds), chart_dim, margin)


def constant_path(point) -> Path1:
    p = np.asarray(point, dtype=np.float64)
    return Path1(lambda t: np.broadcast_to(p, np.shape(t) + p.shape).copy(),
                 (lambda t: np.zeros(np.shape(t) + p.shape),), len(p))


def constant_2path(point) -> Path2:
    p = np.asarray(point, dtype=np.float64)

    def fn(t, s):
        return np.broadcast_to(p, np.broadcast_shapes(np.shape(t), np.shape(s)) + p.shape).copy()

    def zero(t, s):
        return np.zeros(np.broadcast_shapes(np.shape(t), np.shape(s)) + p.shape)

    return Path2(fn, (zero, zero), len(p))


def segment(a, b, margin=DEFAULT.sitting_margin) -> Path1:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return from_raw1(lambda T: a + T[..., None] * (b - a), lambda T: np.broadcast_to(b - a, np.shape(T) + a.shape),
                     len(a), margin)


# loop shape functions vanishing at T = 0 and T = 1
def _loop_basis(T):
    tp = 2 * np.pi * T
    return np.stack([1 - np.cos(tp), np.sin(tp), np.sin(2 * tp), 1 - np.cos(2 * tp)], axis=-1)


def _dloop_basis(T):
    tp = 2 * np.pi * T
    w = 2 * np.pi
    return np.stack([w * np.sin(tp), w * np.cos(tp), 2 * w * np.cos(2 * tp), 2 * w * np.sin(2 * tp)], axis=-1)


def _coef_array(c, n):
    c = np.zeros((4, n)) if c is None else np.asarray(c, dtype=np.float64)
    if c.ndim != 2 or c.shape[1] != n or c.shape[0] > 4:
        raise PathError(f"loop coefficients must have shape (K <= 4, {n})")
    out = np.zeros((4, n))
    out[: c.shape[0]] = c
    return out


def loop(base, coef, margin=DEFAULT.sitting_margin) -> Path1:
    """gamma(T) = base + sum_k coef[k] u_k(T) for fixed loop shape functions u_k."""
    b = np.asarray(base, dtype=np.float64)
    c = _coef_array(coef, len(b))
    return from_raw1(lambda T: b + _loop_basis(T) @ c, lambda T: _dloop_basis(T) @ c, len(b), margin)


def circle_loop(base, radius=1.0, axes=(0, 1), chart_dim=None, margin=DEFAULT.sitting_margin) -> Path1:
    """Circle through ``base`` in the plane of two coordinate axes, counter-clockwise."""
    b = np.asarray(base, dtype=np.float64)
    n = len(b) if chart_dim is None else chart_dim
    c = np.zeros((2, n))
    i, j = axes
    # base + r (cos 2 pi T - 1, sin 2 pi T)
    c[0, i] = -radius
    c[1, j] = radius
    return loop(b, c, margin)


def bump_square(base, c0=None, c1=None, cmid=None, amplitude=1.0, margin=DEFAULT.sitting_margin) -> Path2:
    """Family of based loops with coefficients c(S) = (1-S) c0 + S c1 + 4 S (1-S) cmid."""
    b = np.asarray(base, dtype=np.float64)
    n = len(b)
    c0, c1, cm = (_coef_array(c, n) * amplitude for c in (c0, c1, cmid))

    def coef(S):
        S = S[..., None, None]
        return (1 - S) * c0 + S * c1 + 4 * S * (1 - S) * cm

    def dcoef(S):
        S = S[..., None, None]
        return c1 - c0 + 4 * (1 - 2 * S) * cm

    def R(T, S):
        T, S = np.broadcast_arrays(T, S)
        return b + np.einsum("...k,...kn->...n", _loop_basis(T), coef(S))

    def RT(T, S):
        T, S = np.broadcast_arrays(T, S)
        return np.einsum("...k,...kn->...n", _dloop_basis(T), coef(S))

    def RS(T, S):
        T, S = np.broadcast_arrays(T, S)
        return np.einsum("...k,...kn->...n", _loop_basis(T), dcoef(S))

    return from_raw2(R, RT, RS, n, margin)


def _square_to_sphere(T, S):
    """Unit-sphere point and its (T, S) partials; the boundary of the square goes to the north pole."""
    u = 2 * T - 1
    v = 2 * S - 1
    su = np.sqrt(np.maximum(1 - u * u / 2, 0))
    sv = np.sqrt(np.maximum(1 - v * v / 2, 0))
    a = u * sv
    b = v * su
    # d(a, b)/d(u, v)
    a_u, a_v = sv, -u * v / (2 * sv)
    b_u, b_v = -u * v / (2 * su), su
    r = np.sqrt(a * a + b * b)
    sig = np.pi * np.sinc(r)  # sin(pi r) / r
    small = r < 1e-3
    rs = np.where(small, 1.0, r)
    kap = np.where(small, -np.pi ** 3 / 3 + np.pi ** 5 * r ** 2 / 30,
                   (np.pi * rs * np.cos(np.pi * rs) - np.sin(np.pi * rs)) / rs ** 3)
    zr = np.pi * sig  # pi sin(pi r) / r
    p = np.stack([sig * a, sig * b, -np.cos(np.pi * r)], axis=-1)
    # partials in (a, b)
    pa = np.stack([sig + kap * a * a, kap * a * b, zr * a], axis=-1)
    pb = np.stack([kap * a * b, sig + kap * b * b, zr * b], axis=-1)
    pu = pa * a_u[..., None] + pb * b_u[..., None]
    pv = pa * a_v[..., None] + pb * b_v[..., None]
    return p, 2 * pu, 2 * pv


def sphere_d2(center=(0.0, 0.0, 0.0), radius=1.0, rotation=None, chart_dim=3,
              margin=DEFAULT.sitting_margin) -> Path2:
    """Sphere of the given radius, square boundary collapsed to the (rotated) north pole.

    Oriented so that the unit normal p satisfies p . (d_t p x d_s p) < 0,
    which makes the monopole of charge n report label +n.
    """
    c = np.zeros(chart_dim)
    c[:3] = np.asarray(center, dtype=np.float64)[:3]
    Rm = np.eye(3) if rotation is None else np.asarray(rotation, dtype=np.float64)

    def emb(p):
        out = np.zeros(p.shape[:-1] + (chart_dim,))
        out[..., :3] = p @ Rm.T
        return out

    def R(T, S):
        T, S = np.broadcast_arrays(T, S)
        return c + radius * emb(_square_to_sphere(T, S)[0])

    def RT(T, S):
        T, S = np.broadcast_arrays(T, S)
        return radius * emb(_square_to_sphere(T, S)[1])

    def RS(T, S):
        T, S = np.broadcast_arrays(T, S)
        return radius * emb(_square_to_sphere(T, S)[2])

    return from_raw2(R, RT, RS, chart_dim, margin)


def x_bubble(q0, qv=None, qa=None, cmid0=None, cmid1=None, ctwist=None,
             margin=DEFAULT.sitting_margin) -> Path3:
    """J(t, s, x) = q(x) + bubble_x(t, s).

    q(x) = q0 + x qv + x^2 qa.  The loop at height S has coefficients
    b(S) (cmid0 + x cmid1) + b(S) (2S - 1) ctwist with b(S) = 4 S (1-S), so
    bottom and top loops sit at q(x); the twist term makes the loops at S
    and 1-S differ, so the bubble encloses volume.
    """
    q0 = np.asarray(q0, dtype=np.float64)
    n = len(q0)
    qv = np.zeros(n) if qv is None else np.asarray(qv, dtype=np.float64)
    qa = np.zeros(n) if qa is None else np.asarray(qa, dtype=np.float64)
    c0 = _coef_array(cmid0, n)
    c1 = _coef_array(cmid1, n)
    ct = _coef_array(ctwist, n)

    def parts(t, s, x):
        t, s, x = np.broadcast_arrays(t, s, x)
        T, S = warp(t, margin), warp(s, margin)
        return t, s, x, T, S

    def coef(S, x):
        b = (4 * S * (1 - S))[..., None, None]
        return b * (c0 + x[..., None, None] * c1 + (2 * S - 1)[..., None, None] * ct)

    def dcoef_dS(S, x):
        b = (4 * S * (1 - S))[..., None, None]
        db = (4 * (1 - 2 * S))[..., None, None]
        tw = (2 * S - 1)[..., None, None]
        return db * (c0 + x[..., None, None] * c1 + tw * ct) + 2 * b * ct

    def fn(t, s, x):
        t, s, x, T, S = parts(t, s, x)
        q = q0 + x[..., None] * qv + (x ** 2)[..., None] * qa
        return q + np.einsum("...k,...kn->...n", _loop_basis(T), coef(S, x))

    def dt(t, s, x):
        t, s, x, T, S = parts(t, s, x)
        return np.einsum("...k,...kn->...n", _dloop_basis(T), coef(S, x)) * dwarp(t, margin)[..., None]

    def ds(t, s, x):
        t, s, x, T, S = parts(t, s, x)
        return (np.einsum("...k,...kn->...n", _loop_basis(T), dcoef_dS(S, x))
                * dwarp(s, margin)[..., None])

    def dx(t, s, x):
        t, s, x, T, S = parts(t, s, x)
        b = (4 * S * (1 - S))[..., None, None]
        return qv + 2 * x[..., None] * qa + np.einsum("...k,...kn->...n", _loop_basis(T), b * c1)

    return Path3(fn, (dt, ds, dx), n, margin)


# ---------------------------------------------------------------- operations


def _sel(mask, a, b):
    return np.where(mask[..., None], a, b)


def concat1(g: Path1, f: Path1, tol=DEFAULT.endpoint_match) -> Path1:
    if np.abs(g.end - f.start).max() > tol:
        raise PathError("concat1: end point of the first path differs from the start of the second")

    def fn(t):
        t = np.asarray(t, dtype=np.float64)
        lo = t < 0.5
        return _sel(lo, g(np.clip(2 * t, 0, 1)), f(np.clip(2 * t - 1, 0, 1)))

    def vel(t):
        t = np.asarray(t, dtype=np.float64)
        lo = t < 0.5
        return 2 * _sel(lo, g.velocity(np.clip(2 * t, 0, 1)), f.velocity(np.clip(2 * t - 1, 0, 1)))

    return Path1(fn, (vel,), g.chart_dim, min(g.margin, f.margin) / 2)


def reverse1(g: Path1) -> Path1:
    return Path1(lambda t: g(1 - np.asarray(t)), (lambda t: -g.velocity(1 - np.asarray(t)),), g.chart_dim, g.margin)


def identity2(g: Path1) -> Path2:
    """The 2-path (t, s) -> g(t), constant in s (a whisker)."""

    def fn(t, s):
        t, s = np.broadcast_arrays(t, s)
        return g(t)

    def dt(t, s):
        t, s = np.broadcast_arrays(t, s)
        return g.velocity(t)

    def ds(t, s):
        t, s = np.broadcast_arrays(t, s)
        return np.zeros(t.shape + (g.chart_dim,))

    return Path2(fn, (dt, ds), g.chart_dim, g.margin)


def _edge_gap(p1: Path1, p2: Path1, n=33):
    u = np.linspace(0, 1, n)
    return float(np.abs(p1(u) - p2(u)).max())


def vconcat2(G1: Path2, G2: Path2, tol=DEFAULT.endpoint_match) -> Path2:
    """G1 on s in [0, 1/2], then G2; needs top(G1) = bottom(G2)."""
    if _edge_gap(G1.top(), G2.bottom()) > tol:
        raise PathError("vconcat2: top edge of the first 2-path differs from the bottom of the second")

    def pick(f1, f2, scale):
        def fn(t, s):
            t, s = np.broadcast_arrays(np.asarray(t, dtype=np.float64), np.asarray(s, dtype=np.float64))
            lo = s < 0.5
            return scale * _sel(lo, f1(t, np.clip(2 * s, 0, 1)), f2(t, np.clip(2 * s - 1, 0, 1)))
        return fn

    return Path2(pick(G1, G2, 1.0), (pick(G1.dt, G2.dt, 1.0), pick(G1.ds, G2.ds, 2.0)), G1.chart_dim,
                 min(G1.margin, G2.margin) / 2)


def hconcat2(G1: Path2, G2: Path2, tol=DEFAULT.endpoint_match) -> Path2:
    """G1 on t in [0, 1/2], then G2; needs right(G1) = left(G2)."""
    if _edge_gap(G1.right(), G2.left()) > tol:
        raise PathError("hconcat2: right edge of the first 2-path differs from the left of the second")

    def pick(f1, f2, scale):
        def fn(t, s):
            t, s = np.broadcast_arrays(np.asarray(t, dtype=np.float64), np.asarray(s, dtype=np.float64))
            lo = t < 0.5
            return scale * _sel(lo, f1(np.clip(2 * t, 0, 1), s), f2(np.clip(2 * t - 1, 0, 1), s))
        return fn

    return Path2(pick(G1, G2, 1.0), (pick(G1.dt, G2.dt, 2.0), pick(G1.ds, G2.ds, 1.0)), G1.chart_dim,
                 min(G1.margin, G2.margin) / 2)


def reverse2_s(G: Path2) -> Path2:
    return Path2(lambda t, s: G(t, 1 - np.asarray(s)),
                 (lambda t, s: G.dt(t, 1 - np.asarray(s)), lambda t, s: -G.ds(t, 1 - np.asarray(s))),
                 G.chart_dim, G.margin)


def reverse2_t(G: Path2) -> Path2:
    return Path2(lambda t, s: G(1 - np.asarray(t), s),
                 (lambda t, s: -G.dt(1 - np.asarray(t), s), lambda t, s: G.ds(1 - np.asarray(t), s)),
                 G.chart_dim, G.margin)


def reparametrize2(G: Path2, f: Callable = smoothstep, df: Callable | None = dsmoothstep, n_check=257) -> Path2:
    """Gamma'(t, s) = Gamma(t, f(s)) for smooth nondecreasing f fixing 0 and 1."""
    u = np.linspace(0, 1, n_check)
    fu = np.asarray(f(u), dtype=np.float64)
    if abs(fu[0]) > 1e-12 or abs(fu[-1] - 1) > 1e-12:
        raise PathError("reparametrize2: f must fix 0 and 1")
    if np.any(np.diff(fu) < -1e-14):
        raise PathError("reparametrize2: f must be nondecreasing")
    if df is None:
        h = DEFAULT.path_fd_step
        df = lambda s: (f(np.asarray(s) + h) - f(np.asarray(s) - h)) / (2 * h)  # noqa: E731
    return Path2(lambda t, s: G(t, f(s)),
                 (lambda t, s: G.dt(t, f(s)), lambda t, s: G.ds(t, f(s)) * np.asarray(df(s))[..., None]),
                 G.chart_dim, G.margin)


def reparametrize2_t(G: Path2, f: Callable = smoothstep, df: Callable = dsmoothstep) -> Path2:
    """Gamma'(t, s) = Gamma(f(t), s)."""
    return Path2(lambda t, s: G(f(t), s),
                 (lambda t, s: G.dt(f(t), s) * np.asarray(df(t))[..., None], lambda t, s: G.ds(f(t), s)),
                 G.chart_dim, G.margin)


def rotate2(G: Path2, R) -> Path2:
    """Apply a linear map to the chart values (used to rotate sphere parametrisations)."""
    R = np.asarray(R, dtype=np.float64)
    return Path2(lambda t, s: G(t, s) @ R.T, (lambda t, s: G.dt(t, s) @ R.T, lambda t, s: G.ds(t, s) @ R.T),
                 G.chart_dim, G.margin)


# ---------------------------------------------------------------- collar checks


def collar_defect(P, n=9) -> float:
    """Largest partial derivative sampled on the sitting collars of a path."""
    eps = P.margin
    u = np.concatenate([np.linspace(0, eps, n), np.linspace(1 - eps, 1, n)])
    full = np.linspace(0, 1, 2 * n + 1)
    if isinstance(P, Path1):
        return float(np.abs(P.velocity(u)).max())
    if isinstance(P, Path2):
        # left/right edges constant: d_t and d_s vanish for t in the collar;
        # bottom/top loops s-independent: d_s vanishes for s in the collar
        T, S = np.meshgrid(u, full, indexing="ij")
        a = np.abs(P.dt(T, S)).max()
        b = np.abs(P.ds(T, S)).max()
        T2, S2 = np.meshgrid(full, u, indexing="ij")
        c = np.abs(P.ds(T2, S2)).max()
        return float(max(a, b, c))
    if isinstance(P, Path3):
        T, S, X = np.meshgrid(u, full, full, indexing="ij")
        a = np.abs(P.dt(T, S, X)).max()
        b = np.abs(P.ds(T, S, X)).max()
        T2, S2, X2 = np.meshgrid(full, u, full, indexing="ij")
        c = np.abs(P.ds(T2, S2, X2)).max()
        return float(max(a, b, c))
    raise TypeError("not a path")


# ---------------------------------------------------------------- registry


def _get(params, key, default=None):
    return params.get(key, default) if params else default


def _builtin_const2(p):
    return constant_2path(_get(p, "point", [0.0, 0.0, 0.0]))


def _builtin_const1(p):
    return constant_path(_get(p, "point", [0.0, 0.0, 0.0]))


def _builtin_segment(p):
    return segment(_get(p, "start", [0.0, 0.0, 0.0]), _get(p, "end", [1.0, 0.0, 0.0]))


def _builtin_circle(p):
    base = _get(p, "base", [0.0, 0.0, 0.0])
    return circle_loop(base, _get(p, "radius", 1.0), tuple(_get(p, "axes", (0, 1))))


def _builtin_loop(p):
    return loop(_get(p, "base", [0.0, 0.0, 0.0]), _get(p, "coef"))


def _builtin_bump(p):
    base = np.asarray(_get(p, "base", [0.0, 0.0, 0.0]), dtype=np.float64)
    n = len(base)
    default_mid = np.zeros((2, n))
    default_mid[0, 0] = -0.5
    default_mid[1, 1 % n] = 0.5
    return bump_square(base, _get(p, "c0"), _get(p, "c1"), _get(p, "cmid", default_mid),
                       amplitude=_get(p, "amplitude", 1.0))


def _builtin_sphere(p):
    return sphere_d2(_get(p, "center", (0.0, 0.0, 0.0)), _get(p, "radius", 1.0), _get(p, "rotation"),
                     _get(p, "chart_dim", 3))


def _builtin_xbubble(p):
    q0 = _get(p, "q0", [0.0, 0.0, 0.0])
    return x_bubble(q0, _get(p, "qv"), _get(p, "qa"), _get(p, "cmid0"), _get(p, "cmid1"), _get(p, "ctwist"))


BUILTINS: dict[str, Callable] = {
    "const-path": _builtin_const1,
    "const-2path": _builtin_const2,
    "segment": _builtin_segment,
    "circle-loop": _builtin_circle,
    "loop": _builtin_loop,
    "bump-square": _builtin_bump,
    "sphere-D2": _builtin_sphere,
    "x-bubble": _builtin_xbubble,
}


def builtin(name: str, params: dict | None = None):
    try:
        make = BUILTINS[name]
    except KeyError:
        raise PathError(f"unknown builtin path {name!r}; known: {sorted(BUILTINS)}") from None
    return make(params or {})
