"""Lie-algebra valued differential forms on a coordinate chart.

A k-form is represented by its component array: evaluated at N points it
returns shape ``(N, n, ..., n, d, d)`` with k index axes, fully antisymmetric,
so that ``alpha(e_i, e_j, ...) = alpha[i, j, ...]``.  No 1/k! factors are
used: ``(d alpha)(X0..Xk) = sum_j (-1)^j X_j alpha(..X_j omitted..)`` and
``(a ^ b)`` sums over (p, q)-shuffles with their signs.

Forms backed by a :class:`Poly` have exact derivatives; all others fall back
to central finite differences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Callable, Sequence

import numpy as np

from .config import DEFAULT
from .lie import CrossedModule, _comm, _fro


# ---------------------------------------------------------------- polynomials


class Poly:
    """Polynomial in the chart coordinates with array-valued coefficients."""

    def __init__(self, exps, coefs):
        self.coefs = np.asarray(coefs)
        self.exps = np.asarray(exps, dtype=np.int64)
        if self.exps.ndim != 2:
            self.exps = self.exps.reshape(len(self.coefs), -1)

    @property
    def n(self):
        return self.exps.shape[1]

    @property
    def shape(self):
        return self.coefs.shape[1:]

    @classmethod
    def zero(cls, n, shape, dtype=np.float64):
        return cls(np.zeros((0, n), dtype=np.int64), np.zeros((0,) + tuple(shape), dtype=dtype))

    @classmethod
    def constant(cls, n, value):
        value = np.asarray(value)
        return cls(np.zeros((1, n), dtype=np.int64), value[None])

    def eval(self, x):
        x = np.asarray(x, dtype=np.float64)
        if len(self.coefs) == 0:
            return np.zeros((x.shape[0],) + self.shape, dtype=self.coefs.dtype)
        top = int(self.exps.max())
        pw = np.empty(x.shape + (top + 1,))
        pw[..., 0] = 1.0
        for k in range(1, top + 1):
            pw[..., k] = pw[..., k - 1] * x
        mono = pw[:, 0, self.exps[:, 0]]
        for i in range(1, self.n):
            mono = mono * pw[:, i, self.exps[:, i]]
        return np.tensordot(mono, self.coefs, axes=(1, 0))

    def collapse(self, tol=0.0):
        if len(self.coefs) == 0:
            return self
        uniq, inv = np.unique(self.exps, axis=0, return_inverse=True)
        inv = np.asarray(inv).reshape(-1)
        out = np.zeros((len(uniq),) + self.shape, dtype=self.coefs.dtype)
        np.add.at(out, inv, self.coefs)
        keep = np.abs(out).reshape(len(uniq), -1).max(axis=1) > tol
        return Poly(uniq[keep], out[keep])

    def deriv(self, i):
        e = self.exps[:, i]
        keep = e > 0
        exps = self.exps[keep].copy()
        exps[:, i] -= 1
        coefs = self.coefs[keep] * e[keep].reshape((-1,) + (1,) * len(self.shape))
        return Poly(exps, coefs)

    def gradient(self):
        """Poly with a new leading coefficient axis holding the partial index."""
        parts_e, parts_c = [], []
        for i in range(self.n):
            p = self.deriv(i)
            c = np.zeros((len(p.coefs), self.n) + self.shape, dtype=self.coefs.dtype)
            c[:, i] = p.coefs
            parts_e.append(p.exps)
            parts_c.append(c)
        return Poly(np.concatenate(parts_e), np.concatenate(parts_c)).collapse()

    def map(self, f):
        return Poly(self.exps, f(self.coefs)).collapse()

    def __add__(self, other):
        dt = np.result_type(self.coefs, other.coefs)
        return Poly(np.concatenate([self.exps, other.exps]),
                    np.concatenate([self.coefs.astype(dt), other.coefs.astype(dt)])).collapse()

    def __neg__(self):
        return Poly(self.exps, -self.coefs)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return Poly(self.exps, c * self.coefs)

    def product(self, other, combine):
        """Pointwise product; ``combine(A, B)`` acts on stacked coefficients."""
        Ta, Tb = len(self.coefs), len(other.coefs)
        exps = (self.exps[:, None, :] + other.exps[None, :, :]).reshape(Ta * Tb, self.n)
        A = np.repeat(self.coefs, Tb, axis=0)
        B = np.tile(other.coefs, (Ta,) + (1,) * (other.coefs.ndim - 1))
        return Poly(exps, combine(A, B)).collapse()


# ---------------------------------------------------------------- component algebra


def _perm_sign(perm):
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def antisymmetrize_derivative(D, k):
    """Exterior derivative from the gradient of a k-form.

    ``D`` has shape ``(B, n, [n]*k, d, d)`` with the derivative index first.
    """
    if k == 0:
        return D
    out = 0
    for j in range(k + 1):
        term = np.moveaxis(D, 1, 1 + j)
        out = out + term if j % 2 == 0 else out - term
    return out


def wedge_components(a, p, b, q, op):
    """Components of a ^ b for a p-form and a q-form, combining values by ``op``."""
    ai = a.reshape(a.shape[:1 + p] + (1,) * q + a.shape[1 + p:])
    bi = b.reshape(b.shape[:1] + (1,) * p + b.shape[1:])
    T = op(ai, bi)
    if p == 0 or q == 0:
        return T
    out = 0
    for S in combinations(range(p + q), p):
        comp = [i for i in range(p + q) if i not in S]
        perm = list(S) + comp
        U = np.moveaxis(T, [1 + k for k in range(p + q)], [1 + perm[k] for k in range(p + q)])
        out = out + _perm_sign(perm) * U
    return out


def contract(comps, vectors):
    """Evaluate components ``(N, n.., d, d)`` on a list of vectors ``(N, n)``."""
    out = comps
    for v in vectors:
        v = np.broadcast_to(np.asarray(v, dtype=np.float64), (out.shape[0], out.shape[1]))
        out = np.einsum("ni...,ni->n...", out, v)
    return out


# ---------------------------------------------------------------- forms


class Form:
    """k-form on an n-dimensional chart with values in d x d matrices."""

    def __init__(self, degree: int, chart_dim: int, value_dim: int, *, poly: Poly | None = None,
                 evaluator: Callable | None = None, derivative: "Form | None" = None,
                 fd_step: float = DEFAULT.form_fd_step):
        if poly is None and evaluator is None:
            raise ValueError("a form needs a polynomial or an evaluator")
        self.degree = degree
        self.chart_dim = chart_dim
        self.value_dim = value_dim
        self.poly = poly
        self._evaluator = evaluator
        self._derivative = derivative
        self.fd_step = fd_step

    @property
    def analytic(self) -> bool:
        return self.poly is not None or self._derivative is not None

    def components(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        if self.poly is not None:
            return self.poly.eval(x)
        return self._evaluator(x)

    def __call__(self, point, *vectors):
        if len(vectors) != self.degree:
            raise ValueError(f"{self.degree}-form needs {self.degree} vectors")
        c = self.components(np.asarray(point, dtype=np.float64)[None])
        return contract(c, [np.asarray(v)[None] for v in vectors])[0]

    def evaluate(self, points, *vectors):
        return contract(self.components(points), vectors)

    # derivative ----------------------------------------------------------
    def gradient_fd(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        N, n = x.shape
        h = self.fd_step
        shifts = h * np.eye(n)
        xp = (x[:, None, :] + shifts[None]).reshape(N * n, n)
        xm = (x[:, None, :] - shifts[None]).reshape(N * n, n)
        fp = self.components(xp)
        fm = self.components(xm)
        D = (fp - fm) / (2 * h)
        return D.reshape((N, n) + fp.shape[1:])

    def d(self) -> "Form":
        if self._derivative is not None:
            return self._derivative
        k, n = self.degree, self.chart_dim
        if self.poly is not None:
            return Form(k + 1, n, self.value_dim, poly=_poly_d(self.poly, k), fd_step=self.fd_step)
        return Form(k + 1, n, self.value_dim, evaluator=lambda x: antisymmetrize_derivative(self.gradient_fd(x), k),
                    fd_step=self.fd_step)

    def without_analytic(self) -> "Form":
        """Same values, derivatives forced through finite differences."""
        return Form(self.degree, self.chart_dim, self.value_dim, evaluator=self.components, fd_step=self.fd_step)

    # arithmetic ------------------------------------------------------------
    def _binary(self, other, fpoly, fval):
        if self.degree != other.degree or self.chart_dim != other.chart_dim:
            raise ValueError("forms of different degree or chart")
        if self.poly is not None and other.poly is not None:
            return Form(self.degree, self.chart_dim, self.value_dim, poly=fpoly(self.poly, other.poly),
                        fd_step=self.fd_step)
        return Form(self.degree, self.chart_dim, self.value_dim,
                    evaluator=lambda x: fval(self.components(x), other.components(x)), fd_step=self.fd_step)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b, lambda a, b: a - b)

    def scale(self, c) -> "Form":
        if self.poly is not None:
            return Form(self.degree, self.chart_dim, self.value_dim, poly=self.poly.scale(c), fd_step=self.fd_step)
        return Form(self.degree, self.chart_dim, self.value_dim, evaluator=lambda x: c * self.components(x),
                    fd_step=self.fd_step)

    def map(self, f: Callable, value_dim: int) -> "Form":
        """Apply a linear map to the values (e.g. the boundary or a section)."""
        if self.poly is not None:
            return Form(self.degree, self.chart_dim, value_dim, poly=self.poly.map(f), fd_step=self.fd_step)
        return Form(self.degree, self.chart_dim, value_dim, evaluator=lambda x: f(self.components(x)),
                    fd_step=self.fd_step)


def _poly_d(poly: Poly, k: int) -> Poly:
    G = poly.gradient()
    if k == 0:
        return G
    return Poly(G.exps, antisymmetrize_derivative(G.coefs, k)).collapse()


def wedge(a: Form, b: Form, op: Callable, value_dim: int) -> Form:
    p, q = a.degree, b.degree
    n = a.chart_dim

    def combine(A, B):
        return wedge_components(A, p, B, q, op)

    if a.poly is not None and b.poly is not None:
        return Form(p + q, n, value_dim, poly=a.poly.product(b.poly, combine), fd_step=a.fd_step)
    return Form(p + q, n, value_dim, evaluator=lambda x: combine(a.components(x), b.components(x)),
                fd_step=a.fd_step)


def constant_form(degree, chart_dim, comps) -> Form:
    comps = np.asarray(comps)
    return Form(degree, chart_dim, comps.shape[-1], poly=Poly.constant(chart_dim, comps))


def zero_form(degree, chart_dim, value_dim, dtype=np.float64) -> Form:
    shape = (chart_dim,) * degree + (value_dim, value_dim)
    return Form(degree, chart_dim, value_dim, poly=Poly.zero(chart_dim, shape, dtype))


def poly_form(degree, chart_dim, terms: Sequence[tuple]) -> Form:
    """Form from ``(exponent tuple, component array)`` terms; components are antisymmetrised."""
    exps = np.array([t[0] for t in terms], dtype=np.int64).reshape(len(terms), chart_dim)
    coefs = np.array([np.asarray(t[1]) for t in terms])
    coefs = _alternate(coefs, degree)
    return Form(degree, chart_dim, coefs.shape[-1], poly=Poly(exps, coefs).collapse())


def _alternate(c, k):
    """Antisymmetrise the k index axes following the leading batch axis (sum over signed permutations)."""
    if k <= 1:
        return c
    out = 0
    for perm in permutations(range(k)):
        out = out + _perm_sign(perm) * np.moveaxis(c, [1 + i for i in range(k)], [1 + perm[i] for i in range(k)])
    return out


def random_poly_form(rng, degree, chart_dim, basis, max_degree=2, scale=1.0) -> Form:
    """Random polynomial form with coefficients spanned by ``basis`` matrices."""
    n = chart_dim
    exps = [e for e in np.ndindex(*(max_degree + 1,) * n) if sum(e) <= max_degree]
    coefs = []
    for _ in exps:
        c = rng.normal(scale=scale, size=(n,) * degree + (len(basis),))
        coefs.append(np.tensordot(c, basis, axes=([-1], [0])))
    coefs = _alternate(np.array(coefs), degree) / math.factorial(degree) if degree > 1 else np.array(coefs)
    return Form(degree, n, basis.shape[-1], poly=Poly(np.array(exps), coefs).collapse())


# ---------------------------------------------------------------- pointwise operations


def exterior_derivative_1(f: Form, point, v1, v2):
    return f.d()(point, v1, v2)


def wedge_ad_1_1(a: Form, b: Form, point, v1, v2):
    """[a(v1), b(v2)] - [a(v2), b(v1)]."""
    return _comm(a(point, v1), b(point, v2)) - _comm(a(point, v2), b(point, v1))


def wedge_action_1_2(cm: CrossedModule, a: Form, b: Form, point, v1, v2, v3):
    """a(v1) |> b(v2, v3) + a(v2) |> b(v3, v1) + a(v3) |> b(v1, v2)."""
    act = cm.act_alg
    return (act(a(point, v1), b(point, v2, v3)) + act(a(point, v2), b(point, v3, v1))
            + act(a(point, v3), b(point, v1, v2)))


# ---------------------------------------------------------------- connections


@dataclass(eq=False)
class LocalConnection:
    """Chart-level categorical connection: a g-valued 1-form and an e-valued 2-form."""

    module: CrossedModule
    omega0: Form
    m0: Form
    chart_dim: int
    name: str = ""
    box: float = 1.0
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.omega0.degree != 1 or self.m0.degree != 2:
            raise ValueError("omega0 must be a 1-form and m0 a 2-form")
        if self.omega0.chart_dim != self.chart_dim or self.m0.chart_dim != self.chart_dim:
            raise ValueError("chart dimension mismatch")

    @property
    def gdim(self):
        return self.module.base.dim

    @property
    def edim(self):
        return self.module.fiber.dim

    def _cached(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def curvature_form(self) -> Form:
        w = self.omega0
        return self._cached("Omega", lambda: w.d() + wedge(w, w, _comm, self.gdim).scale(0.5))

    def two_curvature_form(self) -> Form:
        w, m = self.omega0, self.m0
        return self._cached("M", lambda: m.d() + wedge(w, m, self.module.act_alg, self.edim))

    def fake_curvature_form(self) -> Form:
        return self._cached("fake", lambda: self.m0.map(self.module.boundary_alg, self.gdim) - self.curvature_form())

    def bianchi_form(self) -> Form:
        w, O = self.omega0, self.curvature_form()
        return self._cached("bianchi", lambda: O.d() + wedge(w, O, _comm, self.gdim))

    def two_bianchi_form(self) -> Form:
        w, M = self.omega0, self.two_curvature_form()
        return self._cached("2bianchi", lambda: M.d() + wedge(w, M, self.module.act_alg, self.edim))

    def alternation_form(self) -> Form:
        m = self.m0
        dm = m.map(self.module.boundary_alg, self.gdim)
        return self._cached("alt", lambda: wedge(dm, m, self.module.act_alg, self.edim))

    def action_wedge_defect_form(self) -> Form:
        """w^(w^m) - 1/2 (w ^ad w)^m with ^ the action wedge."""
        w, m, act = self.omega0, self.m0, self.module.act_alg
        lhs = wedge(w, wedge(w, m, act, self.edim), act, self.edim)
        rhs = wedge(wedge(w, w, _comm, self.gdim), m, act, self.edim).scale(0.5)
        return lhs - rhs

    @property
    def analytic(self) -> bool:
        return self.omega0.analytic and self.m0.analytic

    def without_analytic(self) -> "LocalConnection":
        return LocalConnection(self.module, self.omega0.without_analytic(), self.m0.without_analytic(),
                               self.chart_dim, self.name, self.box)


def curvature(conn: LocalConnection, point, v1, v2):
    return conn.curvature_form()(point, v1, v2)


def two_curvature(conn: LocalConnection, point, v1, v2, v3):
    return conn.two_curvature_form()(point, v1, v2, v3)


def sample_points(conn: LocalConnection, n_samples: int, seed: int):
    rng = np.random.default_rng(seed)
    return rng.uniform(-conn.box, conn.box, size=(n_samples, conn.chart_dim))


def max_component_norm(form: Form, points) -> float:
    c = form.components(points)
    if c.size == 0:
        return 0.0
    return float(_fro(c).max())


def check_fake_curvature(conn: LocalConnection, n_samples: int = 32, seed: int = 0) -> float:
    return max_component_norm(conn.fake_curvature_form(), sample_points(conn, n_samples, seed))


def check_bianchi(conn: LocalConnection, n_samples: int = 32, seed: int = 0) -> float:
    if conn.chart_dim < 3:
        return 0.0
    return max_component_norm(conn.bianchi_form(), sample_points(conn, n_samples, seed))


def check_2bianchi(conn: LocalConnection, n_samples: int = 32, seed: int = 0) -> float:
    if conn.chart_dim < 4:
        return 0.0
    return max_component_norm(conn.two_bianchi_form(), sample_points(conn, n_samples, seed))


def check_alternation(conn: LocalConnection, n_samples: int = 32, seed: int = 0) -> float:
    if conn.chart_dim < 4:
        return 0.0
    return max_component_norm(conn.alternation_form(), sample_points(conn, n_samples, seed))


def check_action_wedge_identity(conn: LocalConnection, n_samples: int = 32, seed: int = 0) -> float:
    if conn.chart_dim < 4:
        return 0.0
    return max_component_norm(conn.action_wedge_defect_form(), sample_points(conn, n_samples, seed))


# ---------------------------------------------------------------- total-space checks


def _omega_total(conn, X, Gm, Gi, vec, vert):
    """omega on the trivial bundle: G^{-1} omega0(vec) G + vertical part."""
    w = conn.omega0.evaluate(X, vec)
    return Gi @ w @ Gm + vert


def _d4(f, h):
    """Fourth-order central difference of a scalar-parameter function at 0."""
    return (8 * (f(h) - f(-h)) - (f(2 * h) - f(-2 * h))) / (12 * h)


def check_cartan_structure(conn: LocalConnection, n_samples: int = 16, seed: int = 0, h: float = 1e-3) -> float:
    """Structure equation on the trivial bundle chart x G.

    The 2-parameter map (s, t) -> (x + s v + t w, g exp(sA) exp(tB)) pulls
    back omega = g^{-1} omega0 g + g^{-1} dg; its curvature d omega + [omega, omega]
    is computed by fourth-order central differences and compared with g^{-1} Omega0(v, w) g.
    """
    rng = np.random.default_rng(seed)
    G = conn.module.base
    N = n_samples
    x = rng.uniform(-conn.box, conn.box, size=(N, conn.chart_dim))
    v = rng.normal(size=(N, conn.chart_dim))
    w = rng.normal(size=(N, conn.chart_dim))
    g = G.random(rng, (N,), 0.7)
    A = G.random_alg(rng, (N,), 0.7)
    B = G.random_alg(rng, (N,), 0.7)

    def frame(s, t):
        Gm = g @ G.exp(s * A) @ G.exp(t * B)
        return x + s * v + t * w, Gm, G.inv(Gm)

    def om_s(s, t):
        X, Gm, Gi = frame(s, t)
        Et = G.exp(t * B)
        return _omega_total(conn, X, Gm, Gi, v, G.inv(Et) @ A @ Et)

    def om_t(s, t):
        X, Gm, Gi = frame(s, t)
        return _omega_total(conn, X, Gm, Gi, w, B)

    lhs = _d4(lambda s: om_t(s, 0), h) - _d4(lambda t: om_s(0, t), h) + _comm(om_s(0, 0), om_t(0, 0))
    rhs = G.inv(g) @ conn.curvature_form().evaluate(x, v, w) @ g
    return float(_fro(lhs - rhs).max())


def check_two_structure(conn: LocalConnection, n_samples: int = 16, seed: int = 0, h: float = 1e-3) -> float:
    """dm + omega ^ m on the trivial bundle against g^{-1} |> M0, pulled back by a 3-parameter map."""
    rng = np.random.default_rng(seed)
    cm = conn.module
    G = cm.base
    N = n_samples
    x = rng.uniform(-conn.box, conn.box, size=(N, conn.chart_dim))
    u, v, w = (rng.normal(size=(N, conn.chart_dim)) for _ in range(3))
    g = G.random(rng, (N,), 0.7)
    A, B, C = (G.random_alg(rng, (N,), 0.7) for _ in range(3))

    def frame(a, b, c):
        Gm = g @ G.exp(a * A) @ G.exp(b * B) @ G.exp(c * C)
        return x + a * u + b * v + c * w, G.inv(Gm)

    def m(a, b, c, p, q):
        X, Gi = frame(a, b, c)
        return cm.act_group_alg(Gi, conn.m0.evaluate(X, p, q))

    dm = (_d4(lambda a: m(a, 0, 0, v, w), h) - _d4(lambda b: m(0, b, 0, u, w), h)
          + _d4(lambda c: m(0, 0, c, u, v), h))
    gi = G.inv(g)
    om = [gi @ conn.omega0.evaluate(x, vec) @ g + V for vec, V in ((u, A), (v, B), (w, C))]
    mm = {(i, j): m(0, 0, 0, p, q) for (i, p), (j, q) in combinations(enumerate((u, v, w)), 2)}
    act = cm.act_alg
    wedge_term = act(om[0], mm[(1, 2)]) - act(om[1], mm[(0, 2)]) + act(om[2], mm[(0, 1)])
    rhs = cm.act_group_alg(gi, conn.two_curvature_form().evaluate(x, u, v, w))
    return float(_fro(dm + wedge_term - rhs).max())


# ---------------------------------------------------------------- gauge change


@dataclass(eq=False)
class GaugeFunction:
    """phi(x) = g0 prod_i exp(c_i x_i A_i) with an exact phi^{-1} d phi."""

    group: object
    g0: np.ndarray
    gens: np.ndarray  # (n, d, d), already scaled by c_i

    def value(self, x):
        x = np.atleast_2d(x)
        G = self.group
        out = np.broadcast_to(self.g0, (x.shape[0],) + self.g0.shape).copy()
        for i in range(self.gens.shape[0]):
            out = out @ G.exp(x[:, i, None, None] * self.gens[i])
        return out

    def maurer_cartan(self, x):
        """Components (N, n, d, d) of phi^{-1} d phi."""
        x = np.atleast_2d(x)
        G = self.group
        n = self.gens.shape[0]
        N = x.shape[0]
        d = self.g0.shape[-1]
        out = np.empty((N, n, d, d), dtype=np.result_type(self.gens, self.g0))
        # phi^{-1} d_j phi = T_j^{-1} A_j T_j with T_j = prod_{i > j} exp(x_i A_i)
        tail = G.identity((N,))
        for j in range(n - 1, -1, -1):
            out[:, j] = G.inv(tail) @ self.gens[j] @ tail
            tail = G.exp(x[:, j, None, None] * self.gens[j]) @ tail
        return out


def gauge_transform_connection(conn: LocalConnection, phi: GaugeFunction) -> LocalConnection:
    """Local data in the trivialisation changed by phi: (phi^{-1} w phi + phi^{-1} d phi, phi^{-1} |> m)."""
    cm = conn.module
    G = cm.base

    def om(x):
        P = phi.value(x)
        Pi = G.inv(P)
        return Pi[:, None] @ conn.omega0.components(x) @ P[:, None] + phi.maurer_cartan(x)

    def mm(x):
        Pi = G.inv(phi.value(x))
        return cm.act_group_alg(Pi[:, None, None], conn.m0.components(x))

    n = conn.chart_dim
    return LocalConnection(cm, Form(1, n, conn.gdim, evaluator=om), Form(2, n, conn.edim, evaluator=mm), n,
                           name=(conn.name + "+gauge"), box=conn.box)
