"""Matrix Lie groups, Lie crossed modules and their differential versions.

Every group is realised as a group of small square matrices so that products
are matrix products.  Additive groups are embedded as unipotent matrices:
``R^2`` as ``[[1,0,x],[0,1,y],[0,0,1]]`` and ``iR`` as ``[[1,i t],[0,1]]``.

Raw (vectorised) routines live on :class:`GroupKind` and :class:`CrossedModule`
and act on arrays of shape ``(..., d, d)``.  The small wrapper types
:class:`GroupElement` and :class:`AlgebraElement` validate single values and
are what the top-level functions accept.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .config import DEFAULT


class BranchError(ValueError):
    """Group element outside the domain of the principal logarithm."""


class KindMismatch(ValueError):
    pass


def _comm(A, B):
    return A @ B - B @ A


def _eye_like(A):
    d = A.shape[-1]
    return np.broadcast_to(np.eye(d, dtype=A.dtype), A.shape).copy()


def _fro(A):
    return np.sqrt(np.sum(np.abs(A) ** 2, axis=(-2, -1)))


# ---------------------------------------------------------------- group kinds


class GroupKind:
    """A registered matrix group: dimension, basis of its algebra, exp/log."""

    name: str = ""
    dim: int = 0
    real: bool = True
    basis: np.ndarray

    @property
    def dtype(self):
        return np.float64 if self.real else np.complex128

    @property
    def alg_dim(self) -> int:
        return self.basis.shape[0]

    def identity(self, shape=()):
        return np.broadcast_to(np.eye(self.dim, dtype=self.dtype), tuple(shape) + (self.dim, self.dim)).copy()

    def from_coords(self, c):
        c = np.asarray(c)
        return np.tensordot(c, self.basis, axes=([-1], [0])).astype(self.dtype, copy=False)

    def to_coords(self, A):
        # basis matrices are orthogonal (not all normalised) under the real Frobenius product
        B = self.basis
        num = np.real(np.einsum("...ij,kij->...k", A, B.conj()))
        den = np.real(np.einsum("kij,kij->k", B, B.conj()))
        return num / den

    def alg_defect(self, A):
        """Distance of A from the algebra (projection residual)."""
        return _fro(A - self.from_coords(self.to_coords(A)))

    def constraint_defect(self, g):
        return _fro(g - self.project(g))

    def inv(self, g):
        return np.linalg.inv(g)

    def exp(self, A):
        E = _kernels.expm_batch(A)
        return E.real.copy() if self.real else E

    def log(self, g):
        return _log_generic(g, self.real)

    def project(self, g):
        return g

    def random_alg(self, rng, size=(), scale=1.0):
        shape = tuple(size) if isinstance(size, (tuple, list)) else (int(size),)
        return self.from_coords(rng.normal(scale=scale, size=shape + (self.alg_dim,)))

    def random(self, rng, size=(), scale=1.0):
        return self.exp(self.random_alg(rng, size, scale))

    def __repr__(self):
        return f"GroupKind({self.name})"


def _log_generic(g, real):
    """Principal log by inverse scaling and squaring.

    Repeated Denman-Beavers square roots bring g near the identity, then the
    series of log(1+X) is summed.  Raises BranchError when a root fails to
    converge (eigenvalue on the closed negative real axis).
    """
    g = np.asarray(g, dtype=np.complex128)
    shape = g.shape
    d = shape[-1]
    X = g.reshape(-1, d, d).copy()
    eye = np.eye(d)
    k = 0
    while True:
        nrm = np.abs(X - eye).sum(axis=-2).max(axis=-1).max(initial=0.0)
        if nrm < 0.25:
            break
        if k > 60:
            raise BranchError("logarithm: square-root iteration did not reach the identity")
        Y, Z = X.copy(), np.broadcast_to(eye, X.shape).astype(np.complex128)
        for _ in range(100):
            try:
                Yn = 0.5 * (Y + np.linalg.inv(Z))
                Zn = 0.5 * (Z + np.linalg.inv(Y))
            except np.linalg.LinAlgError:
                raise BranchError("logarithm: singular square-root iterate (eigenvalue on the negative axis)") from None
            done = np.abs(Yn - Y).max(initial=0.0) <= 1e-15 * max(1.0, np.abs(Yn).max(initial=0.0))
            Y, Z = Yn, Zn
            if done:
                break
        else:
            raise BranchError("logarithm: square root did not converge (eigenvalue near the negative axis)")
        if not np.isfinite(Y).all():
            raise BranchError("logarithm: singular square root")
        X = Y
        k += 1
    N = X - eye
    term = N.copy()
    L = np.zeros_like(N)
    for j in range(1, 40):
        L = L + ((-1.0) ** (j + 1) / j) * term
        term = term @ N
    L = L * (2.0 ** k)
    L = L.reshape(shape)
    return L.real.copy() if real else L


class U1(GroupKind):
    name = "u1"
    dim = 1
    real = False
    basis = np.array([[[1j]]])

    def exp(self, A):
        return np.exp(A)

    def log(self, g):
        return 1j * np.angle(g) + 0 * g

    def project(self, g):
        return g / np.abs(g)

    def inv(self, g):
        return g.conj()

    def alg_defect(self, A):
        return np.abs(A.real)[..., 0, 0]


class IR(GroupKind):
    """Additive group iR as 2x2 unipotent matrices [[1, i t], [0, 1]]."""

    name = "ir"
    dim = 2
    real = False
    basis = np.array([[[0, 1j], [0, 0]]])

    def exp(self, A):
        return _eye_like(np.asarray(A, dtype=np.complex128)) + A

    def log(self, g):
        return g - _eye_like(g)

    def project(self, g):
        out = _eye_like(np.asarray(g, dtype=np.complex128))
        out[..., 0, 1] = 1j * np.imag(g[..., 0, 1])
        return out

    def inv(self, g):
        return 2 * _eye_like(g) - g

    def value(self, g):
        """The imaginary number represented by g."""
        return g[..., 0, 1]


_PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=np.complex128)
_TAU = -0.5j * _PAULI


class SU2(GroupKind):
    name = "su2"
    dim = 2
    real = False
    basis = _TAU

    def exp(self, A):
        A = np.asarray(A, dtype=np.complex128)
        v = self.to_coords(A)
        half = 0.5 * np.linalg.norm(v, axis=-1)
        c = np.cos(half)[..., None, None]
        s = np.sinc(half / np.pi)[..., None, None]
        return c * _eye_like(A) + s * A

    def log(self, g):
        g = np.asarray(g, dtype=np.complex128)
        ch = np.clip(np.real(np.trace(g, axis1=-2, axis2=-1)) / 2, -1.0, 1.0)
        alpha = np.arccos(ch)
        if np.any(alpha > np.pi - DEFAULT.log_branch_guard):
            raise BranchError("su2 logarithm: element at the branch point -1")
        anti = 0.5 * (g - np.conj(np.swapaxes(g, -1, -2)))
        factor = 1.0 / np.sinc(alpha / np.pi)
        return factor[..., None, None] * anti

    def project(self, g):
        g = np.asarray(g, dtype=np.complex128)
        a = 0.5 * (g[..., 0, 0] + np.conj(g[..., 1, 1]))
        b = 0.5 * (g[..., 1, 0] - np.conj(g[..., 0, 1]))
        n = np.sqrt(np.abs(a) ** 2 + np.abs(b) ** 2)
        a, b = a / n, b / n
        out = np.empty(g.shape, dtype=np.complex128)
        out[..., 0, 0] = a
        out[..., 0, 1] = -np.conj(b)
        out[..., 1, 0] = b
        out[..., 1, 1] = np.conj(a)
        return out

    def inv(self, g):
        return np.conj(np.swapaxes(g, -1, -2))

    def to_coords(self, A):
        return -2.0 * np.real(np.einsum("kij,...ji->...k", _TAU, A))


_EPS = np.zeros((3, 3, 3))
for (_i, _j, _k), _s in {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}.items():
    _EPS[_i, _j, _k] = _s
# (L_k)_{ij} = -eps_{kij}, so [L_x, L_y] = L_z and L_k v = e_k x v
_L = -_EPS


class SO3(GroupKind):
    name = "so3"
    dim = 3
    real = True
    basis = _L

    def exp(self, A):
        A = np.asarray(A, dtype=np.float64)
        v = self.to_coords(A)
        th = np.linalg.norm(v, axis=-1)
        s1 = np.sinc(th / np.pi)
        # (1 - cos th)/th^2 = 0.5 sinc(th/2)^2
        s2 = 0.5 * np.sinc(th / (2 * np.pi)) ** 2
        return _eye_like(A) + s1[..., None, None] * A + s2[..., None, None] * (A @ A)

    def log(self, g):
        g = np.asarray(g, dtype=np.float64)
        c = np.clip((np.trace(g, axis1=-2, axis2=-1) - 1) / 2, -1.0, 1.0)
        th = np.arccos(c)
        if np.any(th > np.pi - DEFAULT.log_branch_guard):
            raise BranchError("so3 logarithm: rotation angle at pi")
        anti = 0.5 * (g - np.swapaxes(g, -1, -2))
        return (1.0 / np.sinc(th / np.pi))[..., None, None] * anti

    def project(self, g):
        U, _, Vt = np.linalg.svd(np.asarray(g, dtype=np.float64))
        R = U @ Vt
        neg = np.linalg.det(R) < 0
        if np.any(neg):
            U = U.copy()
            U[neg, :, -1] *= -1
            R = U @ Vt
        return R

    def inv(self, g):
        return np.swapaxes(g, -1, -2)

    def to_coords(self, A):
        return np.stack([A[..., 2, 1], A[..., 0, 2], A[..., 1, 0]], axis=-1).real


def _unit(d, i, j, val=1.0):
    M = np.zeros((d, d))
    M[i, j] = val
    return M


class Heis(GroupKind):
    """Heisenberg group: 3x3 real unipotent upper-triangular matrices.

    Algebra basis X=E01, Y=E12, Z=E02 with [X, Y] = Z central.
    """

    name = "heis"
    dim = 3
    real = True
    basis = np.array([_unit(3, 0, 1), _unit(3, 1, 2), _unit(3, 0, 2)])

    def exp(self, A):
        A = np.asarray(A, dtype=np.float64)
        return _eye_like(A) + A + 0.5 * (A @ A)

    def log(self, g):
        N = np.asarray(g, dtype=np.float64) - _eye_like(np.asarray(g, dtype=np.float64))
        return N - 0.5 * (N @ N)

    def project(self, g):
        out = np.triu(np.asarray(g, dtype=np.float64), 1)
        return out + _eye_like(out)

    def inv(self, g):
        N = g - _eye_like(g)
        return _eye_like(g) - N + N @ N

    def alg_defect(self, A):
        return _fro(np.tril(A))


class R2(GroupKind):
    """Additive R^2 embedded as translations [[1,0,x],[0,1,y],[0,0,1]]."""

    name = "r2"
    dim = 3
    real = True
    basis = np.array([_unit(3, 0, 2), _unit(3, 1, 2)])

    def exp(self, A):
        A = np.asarray(A, dtype=np.float64)
        return _eye_like(A) + A

    def log(self, g):
        return g - _eye_like(g)

    def project(self, g):
        out = _eye_like(np.asarray(g, dtype=np.float64))
        out[..., 0, 2] = g[..., 0, 2]
        out[..., 1, 2] = g[..., 1, 2]
        return out

    def inv(self, g):
        return 2 * _eye_like(g) - g


class AutHeis(GroupKind):
    """Automorphisms of the Heisenberg algebra, acting on (X, Y, Z) coordinates.

    Matrices [[A, 0], [v, det A]] with A in GL(2); the algebra consists of the
    derivations [[B, 0], [w, tr B]].
    """

    name = "aut-heis"
    dim = 3
    real = True
    basis = np.array([
        _unit(3, 0, 0) + _unit(3, 2, 2),
        _unit(3, 0, 1),
        _unit(3, 1, 0),
        _unit(3, 1, 1) + _unit(3, 2, 2),
        _unit(3, 2, 0),
        _unit(3, 2, 1),
    ])

    def to_coords(self, A):
        return np.stack([A[..., 0, 0], A[..., 0, 1], A[..., 1, 0], A[..., 1, 1], A[..., 2, 0], A[..., 2, 1]],
                        axis=-1).real

    def alg_defect(self, A):
        return _fro(A - self.from_coords(self.to_coords(A)))

    def project(self, g):
        out = np.array(g, dtype=np.float64, copy=True)
        out[..., 0, 2] = 0.0
        out[..., 1, 2] = 0.0
        out[..., 2, 2] = out[..., 0, 0] * out[..., 1, 1] - out[..., 0, 1] * out[..., 1, 0]
        return out


KINDS: dict[str, GroupKind] = {k.name: k for k in (U1(), IR(), SU2(), SO3(), Heis(), R2(), AutHeis())}


def get_kind(name: str) -> GroupKind:
    try:
        return KINDS[name]
    except KeyError:
        raise KindMismatch(f"unknown group kind {name!r}") from None


# ---------------------------------------------------------------- SU(2) <-> SO(3)


def su2_to_so3(q):
    """Rotation matrix of a unit quaternion given as an SU(2) matrix."""
    q = np.asarray(q, dtype=np.complex128)
    w = q[..., 0, 0].real
    z = -q[..., 0, 0].imag
    y = -q[..., 0, 1].real
    x = -q[..., 0, 1].imag
    R = np.empty(q.shape[:-2] + (3, 3))
    R[..., 0, 0] = 1 - 2 * (y * y + z * z)
    R[..., 0, 1] = 2 * (x * y - z * w)
    R[..., 0, 2] = 2 * (x * z + y * w)
    R[..., 1, 0] = 2 * (x * y + z * w)
    R[..., 1, 1] = 1 - 2 * (x * x + z * z)
    R[..., 1, 2] = 2 * (y * z - x * w)
    R[..., 2, 0] = 2 * (x * z - y * w)
    R[..., 2, 1] = 2 * (y * z + x * w)
    R[..., 2, 2] = 1 - 2 * (x * x + y * y)
    return R


def so3_to_su2(R):
    """One of the two SU(2) lifts of a rotation (trace/Shepperd formula)."""
    R = np.asarray(R, dtype=np.float64)
    shape = R.shape[:-2]
    R = R.reshape(-1, 3, 3)
    tr = np.trace(R, axis1=-2, axis2=-1)
    cand = np.stack([tr, R[:, 0, 0], R[:, 1, 1], R[:, 2, 2]], axis=-1)
    branch = np.argmax(cand, axis=-1)
    w = np.empty(len(R))
    x = np.empty(len(R))
    y = np.empty(len(R))
    z = np.empty(len(R))
    b = branch == 0
    if b.any():
        Rb = R[b]
        wb = 0.5 * np.sqrt(np.maximum(1 + tr[b], 0))
        w[b] = wb
        x[b] = (Rb[:, 2, 1] - Rb[:, 1, 2]) / (4 * wb)
        y[b] = (Rb[:, 0, 2] - Rb[:, 2, 0]) / (4 * wb)
        z[b] = (Rb[:, 1, 0] - Rb[:, 0, 1]) / (4 * wb)
    b = branch == 1
    if b.any():
        Rb = R[b]
        xb = 0.5 * np.sqrt(np.maximum(1 + Rb[:, 0, 0] - Rb[:, 1, 1] - Rb[:, 2, 2], 0))
        x[b] = xb
        w[b] = (Rb[:, 2, 1] - Rb[:, 1, 2]) / (4 * xb)
        y[b] = (Rb[:, 0, 1] + Rb[:, 1, 0]) / (4 * xb)
        z[b] = (Rb[:, 0, 2] + Rb[:, 2, 0]) / (4 * xb)
    b = branch == 2
    if b.any():
        Rb = R[b]
        yb = 0.5 * np.sqrt(np.maximum(1 - Rb[:, 0, 0] + Rb[:, 1, 1] - Rb[:, 2, 2], 0))
        y[b] = yb
        w[b] = (Rb[:, 0, 2] - Rb[:, 2, 0]) / (4 * yb)
        x[b] = (Rb[:, 0, 1] + Rb[:, 1, 0]) / (4 * yb)
        z[b] = (Rb[:, 1, 2] + Rb[:, 2, 1]) / (4 * yb)
    b = branch == 3
    if b.any():
        Rb = R[b]
        zb = 0.5 * np.sqrt(np.maximum(1 - Rb[:, 0, 0] - Rb[:, 1, 1] + Rb[:, 2, 2], 0))
        z[b] = zb
        w[b] = (Rb[:, 1, 0] - Rb[:, 0, 1]) / (4 * zb)
        x[b] = (Rb[:, 0, 2] + Rb[:, 2, 0]) / (4 * zb)
        y[b] = (Rb[:, 1, 2] + Rb[:, 2, 1]) / (4 * zb)
    q = np.empty((len(R), 2, 2), dtype=np.complex128)
    q[:, 0, 0] = w - 1j * z
    q[:, 0, 1] = -y - 1j * x
    q[:, 1, 0] = y - 1j * x
    q[:, 1, 1] = w + 1j * z
    return q.reshape(shape + (2, 2))


def su2_alg_to_vec(xi):
    return SU2().to_coords(xi)


def vec_to_su2_alg(v):
    return np.tensordot(v, _TAU, axes=([-1], [0]))


# ---------------------------------------------------------------- crossed modules


@dataclass(frozen=True, eq=False)
class CrossedModule:
    """A Lie crossed module (d: E -> G, action) with its differential version.

    All callables act on raw arrays and broadcast over leading axes.
    ``act_group_alg`` is the induced action of G on the Lie algebra of E,
    and ``section`` is a linear right inverse of ``boundary_alg`` on its image.
    """

    name: str
    base: GroupKind
    fiber: GroupKind
    boundary_group: Callable
    boundary_alg: Callable
    act_group: Callable
    act_alg: Callable
    act_group_alg: Callable
    section: Callable
    kernel_basis: np.ndarray = field(default_factory=lambda: np.zeros((0, 1, 1)))

    @property
    def base_group_kind(self) -> str:
        return self.base.name

    @property
    def fiber_group_kind(self) -> str:
        return self.fiber.name

    def __repr__(self):
        return f"CrossedModule({self.name})"


def _u1_exp():
    base, fiber = KINDS["u1"], KINDS["ir"]

    def bnd(e):
        return np.exp(e[..., 0:1, 1:2])

    def bnd_alg(xi):
        return np.asarray(xi[..., 0:1, 1:2], dtype=np.complex128)

    def act(g, e):
        return np.broadcast_to(e, np.broadcast_shapes(g.shape[:-2], e.shape[:-2]) + e.shape[-2:]).copy()

    def act_alg(A, xi):
        return np.zeros(np.broadcast_shapes(A.shape[:-2], xi.shape[:-2]) + (2, 2), dtype=np.complex128)

    def section(A):
        out = np.zeros(A.shape[:-2] + (2, 2), dtype=np.complex128)
        out[..., 0, 1] = A[..., 0, 0]
        return out

    return CrossedModule("u1-exp", base, fiber, bnd, bnd_alg, act, act_alg, act, section,
                         kernel_basis=np.zeros((0, 2, 2)))


def _so3_alg_to_su2(A):
    return vec_to_su2_alg(KINDS["so3"].to_coords(A))


def _su2_so3(corrupted=False):
    base, fiber = KINDS["so3"], KINDS["su2"]

    def bnd(q):
        return su2_to_so3(q)

    def bnd_alg(xi):
        return KINDS["so3"].from_coords(su2_alg_to_vec(xi))

    def _maybe_t(R):
        return np.swapaxes(R, -1, -2) if corrupted else R

    def act(R, q):
        lift = so3_to_su2(_maybe_t(R))
        return lift @ q @ np.conj(np.swapaxes(lift, -1, -2))

    def act_alg(A, xi):
        v = su2_alg_to_vec(xi)
        w = np.einsum("...ij,...j->...i", _maybe_t(A), v)
        return vec_to_su2_alg(w)

    def act_ga(R, xi):
        v = su2_alg_to_vec(xi)
        w = np.einsum("...ij,...j->...i", _maybe_t(R), v)
        return vec_to_su2_alg(w)

    name = "su2-so3-corrupted" if corrupted else "su2-so3"
    return CrossedModule(name, base, fiber, bnd, bnd_alg, act, act_alg, act_ga, _so3_alg_to_su2,
                         kernel_basis=np.zeros((0, 2, 2), dtype=np.complex128))


def _heis_coords(e):
    # (a, b, c) = entries (0,1), (0,2), (1,2)
    return e[..., 0, 1], e[..., 0, 2], e[..., 1, 2]


def _heis_r2():
    base, fiber = KINDS["r2"], KINDS["heis"]

    def bnd(e):
        a, _, c = _heis_coords(e)
        out = np.zeros(e.shape[:-2] + (3, 3))
        out[..., 0, 2] = a
        out[..., 1, 2] = c
        return out + _eye_like(out)

    def bnd_alg(xi):
        a, _, c = _heis_coords(xi)
        out = np.zeros(xi.shape[:-2] + (3, 3))
        out[..., 0, 2] = a
        out[..., 1, 2] = c
        return out

    def shift(g, e):
        x, y = g[..., 0, 2], g[..., 1, 2]
        a, _, c = _heis_coords(e)
        return x * c - y * a

    def act(g, e):
        shape = np.broadcast_shapes(g.shape[:-2], e.shape[:-2]) + (3, 3)
        out = np.broadcast_to(e, shape).copy()
        out[..., 0, 2] = out[..., 0, 2] + shift(g, e)
        return out

    def act_alg(A, xi):
        shape = np.broadcast_shapes(A.shape[:-2], xi.shape[:-2]) + (3, 3)
        out = np.zeros(shape)
        out[..., 0, 2] = shift(A, xi)
        return out

    def section(A):
        out = np.zeros(A.shape[:-2] + (3, 3))
        out[..., 0, 1] = A[..., 0, 2]
        out[..., 1, 2] = A[..., 1, 2]
        return out

    return CrossedModule("heis-r2", base, fiber, bnd, bnd_alg, act, act_alg, act, section,
                         kernel_basis=np.array([_unit(3, 0, 2)]))


def _ad_matrix(xi):
    # ad_xi on (X, Y, Z) coordinates
    out = np.zeros(xi.shape[:-2] + (3, 3))
    out[..., 2, 0] = -xi[..., 1, 2]
    out[..., 2, 1] = xi[..., 0, 1]
    return out


def _ad_heis():
    base, fiber = KINDS["aut-heis"], KINDS["heis"]
    H = KINDS["heis"]

    def bnd(e):
        # Ad_e = exp(ad_log e) = 1 + ad_log e, and ad only sees the X, Y parts
        return _eye_like(np.zeros(e.shape[:-2] + (3, 3))) + _ad_matrix(e)

    def lin(phi, xi):
        return H.from_coords(np.einsum("...ij,...j->...i", phi, H.to_coords(xi)))

    def act(phi, e):
        return H.exp(lin(phi, H.log(e)))

    def section(D):
        out = np.zeros(D.shape[:-2] + (3, 3))
        out[..., 0, 1] = D[..., 2, 1]
        out[..., 1, 2] = -D[..., 2, 0]
        return out

    return CrossedModule("ad-heis", base, fiber, bnd, _ad_matrix, act, lin, lin, section,
                         kernel_basis=np.array([_unit(3, 0, 2)]))


def _g_adjoint():
    G = KINDS["so3"]

    def act(g, e):
        return g @ e @ np.swapaxes(g, -1, -2)

    return CrossedModule("g-adjoint", G, G, lambda e: np.array(e, dtype=np.float64, copy=True),
                         lambda xi: np.array(xi, dtype=np.float64, copy=True), act, _comm, act,
                         lambda A: np.array(A, dtype=np.float64, copy=True),
                         kernel_basis=np.zeros((0, 3, 3)))


MODULES: dict[str, CrossedModule] = {
    m.name: m for m in (_u1_exp(), _su2_so3(), _heis_r2(), _ad_heis(), _g_adjoint())
}
# negative control: SO(3) acts through the transposed (inverse) rotation
NEGATIVE_MODULES: dict[str, CrossedModule] = {"su2-so3-corrupted": _su2_so3(corrupted=True)}


def get_module(name: str) -> CrossedModule:
    if name in MODULES:
        return MODULES[name]
    if name in NEGATIVE_MODULES:
        return NEGATIVE_MODULES[name]
    raise KeyError(f"unknown crossed module {name!r}; known: {sorted(MODULES) + sorted(NEGATIVE_MODULES)}")


# ---------------------------------------------------------------- value wrappers


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    matrix: np.ndarray
    kind: str

    def __post_init__(self):
        K = get_kind(self.kind)
        M = np.asarray(self.matrix, dtype=K.dtype if K.real else np.complex128)
        if M.shape != (K.dim, K.dim):
            raise KindMismatch(f"{self.kind} algebra elements are {K.dim}x{K.dim}, got {M.shape}")
        if K.alg_defect(M) > 1e-8 * (1 + np.abs(M).max()):
            raise ValueError(f"matrix is not in the {self.kind} algebra")
        object.__setattr__(self, "matrix", M)

    @property
    def group(self) -> GroupKind:
        return get_kind(self.kind)


@dataclass(frozen=True, eq=False)
class GroupElement:
    matrix: np.ndarray
    kind: str

    def __post_init__(self):
        K = get_kind(self.kind)
        M = np.asarray(self.matrix)
        M = M.real.astype(np.float64) if (K.real and np.iscomplexobj(M) and np.abs(M.imag).max() < 1e-12) else M
        M = np.asarray(M, dtype=K.dtype)
        if M.shape != (K.dim, K.dim):
            raise KindMismatch(f"{self.kind} elements are {K.dim}x{K.dim}, got {M.shape}")
        if K.constraint_defect(M) > DEFAULT.group_constraint * (1 + np.abs(M).max()):
            raise ValueError(f"matrix violates the {self.kind} group constraints")
        object.__setattr__(self, "matrix", M)

    @property
    def group(self) -> GroupKind:
        return get_kind(self.kind)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        _same(self.kind, other.kind)
        return GroupElement(self.matrix @ other.matrix, self.kind)

    def inv(self) -> "GroupElement":
        return GroupElement(self.group.inv(self.matrix), self.kind)


def _same(k1, k2):
    if k1 != k2:
        raise KindMismatch(f"kind mismatch: {k1} vs {k2}")


def identity(kind: str) -> GroupElement:
    return GroupElement(get_kind(kind).identity(), kind)


def exp(A: AlgebraElement) -> GroupElement:
    return GroupElement(A.group.exp(A.matrix), A.kind)


def log(g: GroupElement) -> AlgebraElement:
    return AlgebraElement(g.group.log(g.matrix), g.kind)


def bracket(A: AlgebraElement, B: AlgebraElement) -> AlgebraElement:
    _same(A.kind, B.kind)
    return AlgebraElement(_comm(A.matrix, B.matrix), A.kind)


def boundary(cm: CrossedModule, e: GroupElement) -> GroupElement:
    _same(e.kind, cm.fiber.name)
    return GroupElement(cm.boundary_group(e.matrix), cm.base.name)


def act_group(cm: CrossedModule, g: GroupElement, e: GroupElement) -> GroupElement:
    _same(g.kind, cm.base.name)
    _same(e.kind, cm.fiber.name)
    return GroupElement(cm.act_group(g.matrix, e.matrix), cm.fiber.name)


def act_alg(cm: CrossedModule, A: AlgebraElement, xi: AlgebraElement) -> AlgebraElement:
    _same(A.kind, cm.base.name)
    _same(xi.kind, cm.fiber.name)
    return AlgebraElement(cm.act_alg(A.matrix, xi.matrix), cm.fiber.name)


def maurer_cartan(g: GroupElement, dg) -> AlgebraElement:
    """Left-invariant Maurer-Cartan form: g^{-1} dg."""
    dg = np.asarray(dg)
    if dg.shape != g.matrix.shape:
        raise KindMismatch("tangent matrix shape does not match the group element")
    return AlgebraElement(np.linalg.solve(g.matrix, dg), g.kind)


# ---------------------------------------------------------------- axiom checks


def crossed_axiom_residuals(cm: CrossedModule, n_samples: int = 100, seed: int = 0, scale: float = 1.0) -> dict:
    """Max defect of each crossed-module law over random samples.

    Group level: equivariance of the boundary, the Peiffer identity, the
    homomorphism and automorphism properties, and compatibility of the
    induced action on the fiber algebra.  Algebra level: the four
    differential crossed-module axioms.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    G, E = cm.base, cm.fiber
    n = n_samples
    g = G.random(rng, (n,), scale)
    h = G.random(rng, (n,), scale)
    e = E.random(rng, (n,), scale)
    f = E.random(rng, (n,), scale)
    A = G.random_alg(rng, (n,), scale)
    B = G.random_alg(rng, (n,), scale)
    xi = E.random_alg(rng, (n,), scale)
    eta = E.random_alg(rng, (n,), scale)
    d, da = cm.boundary_group, cm.boundary_alg
    act, aa, aga = cm.act_group, cm.act_alg, cm.act_group_alg
    Ginv = G.inv
    res = {
        "equivariance": _fro(d(act(g, e)) - g @ d(e) @ Ginv(g)),
        "peiffer": _fro(act(d(e), f) - e @ f @ E.inv(e)),
        "homomorphism": _fro(d(e @ f) - d(e) @ d(f)),
        "automorphism": _fro(act(g, e @ f) - act(g, e) @ act(g, f)),
        "action": _fro(act(g @ h, e) - act(g, act(h, e))),
        "induced_action": _fro(act(g, E.exp(xi)) - E.exp(aga(g, xi))),
        "alg_equivariance": _fro(da(aa(A, xi)) - _comm(A, da(xi))),
        "alg_peiffer": _fro(aa(da(xi), eta) - _comm(xi, eta)),
        "derivation": _fro(aa(A, _comm(xi, eta)) - (_comm(aa(A, xi), eta) + _comm(xi, aa(A, eta)))),
        "alg_action": _fro(aa(_comm(A, B), xi) - (aa(A, aa(B, xi)) - aa(B, aa(A, xi)))),
    }
    return {k: float(np.max(v)) for k, v in res.items()}


def check_crossed_axioms(cm: CrossedModule, n_samples: int = 100, seed: int = 0) -> float:
    """Largest axiom defect over seeded samples; never raises on failure."""
    return max(crossed_axiom_residuals(cm, n_samples, seed).values())
