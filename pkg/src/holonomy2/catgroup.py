"""The categorical group of a crossed module.

Objects are elements X of G; a morphism (X, e) with e in E goes from X to
d(e)^{-1} X.  Vertical composition multiplies fibers, the tensor product is
``(X, e) (x) (Y, f) = (XY, (X |> f) e)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .lie import CrossedModule, KindMismatch, _fro


class IncompatibleMorphisms(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CatMorphism:
    source_obj: np.ndarray
    fiber: np.ndarray
    module: CrossedModule

    def __post_init__(self):
        G, E = self.module.base, self.module.fiber
        X = np.asarray(self.source_obj, dtype=np.complex128 if not G.real else None)
        e = np.asarray(self.fiber, dtype=np.complex128 if not E.real else None)
        if G.real and np.iscomplexobj(X):
            X = X.real
        if E.real and np.iscomplexobj(e):
            e = e.real
        if X.shape != (G.dim, G.dim) or e.shape != (E.dim, E.dim):
            raise KindMismatch("morphism matrices do not match the module's groups")
        object.__setattr__(self, "source_obj", X)
        object.__setattr__(self, "fiber", e)

    @property
    def X(self):
        return self.source_obj

    @property
    def e(self):
        return self.fiber

    def to_json(self) -> dict:
        return {"module": self.module.name, "X": matrix_to_json(self.X), "e": matrix_to_json(self.e)}


def matrix_to_json(M):
    M = np.asarray(M)
    if np.iscomplexobj(M):
        return [[[float(z.real), float(z.imag)] for z in row] for row in M]
    return [[float(x) for x in row] for row in M]


def identity_morphism(cm: CrossedModule, X=None) -> CatMorphism:
    X = cm.base.identity() if X is None else X
    return CatMorphism(X, cm.fiber.identity(), cm)


def source(m: CatMorphism):
    return m.X


def target(m: CatMorphism):
    cm = m.module
    return cm.base.inv(cm.boundary_group(m.e)) @ m.X


def _check_module(m1, m2):
    if m1.module is not m2.module:
        raise KindMismatch(f"module mismatch: {m1.module.name} vs {m2.module.name}")


def compose(m1: CatMorphism, m2: CatMorphism, tol: float = DEFAULT.compose_match) -> CatMorphism:
    """Vertical composite: m1 first, then m2."""
    _check_module(m1, m2)
    gap = float(_fro(target(m1) - source(m2)))
    if gap > tol:
        raise IncompatibleMorphisms(f"target of first morphism differs from source of second by {gap:.3e}")
    return CatMorphism(m1.X, m1.e @ m2.e, m1.module)


def tensor(m1: CatMorphism, m2: CatMorphism) -> CatMorphism:
    _check_module(m1, m2)
    cm = m1.module
    return CatMorphism(m1.X @ m2.X, cm.act_group(m1.X, m2.e) @ m1.e, cm)


def vertical_inverse(m: CatMorphism) -> CatMorphism:
    return CatMorphism(target(m), m.module.fiber.inv(m.e), m.module)


def tensor_inverse(m: CatMorphism) -> CatMorphism:
    cm = m.module
    Xi = cm.base.inv(m.X)
    return CatMorphism(Xi, cm.act_group(Xi, cm.fiber.inv(m.e)), cm)


def morphism_distance(m1: CatMorphism, m2: CatMorphism) -> float:
    return float(max(_fro(m1.X - m2.X), _fro(m1.e - m2.e)))


def check_interchange(m1: CatMorphism, m2: CatMorphism, m3: CatMorphism, m4: CatMorphism,
                      tol: float = DEFAULT.compose_match) -> float:
    """Defect of (m1 o m2) (x) (m3 o m4) against (m1 (x) m3) o (m2 (x) m4).

    ``o`` composes vertically with the left argument applied first; m1, m2
    and m3, m4 must be composable pairs.
    """
    lhs = tensor(compose(m1, m2, tol), compose(m3, m4, tol))
    top, bottom = tensor(m1, m3), tensor(m2, m4)
    # a broken action can make the tensored pair non-composable; that gap is part of the defect
    gap = float(_fro(target(top) - source(bottom)))
    rhs = compose(top, bottom, tol=np.inf)
    return max(morphism_distance(lhs, rhs), gap)


def random_morphism(cm: CrossedModule, rng, scale=1.0, X=None) -> CatMorphism:
    X = cm.base.random(rng, (), scale) if X is None else X
    return CatMorphism(X, cm.fiber.random(rng, (), scale), cm)


def random_interchange_grid(cm: CrossedModule, rng, scale=1.0):
    """Four random morphisms with m1, m2 and m3, m4 composable."""
    m1 = random_morphism(cm, rng, scale)
    m2 = random_morphism(cm, rng, scale, X=target(m1))
    m3 = random_morphism(cm, rng, scale)
    m4 = random_morphism(cm, rng, scale, X=target(m3))
    return m1, m2, m3, m4
