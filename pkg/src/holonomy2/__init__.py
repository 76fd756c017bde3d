"""Numerical categorical holonomy for Lie crossed modules.

Modules: ``lie`` (matrix groups and crossed modules), ``catgroup`` (the
categorical group), ``forms`` (polynomial differential forms and local
connections), ``paths``, ``transport`` (line and surface holonomy),
``verify`` (law suite), ``wilson`` (Wilson spheres) and ``cli``.
"""
from ._kernels import BACKEND
from .catgroup import CatMorphism
from .config import DEFAULT, Tolerances
from .forms import Form, LocalConnection
from .lie import CrossedModule, MODULES, get_module
from .transport import (SurfaceHolonomy, TransportConfig, categorical_holonomy, line_holonomy, line_transport,
                        surface_holonomy)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CatMorphism",
    "CrossedModule",
    "DEFAULT",
    "Form",
    "LocalConnection",
    "MODULES",
    "SurfaceHolonomy",
    "Tolerances",
    "TransportConfig",
    "categorical_holonomy",
    "get_module",
    "line_holonomy",
    "line_transport",
    "surface_holonomy",
]
