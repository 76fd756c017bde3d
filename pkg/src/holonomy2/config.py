"""Central numeric tolerances and defaults."""
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    group_constraint: float = 1e-10
    axioms: float = 1e-10
    log_roundtrip: float = 1e-9
    compose_match: float = 1e-8
    tensor_target: float = 1e-9
    form_fd_step: float = 1e-4
    path_fd_step: float = 1e-6
    endpoint_match: float = 1e-12
    sitting_margin: float = 0.1
    # rotation angle closer than this to pi is outside the SO(3) log domain
    log_branch_guard: float = 1e-7
    # integrator-limited checks
    structure_fd: float = 1e-6
    structure_analytic: float = 1e-9
    target_law: float = 1e-6
    functoriality: float = 1e-6
    interchange: float = 1e-9
    reparametrization: float = 1e-8
    vertical_inverse: float = 1e-6
    gauge: float = 1e-6
    basepoint: float = 1e-6
    family_derivative: float = 1e-3
    wilson_integer: float = 1e-6
    kernel_membership: float = 1e-6
    # categorical_holonomy rejects target defects above this multiple of target_law
    broken_factor: float = 100.0
    reproject_every: int = 64


DEFAULT = Tolerances()


def with_overrides(**kw) -> Tolerances:
    return replace(DEFAULT, **kw)
