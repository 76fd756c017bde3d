import os
import subprocess
import sys

import numpy as np
import pytest
import scipy.linalg

from holonomy2 import _kernels
from holonomy2._kernels import pykernels

BACKENDS = [pykernels] + ([_kernels.ckernels] if _kernels.ckernels is not None else [])


def _random(rng, shape, scale):
    return (rng.normal(size=shape) + 1j * rng.normal(size=shape)) * scale


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
@pytest.mark.parametrize("d", [1, 2, 3, 4])
@pytest.mark.parametrize("scale", [1e-3, 0.3, 2.0, 8.0])
def test_expm_matches_scipy(mod, d, scale, rng):
    A = _random(rng, (20, d, d), scale)
    got = mod.expm_batch(A)
    want = np.array([scipy.linalg.expm(a) for a in A])
    assert np.abs(got - want).max() <= 1e-12 * max(1.0, np.abs(want).max())


@pytest.mark.skipif(_kernels.ckernels is None, reason="compiled kernels not built")
def test_compiled_matches_fallback(rng):
    C, Py = _kernels.ckernels, pykernels
    for d in (2, 3):
        A0, Am, A1 = (_random(rng, (17, d, d), 0.4) for _ in range(3))
        Y = np.broadcast_to(np.eye(d, dtype=complex), (17, d, d)).copy()
        for order in (2, 4):
            for name in ("cf4_step_left", "cf4_step_right"):
                a = getattr(C, name)(Y, A0, Am, A1, 0.1, order)
                b = getattr(Py, name)(Y, A0, Am, A1, 0.1, order)
                assert np.abs(a - b).max() < 1e-13
        S = _random(rng, (65, d, d), 0.5)
        y0 = np.eye(d, dtype=complex)
        for name in ("cf4_sequence_left", "cf4_sequence_right"):
            assert np.abs(getattr(C, name)(S, 1 / 32, y0) - getattr(Py, name)(S, 1 / 32, y0)).max() < 1e-12


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_sequence_constant_generator_is_exact(mod, rng):
    # Y' = A Y with constant A: every step is exp(hA), so the sequence ends at exp(A)
    A = _random(rng, (3, 3), 0.5)
    N = 16
    S = np.broadcast_to(A, (2 * N + 1, 3, 3)).copy()
    y0 = np.eye(3, dtype=complex)
    left = mod.cf4_sequence_left(S, 1 / N, y0)
    right = mod.cf4_sequence_right(S, 1 / N, y0)
    E = scipy.linalg.expm(A)
    assert np.abs(left[-1] - E).max() < 1e-12
    assert np.abs(right[-1] - E).max() < 1e-12


def _order_errors(mod, order, rng):
    A, B = _random(rng, (3, 3), 0.6), _random(rng, (3, 3), 0.6)

    def gen(t):
        return A * np.cos(2 * t)[:, None, None] + B * t[:, None, None] ** 2

    y0 = np.eye(3, dtype=complex)
    ref = mod.cf4_sequence_left(gen(np.linspace(0, 1, 2 * 1024 + 1)), 1 / 1024, y0)[-1]
    errs = []
    for N in (16, 32):
        errs.append(np.abs(mod.cf4_sequence_left(gen(np.linspace(0, 1, 2 * N + 1)), 1 / N, y0, order)[-1] - ref).max())
    return errs


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
@pytest.mark.parametrize("order", [2, 4])
def test_integrator_convergence_order(mod, order, rng):
    e1, e2 = _order_errors(mod, order, rng)
    assert np.log2(e1 / e2) > order - 0.3


def test_backend_selection_by_env():
    code = "from holonomy2 import BACKEND; print(BACKEND)"
    env = dict(os.environ, HOLONOMY2_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    env.pop("HOLONOMY2_PURE_PYTHON")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == ("cython" if _kernels.ckernels is not None else "python")
