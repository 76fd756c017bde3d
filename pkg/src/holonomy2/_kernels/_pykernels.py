"""Pure numpy implementation of the hot group-integrator kernels.

Every routine here has a compiled twin in ``_ckernels.pyx`` with the same
signature and the same algorithm, so the two agree to rounding error.
Arrays are complex128 with shape ``(..., d, d)``.
"""
import numpy as np

# [6/6] Pade coefficients of exp
PADE6 = (1.0, 1.0 / 2, 5.0 / 44, 1.0 / 66, 1.0 / 792, 1.0 / 15840, 1.0 / 665280)
SCALE_THETA = 0.5


def expm_batch(A):
    """Matrix exponential of a stack of small matrices.

    Scaling and squaring with a [6/6] Pade approximant; each matrix is
    scaled until its 1-norm is at most 0.5.
    """
    A = np.asarray(A, dtype=np.complex128)
    shape = A.shape
    d = shape[-1]
    A = A.reshape(-1, d, d)
    norms = np.abs(A).sum(axis=-2).max(axis=-1)
    s = np.zeros(norms.shape, dtype=np.int64)
    big = norms > SCALE_THETA
    s[big] = np.ceil(np.log2(norms[big] / SCALE_THETA)).astype(np.int64)
    As = A / (2.0 ** s)[:, None, None]
    eye = np.broadcast_to(np.eye(d, dtype=np.complex128), As.shape)
    P = As.copy()
    N = eye + PADE6[1] * P
    D = eye - PADE6[1] * P
    sign = -1.0
    for k in range(2, 7):
        P = P @ As
        N = N + PADE6[k] * P
        D = D + (sign ** k) * PADE6[k] * P
    F = np.linalg.solve(D, N)
    smax = int(s.max()) if s.size else 0
    for k in range(1, smax + 1):
        mask = s >= k
        F[mask] = F[mask] @ F[mask]
    return F.reshape(shape)


def _cf4_exponents(A0, Am, A1, h):
    early = h * (0.25 * A0 + Am / 3.0 - A1 / 12.0)
    late = h * (-A0 / 12.0 + Am / 3.0 + 0.25 * A1)
    return early, late


def cf4_step_left(Y, A0, Am, A1, h, order=4):
    """One step of ``y' = A(t) y`` from samples at t, t+h/2, t+h."""
    if order == 2:
        return expm_batch(h * Am) @ Y
    early, late = _cf4_exponents(A0, Am, A1, h)
    return expm_batch(late) @ (expm_batch(early) @ Y)


def cf4_step_right(Y, A0, Am, A1, h, order=4):
    """One step of ``y' = y A(t)``."""
    if order == 2:
        return Y @ expm_batch(h * Am)
    early, late = _cf4_exponents(A0, Am, A1, h)
    return (Y @ expm_batch(early)) @ expm_batch(late)


def _sequence(A, h, y0, order, left):
    A = np.asarray(A, dtype=np.complex128)
    n = (A.shape[0] - 1) // 2
    d = A.shape[-1]
    out = np.empty((n + 1, d, d), dtype=np.complex128)
    out[0] = y0
    # exponentials for all steps at once, then a sequential product
    A0, Am, A1 = A[0:-1:2], A[1::2], A[2::2]
    if order == 2:
        P = expm_batch(h * Am)
        Q = None
    else:
        early, late = _cf4_exponents(A0, Am, A1, h)
        P = expm_batch(early)
        Q = expm_batch(late)
    y = np.array(y0, dtype=np.complex128)
    for k in range(n):
        if left:
            y = P[k] @ y if Q is None else Q[k] @ (P[k] @ y)
        else:
            y = y @ P[k] if Q is None else (y @ P[k]) @ Q[k]
        out[k + 1] = y
    return out


def cf4_sequence_left(A, h, y0, order=4):
    """Integrate ``y' = A(t) y`` over ``n`` steps.

    ``A`` holds samples on the half-step grid, shape ``(2n+1, d, d)``;
    returns the solution at the ``n+1`` full nodes.
    """
    return _sequence(A, h, y0, order, True)


def cf4_sequence_right(A, h, y0, order=4):
    """Integrate ``y' = y A(t)``; same layout as :func:`cf4_sequence_left`."""
    return _sequence(A, h, y0, order, False)
