# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled group-integrator kernels.

Same algorithms as ``_pykernels``: [6/6] Pade scaling and squaring for
small complex matrices (d <= 8) and the order-4 commutator-free stepper.
"""
import numpy as np
from libc.math cimport ceil, log2, pow, hypot
from libc.string cimport memcpy

cdef enum:
    MAXD = 8
    MAXDD = 64

cdef double[7] PADE6 = [1.0, 1.0 / 2, 5.0 / 44, 1.0 / 66, 1.0 / 792,
                        1.0 / 15840, 1.0 / 665280]


cdef inline double cabs(double complex z) noexcept nogil:
    return hypot(z.real, z.imag)


cdef inline void _matmul(const double complex* A, const double complex* B,
                         double complex* C, int d) noexcept nogil:
    cdef int i, j, k
    cdef double complex acc
    for i in range(d):
        for j in range(d):
            acc = 0
            for k in range(d):
                acc = acc + A[i * d + k] * B[k * d + j]
            C[i * d + j] = acc


cdef int _solve(double complex* D, double complex* N, int d) noexcept nogil:
    """Overwrite N with D^{-1} N (Gaussian elimination, partial pivoting)."""
    cdef int i, j, k, p
    cdef double best, v
    cdef double complex f, tmp
    for k in range(d):
        p = k
        best = cabs(D[k * d + k])
        for i in range(k + 1, d):
            v = cabs(D[i * d + k])
            if v > best:
                best = v
                p = i
        if best == 0.0:
            return -1
        if p != k:
            for j in range(d):
                tmp = D[k * d + j]; D[k * d + j] = D[p * d + j]; D[p * d + j] = tmp
                tmp = N[k * d + j]; N[k * d + j] = N[p * d + j]; N[p * d + j] = tmp
        for i in range(k + 1, d):
            f = D[i * d + k] / D[k * d + k]
            if f != 0:
                for j in range(k, d):
                    D[i * d + j] = D[i * d + j] - f * D[k * d + j]
                for j in range(d):
                    N[i * d + j] = N[i * d + j] - f * N[k * d + j]
    for k in range(d - 1, -1, -1):
        for j in range(d):
            tmp = N[k * d + j]
            for i in range(k + 1, d):
                tmp = tmp - D[k * d + i] * N[i * d + j]
            N[k * d + j] = tmp / D[k * d + k]
    return 0


cdef void _expm(const double complex* A, double complex* F, int d) noexcept nogil:
    cdef double complex As[MAXDD]
    cdef double complex P[MAXDD]
    cdef double complex T[MAXDD]
    cdef double complex Nm[MAXDD]
    cdef double complex Dm[MAXDD]
    cdef int i, j, k, s, dd = d * d
    cdef double norm = 0.0, col, scale, sign
    for j in range(d):
        col = 0.0
        for i in range(d):
            col += cabs(A[i * d + j])
        if col > norm:
            norm = col
    s = 0
    if norm > 0.5:
        s = <int>ceil(log2(norm / 0.5))
    scale = pow(2.0, -s)
    for i in range(dd):
        As[i] = A[i] * scale
        P[i] = As[i]
        Nm[i] = PADE6[1] * As[i]
        Dm[i] = -PADE6[1] * As[i]
    for i in range(d):
        Nm[i * d + i] = Nm[i * d + i] + 1.0
        Dm[i * d + i] = Dm[i * d + i] + 1.0
    sign = -1.0
    for k in range(2, 7):
        _matmul(P, As, T, d)
        memcpy(P, T, dd * sizeof(double complex))
        sign = -sign
        for i in range(dd):
            Nm[i] = Nm[i] + PADE6[k] * P[i]
            Dm[i] = Dm[i] + sign * PADE6[k] * P[i]
    _solve(Dm, Nm, d)
    for k in range(s):
        _matmul(Nm, Nm, T, d)
        memcpy(Nm, T, dd * sizeof(double complex))
    memcpy(F, Nm, dd * sizeof(double complex))


cdef inline void _factors(const double complex* A0, const double complex* Am,
                          const double complex* A1, double h, int order,
                          double complex* Pm, double complex* Qm, int d) noexcept nogil:
    cdef double complex X[MAXDD]
    cdef int i, dd = d * d
    if order == 2:
        for i in range(dd):
            X[i] = h * Am[i]
        _expm(X, Pm, d)
        return
    for i in range(dd):
        X[i] = h * (0.25 * A0[i] + Am[i] / 3.0 - A1[i] / 12.0)
    _expm(X, Pm, d)
    for i in range(dd):
        X[i] = h * (-A0[i] / 12.0 + Am[i] / 3.0 + 0.25 * A1[i])
    _expm(X, Qm, d)


cdef inline void _apply(double complex* y, const double complex* Pm,
                        const double complex* Qm, int order, bint left, int d) noexcept nogil:
    cdef double complex T[MAXDD]
    cdef double complex U[MAXDD]
    cdef int dd = d * d
    if left:
        _matmul(Pm, y, T, d)
        if order == 2:
            memcpy(y, T, dd * sizeof(double complex))
        else:
            _matmul(Qm, T, U, d)
            memcpy(y, U, dd * sizeof(double complex))
    else:
        _matmul(y, Pm, T, d)
        if order == 2:
            memcpy(y, T, dd * sizeof(double complex))
        else:
            _matmul(T, Qm, U, d)
            memcpy(y, U, dd * sizeof(double complex))


def _as_stack(A):
    A = np.ascontiguousarray(A, dtype=np.complex128)
    shape = A.shape
    d = shape[len(shape) - 1]
    if d > MAXD:
        raise ValueError(f"compiled kernels support d <= {MAXD}, got {d}")
    return A.reshape(-1, d, d), shape, d


def expm_batch(A):
    A3, shape, d = _as_stack(A)
    out = np.empty_like(A3)
    cdef const double complex[:, :, ::1] a = A3
    cdef double complex[:, :, ::1] o = out
    cdef Py_ssize_t b, nb = a.shape[0]
    cdef int di = d
    with nogil:
        for b in range(nb):
            _expm(&a[b, 0, 0], &o[b, 0, 0], di)
    return out.reshape(shape)


def _step(Y, A0, Am, A1, double h, int order, bint left):
    Y3, shape, d = _as_stack(Y)
    Y3 = Y3.copy()
    n = Y3.shape[0]
    B0 = np.ascontiguousarray(np.broadcast_to(A0, Y3.shape), dtype=np.complex128)
    Bm = np.ascontiguousarray(np.broadcast_to(Am, Y3.shape), dtype=np.complex128)
    B1 = np.ascontiguousarray(np.broadcast_to(A1, Y3.shape), dtype=np.complex128)
    cdef double complex[:, :, ::1] y = Y3
    cdef const double complex[:, :, ::1] a0 = B0
    cdef const double complex[:, :, ::1] am = Bm
    cdef const double complex[:, :, ::1] a1 = B1
    cdef double complex Pm[MAXDD]
    cdef double complex Qm[MAXDD]
    cdef Py_ssize_t b, nb = n
    cdef int di = d
    with nogil:
        for b in range(nb):
            _factors(&a0[b, 0, 0], &am[b, 0, 0], &a1[b, 0, 0], h, order, Pm, Qm, di)
            _apply(&y[b, 0, 0], Pm, Qm, order, left, di)
    return Y3.reshape(shape)


def cf4_step_left(Y, A0, Am, A1, h, order=4):
    return _step(Y, A0, Am, A1, h, order, True)


def cf4_step_right(Y, A0, Am, A1, h, order=4):
    return _step(Y, A0, Am, A1, h, order, False)


def _sequence(A, double h, y0, int order, bint left):
    A3, shape, d = _as_stack(A)
    n = (A3.shape[0] - 1) // 2
    out = np.empty((n + 1, d, d), dtype=np.complex128)
    out[0] = y0
    cdef const double complex[:, :, ::1] a = A3
    cdef double complex[:, :, ::1] o = out
    cdef double complex y[MAXDD]
    cdef double complex Pm[MAXDD]
    cdef double complex Qm[MAXDD]
    cdef Py_ssize_t k, nn = n
    cdef int di = d, dd = d * d
    memcpy(y, &o[0, 0, 0], dd * sizeof(double complex))
    with nogil:
        for k in range(nn):
            _factors(&a[2 * k, 0, 0], &a[2 * k + 1, 0, 0], &a[2 * k + 2, 0, 0],
                     h, order, Pm, Qm, di)
            _apply(y, Pm, Qm, order, left, di)
            memcpy(&o[k + 1, 0, 0], y, dd * sizeof(double complex))
    return out


def cf4_sequence_left(A, h, y0, order=4):
    return _sequence(A, h, y0, order, True)


def cf4_sequence_right(A, h, y0, order=4):
    return _sequence(A, h, y0, order, False)
