# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled plane-ascent kernel.

Same iteration, constants and tie-breaking as _ascent_py.ascend; restarts
run serially here instead of behind a batch mask.  Keep the two in sync.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()

cdef double C1 = 1e-4
cdef double STEP0 = 0.5
cdef double STEP_GROWTH = 1.3
cdef double STEP_MAX = 4.0
cdef double MIN_STEP = 1e-14


cdef void _orth_pair(double[::1] u, double[::1] v) noexcept nogil:
    cdef Py_ssize_t n = u.shape[0], i, j
    cdef double nu = 0.0, d = 0.0, nv = 0.0
    for i in range(n):
        nu += u[i] * u[i]
    nu = sqrt(nu)
    if nu < 1e-12:
        for i in range(n):
            u[i] = 0.0
        u[0] = 1.0
    else:
        for i in range(n):
            u[i] /= nu
    for i in range(n):
        d += u[i] * v[i]
    for i in range(n):
        v[i] -= d * u[i]
    for i in range(n):
        nv += v[i] * v[i]
    nv = sqrt(nv)
    if nv < 1e-12:
        j = 0
        for i in range(1, n):
            if fabs(u[i]) < fabs(u[j]):
                j = i
        for i in range(n):
            v[i] = 0.0
        v[j] = 1.0
        d = u[j]
        for i in range(n):
            v[i] -= d * u[i]
        nv = 0.0
        for i in range(n):
            nv += v[i] * v[i]
        nv = sqrt(nv)
    for i in range(n):
        v[i] /= nv


cdef double _value(double[:, :, :, ::1] R, double[::1] u, double[::1] v) noexcept nogil:
    cdef Py_ssize_t n = u.shape[0], i, j, k, l
    cdef double q = 0.0, s, t
    for i in range(n):
        for j in range(n):
            s = 0.0
            for k in range(n):
                t = 0.0
                for l in range(n):
                    t += R[i, j, k, l] * u[l]
                s += v[k] * t
            q += u[i] * v[j] * s
    return q


cdef double _value_grad(
    double[:, :, :, ::1] R, double[::1] u, double[::1] v,
    double[::1] gu, double[::1] gv,
) noexcept nogil:
    cdef Py_ssize_t n = u.shape[0], i, j, k, l
    cdef double q = 0.0, t, ui, vj, vk, ul
    for i in range(n):
        gu[i] = 0.0
        gv[i] = 0.0
    for i in range(n):
        ui = u[i]
        for j in range(n):
            vj = v[j]
            for k in range(n):
                vk = v[k]
                for l in range(n):
                    t = R[i, j, k, l]
                    ul = u[l]
                    q += t * ui * vj * vk * ul
                    gu[i] += t * vj * vk * ul
                    gu[l] += t * ui * vj * vk
                    gv[j] += t * ui * vk * ul
                    gv[k] += t * ui * vj * ul
    return q


def ascend(R, starts_u, starts_v, int max_iter=500, double gtol=1e-12):
    """Run every restart to convergence; returns (values, us, vs)."""
    cdef cnp.ndarray[double, ndim=4, mode="c"] Rc = np.ascontiguousarray(R, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2, mode="c"] U = np.array(starts_u, dtype=np.float64, order="C")
    cdef cnp.ndarray[double, ndim=2, mode="c"] V = np.array(starts_v, dtype=np.float64, order="C")
    cdef Py_ssize_t nres = U.shape[0], n = U.shape[1], r, i, it
    cdef cnp.ndarray[double, ndim=1] f = np.empty(nres, dtype=np.float64)
    cdef double[:, :, :, ::1] Rv = Rc
    cdef double[:, ::1] Um = U, Vm = V
    scratch = np.zeros((6, n), dtype=np.float64)
    cdef double[:, ::1] sc = scratch
    cdef double[::1] gu = sc[0], gv = sc[1], tu = sc[2], tv = sc[3], cu = sc[4], cv = sc[5]
    cdef double gtol2 = gtol * gtol
    cdef double step, fr, fc, a, d, bc, gn2
    cdef bint accepted

    with nogil:
        for r in range(nres):
            _orth_pair(Um[r], Vm[r])
            step = STEP0
            fr = _value(Rv, Um[r], Vm[r])
            for it in range(max_iter):
                _value_grad(Rv, Um[r], Vm[r], gu, gv)
                a = 0.0
                d = 0.0
                bc = 0.0
                for i in range(n):
                    a += Um[r, i] * gu[i]
                    d += Vm[r, i] * gv[i]
                    bc += Um[r, i] * gv[i] + Vm[r, i] * gu[i]
                bc *= 0.5
                gn2 = 0.0
                for i in range(n):
                    tu[i] = gu[i] - a * Um[r, i] - bc * Vm[r, i]
                    tv[i] = gv[i] - d * Vm[r, i] - bc * Um[r, i]
                    gn2 += tu[i] * tu[i] + tv[i] * tv[i]
                if gn2 <= gtol2:
                    break
                accepted = False
                while True:
                    for i in range(n):
                        cu[i] = Um[r, i] + step * tu[i]
                        cv[i] = Vm[r, i] + step * tv[i]
                    _orth_pair(cu, cv)
                    fc = _value(Rv, cu, cv)
                    if fc >= fr + C1 * step * gn2:
                        for i in range(n):
                            Um[r, i] = cu[i]
                            Vm[r, i] = cv[i]
                        fr = fc
                        accepted = True
                        break
                    step *= 0.5
                    if step < MIN_STEP:
                        break
                if not accepted:
                    break
                step = step * STEP_GROWTH
                if step > STEP_MAX:
                    step = STEP_MAX
            f[r] = fr
    return f, U, V
