# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled iteration kernel for chains of standard primitives.

Each table row encodes one primitive:

  [0, vx, vy, ...]                       translation
  [1, a, b, c, d, ...]                   integer linear map
  [2, s, prof, q0, q1, q2, q3, deg, ...] shear in x by s * p(y)
  [3, s, prof, q0, q1, q2, q3, deg, ...] shear in y by s * p(x)
  [4, t, prof, q0, q1, q2, q3, ...]      vertical flow for time t

Profile codes: 0 sin2, 1 triangle, 2 bump(a, b), 3 plateau(l0, l1, r1,
r0), 4 coordinate, 5 ramp(lo, hi).  Coordinates are reduced mod 1
before profile evaluation, matching the numpy backend.
"""

from libc.math cimport cos, fabs, floor, sin

cdef double PI = 3.141592653589793

cdef double GUARD = 1e15


cdef inline double profile_val(int code, double u,
                               double q0, double q1,
                               double q2, double q3) nogil:
    cdef double s, v
    if code == 0:
        s = sin(PI * u)
        return s * s
    if code == 1:
        return 1.0 - fabs(2.0 * u - 1.0)
    if code == 2:
        if u < q0 or u > q1:
            return 0.0
        v = (u - q0) / (q1 - q0)
        return 0.5 * (1.0 - cos(2.0 * PI * v))
    if code == 3:
        if u <= q0 or u >= q3:
            return 0.0
        if u < q1:
            v = (u - q0) / (q1 - q0)
            return 0.5 * (1.0 - cos(PI * v))
        if u <= q2:
            return 1.0
        v = (u - q2) / (q3 - q2)
        return 0.5 * (1.0 + cos(PI * v))
    if code == 4:
        return u
    if code == 5:
        if u <= q0:
            return 0.0
        if u >= q1:
            return 1.0
        v = (u - q0) / (q1 - q0)
        return 0.5 * (1.0 - cos(PI * v))
    return 0.0


def iterate_chain(double[:, ::1] pts, long n, double[:, ::1] table):
    """Iterate the encoded chain n times in place.

    Returns 0 on success, 1 if any coordinate exceeded the overflow
    guard.
    """
    cdef Py_ssize_t npts = pts.shape[0]
    cdef Py_ssize_t nprim = table.shape[0]
    cdef Py_ssize_t i, j
    cdef long step
    cdef int kind, code
    cdef double x, y, fl, disp, a, b, c, d, xx
    cdef int diverged = 0

    with nogil:
        for i in range(npts):
            x = pts[i, 0]
            y = pts[i, 1]
            for step in range(n):
                for j in range(nprim):
                    kind = <int> table[j, 0]
                    if kind == 0:
                        x += table[j, 1]
                        y += table[j, 2]
                    elif kind == 1:
                        a = table[j, 1]
                        b = table[j, 2]
                        c = table[j, 3]
                        d = table[j, 4]
                        xx = a * x + b * y
                        y = c * x + d * y
                        x = xx
                    elif kind == 2:
                        fl = floor(y)
                        code = <int> table[j, 2]
                        disp = profile_val(code, y - fl, table[j, 3],
                                           table[j, 4], table[j, 5],
                                           table[j, 6])
                        if table[j, 7] != 0.0:
                            disp += fl
                        x += table[j, 1] * disp
                    elif kind == 3:
                        fl = floor(x)
                        code = <int> table[j, 2]
                        disp = profile_val(code, x - fl, table[j, 3],
                                           table[j, 4], table[j, 5],
                                           table[j, 6])
                        if table[j, 7] != 0.0:
                            disp += fl
                        y += table[j, 1] * disp
                    else:
                        fl = floor(x)
                        code = <int> table[j, 2]
                        y += table[j, 1] * profile_val(code, x - fl,
                                                       table[j, 3],
                                                       table[j, 4],
                                                       table[j, 5],
                                                       table[j, 6])
                if fabs(x) > GUARD or fabs(y) > GUARD:
                    diverged = 1
                    break
            pts[i, 0] = x
            pts[i, 1] = y
            if diverged:
                break
    return diverged
