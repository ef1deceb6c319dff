# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for :mod:`vnideals.linalg`.

Every function here has a line-for-line twin in ``_kernels_py`` with the
same signature; ``_backend`` picks one at import.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log, cos, sin, fabs, hypot
from libc.stdint cimport uint64_t

cnp.import_array()

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t MIX1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t MIX2 = 0x94D049BB133111EBULL
cdef double TWO_PI = 6.283185307179586
cdef double INV_2_53 = 1.1102230246251565e-16


cdef inline double cabs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline double cmod(double complex z) nogil:
    # hypot, not sqrt(re^2 + im^2): the squares underflow for tiny entries and
    # the resulting phase would not have modulus one
    return hypot(z.real, z.imag)


cdef inline double complex cconj(double complex z) nogil:
    return z.real - 1j * z.imag


def jacobi_eigh(a_in, double tol=1e-14, int max_sweeps=100):
    """Cyclic Jacobi eigendecomposition of a Hermitian matrix.

    Returns ``(w, v, sweeps)`` with ``a = v @ diag(w) @ v^*``; eigenvalues
    are not sorted.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] arr = np.array(a_in, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = arr.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] varr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] a = arr
    cdef double complex[:, ::1] v = varr
    cdef Py_ssize_t i, p, q
    cdef int sweep = 0
    cdef double fro = 0.0, off, r, theta, t, c, s, app, aqq
    cdef double complex ph, phc, xp, xq

    for p in range(n):
        for q in range(n):
            fro += cabs2(a[p, q])
    fro = sqrt(fro)
    if fro == 0.0:
        return np.zeros(n), varr, 0

    while sweep < max_sweeps:
        off = 0.0
        for p in range(n):
            for q in range(n):
                if p != q:
                    off += cabs2(a[p, q])
        if sqrt(off) <= tol * fro:
            break
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = cmod(a[p, q])
                if r == 0.0:
                    continue
                ph = (a[p, q].real / r) + (a[p, q].imag / r) * 1j
                phc = cconj(ph)
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                if theta >= 0.0:
                    t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for i in range(n):
                    xp = a[i, p]
                    xq = a[i, q]
                    a[i, p] = c * xp - s * phc * xq
                    a[i, q] = s * xp + c * phc * xq
                for i in range(n):
                    xp = a[p, i]
                    xq = a[q, i]
                    a[p, i] = c * xp - s * ph * xq
                    a[q, i] = s * xp + c * ph * xq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                for i in range(n):
                    xp = v[i, p]
                    xq = v[i, q]
                    v[i, p] = c * xp - s * phc * xq
                    v[i, q] = s * xp + c * phc * xq

    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    return w, varr, sweep


def echelon_rank(m_in, double rank_eps):
    """Pivot count of a partial-pivoting row reduction."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] arr = np.array(m_in, dtype=np.complex128, order="C", copy=True)
    cdef double complex[:, ::1] m = arr
    cdef Py_ssize_t rows = arr.shape[0], cols = arr.shape[1]
    cdef Py_ssize_t i, j, col, best, row = 0
    cdef double big = 0.0, mag, thresh
    cdef double complex f, tmp

    for i in range(rows):
        for j in range(cols):
            mag = cmod(m[i, j])
            if mag > big:
                big = mag
    thresh = rank_eps * (big if big > 1.0 else 1.0)

    for col in range(cols):
        if row >= rows:
            break
        best = row
        big = cmod(m[row, col])
        for i in range(row + 1, rows):
            mag = cmod(m[i, col])
            if mag > big:
                big = mag
                best = i
        if big <= thresh:
            continue
        if best != row:
            for j in range(cols):
                tmp = m[row, j]
                m[row, j] = m[best, j]
                m[best, j] = tmp
        for i in range(row + 1, rows):
            f = m[i, col] / m[row, col]
            if f != 0:
                for j in range(col, cols):
                    m[i, j] = m[i, j] - f * m[row, j]
        row += 1
    return row


def mgs_columns(a_in):
    """Modified Gram-Schmidt on the columns; raises on a dependent column."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] arr = np.array(a_in, dtype=np.complex128, order="C", copy=True)
    cdef double complex[:, ::1] a = arr
    cdef Py_ssize_t rows = arr.shape[0], cols = arr.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double nrm
    cdef double complex dot

    for k in range(cols):
        nrm = 0.0
        for i in range(rows):
            nrm += cabs2(a[i, k])
        nrm = sqrt(nrm)
        if nrm == 0.0:
            raise ValueError(f"column {k} is linearly dependent")
        for i in range(rows):
            a[i, k] = a[i, k] / nrm
        for j in range(k + 1, cols):
            dot = 0.0
            for i in range(rows):
                dot = dot + cconj(a[i, k]) * a[i, j]
            for i in range(rows):
                a[i, j] = a[i, j] - dot * a[i, k]
    return arr


def gaussian_matrix(Py_ssize_t n, object seed):
    """``n x n`` standard complex Gaussians from a splitmix64 stream.

    Entries are filled row-major; each consumes two uniforms (Box-Muller).
    """
    cdef uint64_t state = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t z
    cdef double u1, u2, rad, ang
    cdef double scale = sqrt(0.5)
    cdef Py_ssize_t k
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] arr = np.empty((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] out = arr

    for k in range(n * n):
        state = state + GOLDEN
        z = state
        z = (z ^ (z >> 30)) * MIX1
        z = (z ^ (z >> 27)) * MIX2
        z = z ^ (z >> 31)
        u1 = <double>((z >> 11) + 1) * INV_2_53
        state = state + GOLDEN
        z = state
        z = (z ^ (z >> 30)) * MIX1
        z = (z ^ (z >> 27)) * MIX2
        z = z ^ (z >> 31)
        u2 = <double>((z >> 11) + 1) * INV_2_53
        rad = sqrt(-2.0 * log(u1)) * scale
        ang = TWO_PI * u2
        out[k // n, k % n] = rad * cos(ang) + 1j * (rad * sin(ang))
    return arr
