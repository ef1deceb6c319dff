"""Pure-Python twin of ``_kernels.pyx``.

Same algorithms, same signatures, same splitmix64 stream (bit-identical
Gaussians); floating-point summation order may differ from the compiled
version in the last few ulps.
"""
import math

import numpy as np

_MASK = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
_INV_2_53 = 1.0 / (1 << 53)


def jacobi_eigh(a_in, tol=1e-14, max_sweeps=100):
    a = np.array(a_in, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    fro = math.sqrt(float(np.sum(np.abs(a) ** 2)))
    if fro == 0.0:
        return np.zeros(n), v, 0

    sweep = 0
    while sweep < max_sweeps:
        off = math.sqrt(float(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2)))
        if off <= tol * fro:
            break
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = float(abs(a[p, q]))
                if r == 0.0:
                    continue
                ph = complex(a[p, q].real / r, a[p, q].imag / r)
                phc = ph.conjugate()
                theta = float(a[q, q].real - a[p, p].real) / (2.0 * r)
                if theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                xp = a[:, p].copy()
                xq = a[:, q].copy()
                a[:, p] = c * xp - s * phc * xq
                a[:, q] = s * xp + c * phc * xq
                xp = a[p, :].copy()
                xq = a[q, :].copy()
                a[p, :] = c * xp - s * ph * xq
                a[q, :] = s * xp + c * ph * xq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                xp = v[:, p].copy()
                xq = v[:, q].copy()
                v[:, p] = c * xp - s * phc * xq
                v[:, q] = s * xp + c * phc * xq
    return np.real(np.diag(a)).copy(), v, sweep


def echelon_rank(m_in, rank_eps):
    m = np.array(m_in, dtype=np.complex128, copy=True)
    rows, cols = m.shape
    big = float(np.max(np.abs(m))) if m.size else 0.0
    thresh = rank_eps * max(big, 1.0)
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        mags = np.abs(m[row:, col])
        best = row + int(np.argmax(mags))
        if mags[best - row] <= thresh:
            continue
        if best != row:
            m[[row, best]] = m[[best, row]]
        f = m[row + 1:, col] / m[row, col]
        m[row + 1:, col:] -= np.outer(f, m[row, col:])
        row += 1
    return row


def mgs_columns(a_in):
    a = np.array(a_in, dtype=np.complex128, copy=True)
    cols = a.shape[1]
    for k in range(cols):
        nrm = math.sqrt(float(np.sum(np.abs(a[:, k]) ** 2)))
        if nrm == 0.0:
            raise ValueError(f"column {k} is linearly dependent")
        a[:, k] /= nrm
        for j in range(k + 1, cols):
            a[:, j] -= np.vdot(a[:, k], a[:, j]) * a[:, k]
    return a


def _uniform(state):
    state = (state + GOLDEN) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * MIX1) & _MASK
    z = ((z ^ (z >> 27)) * MIX2) & _MASK
    z ^= z >> 31
    return state, ((z >> 11) + 1) * _INV_2_53


def gaussian_matrix(n, seed):
    state = int(seed) & _MASK
    scale = math.sqrt(0.5)
    out = np.empty((n, n), dtype=np.complex128)
    for k in range(n * n):
        state, u1 = _uniform(state)
        state, u2 = _uniform(state)
        rad = math.sqrt(-2.0 * math.log(u1)) * scale
        ang = 2.0 * math.pi * u2
        out[k // n, k % n] = complex(rad * math.cos(ang), rad * math.sin(ang))
    return out
