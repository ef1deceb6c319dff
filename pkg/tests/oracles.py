"""Independent reference computations for the tests.

Everything here works on dense numpy matrices with numpy/LAPACK routines
or exhaustive enumeration; nothing calls into vnideals' kernels.
"""
import itertools

import numpy as np


def dense_blocks(blocks):
    n = sum(len(b) for b in blocks)
    out = np.zeros((n, n), dtype=complex)
    o = 0
    for b in blocks:
        k = len(b)
        out[o:o + k, o:o + k] = b
        o += k
    return out


def mask_matrix(dims, mask):
    return np.diag(np.concatenate([np.full(n, float(m)) for n, m in zip(dims, mask)])).astype(complex)


def svd_rank(m, rtol=1e-8):
    s = np.linalg.svd(np.asarray(m), compute_uv=False)
    return int(np.sum(s > rtol * max(1.0, s.max() if s.size else 0.0)))


def below(e, p, atol=1e-7):
    """Range inclusion e <= p for dense projections."""
    return np.max(np.abs(p @ e - e)) <= atol


def largest_projection_below_bruteforce(atoms, p):
    """Sup over all 2^m projections of the atom algebra that lie under p."""
    m = len(atoms)
    n = len(atoms[0])
    best = np.zeros((n, n), dtype=complex)
    for bits in itertools.product((0, 1), repeat=m):
        proj = sum((a for a, b in zip(atoms, bits) if b), np.zeros((n, n), dtype=complex))
        if below(proj, p):
            # the qualifying projections are closed under joins; keep the join
            best = best + proj - best @ proj
    return best


def partial_orth_masks_bruteforce(dims, p, q, atol=1e-7):
    """All masks z (orthogonal side) satisfying the definition, on dense matrices."""
    found = []
    n = sum(dims)
    for mask in itertools.product((False, True), repeat=len(dims)):
        z = mask_matrix(dims, mask)
        zc = np.eye(n) - z
        if np.max(np.abs((z @ p) @ (z @ q))) <= atol and np.max(np.abs(zc @ p - zc @ q)) <= atol:
            found.append(mask)
    return found


def haar_like_unitary(n, rng):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))
