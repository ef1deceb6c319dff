"""Dense complex matrix kernel.

Ranks, projection tests, simultaneous diagonalization of commuting normal
matrices, seeded random unitaries and projections, and unitaries matching
the ranges of two equal-rank projections. Matrices are plain
``numpy.ndarray`` of dtype ``complex128``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import PreconditionError, ShapeError

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15

# relative gap separating two eigenvalue clusters
CLUSTER_TOL = 1e-6


@dataclass(frozen=True)
class Tolerance:
    """Absolute comparison threshold ``eps`` and relative pivot threshold ``rank_eps``."""

    eps: float = 1e-9
    rank_eps: float = 1e-9

    def __post_init__(self):
        if not (self.eps > 0 and self.rank_eps > 0):
            raise ValueError("tolerances must be positive")


DEFAULT_TOL = Tolerance()


def as_cmatrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ShapeError(f"expected a nonempty 2-d matrix, got shape {a.shape}")
    return a


def _square(m) -> np.ndarray:
    a = as_cmatrix(m)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    return a


def max_norm(m) -> float:
    a = np.asarray(m)
    return float(np.abs(a).max()) if a.size else 0.0


def adjoint(m) -> np.ndarray:
    return np.conj(np.asarray(m)).T


def splitmix64_mix(x: int) -> int:
    """The splitmix64 output function applied to one 64-bit word."""
    z = (x + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, index: int) -> int:
    """Per-trial seed; depends only on ``(master_seed, index)``."""
    return splitmix64_mix((int(master_seed) & _MASK64) ^ splitmix64_mix(int(index) & _MASK64))


def numerical_rank(m, tol: Tolerance = DEFAULT_TOL) -> int:
    """Number of pivots of a partial-pivoting row reduction.

    Pivots of magnitude at most ``rank_eps * max(max|m_ij|, 1)`` count as zero.
    """
    return int(_backend.kernels.echelon_rank(as_cmatrix(m), tol.rank_eps))


def is_projection(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    a = _square(m)
    return max_norm(a - adjoint(a)) <= tol.eps and max_norm(a @ a - a) <= tol.eps


def eigh(a):
    """Hermitian eigendecomposition by cyclic Jacobi; eigenvalues ascending."""
    a = _square(a)
    w, v, _ = _backend.kernels.jacobi_eigh(a)
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def projection_bases(p):
    """Orthonormal bases ``(range, kernel)`` of a projection, as column blocks."""
    w, v = eigh(p)
    split = int(np.searchsorted(w, 0.5))
    return v[:, split:], v[:, :split]


def _hermitian_parts(m, tol):
    h = (m + adjoint(m)) / 2
    k = (m - adjoint(m)) / 2j
    return [h] if max_norm(k) <= tol.eps else [h, k]


def _clusters(w, scale):
    gap = CLUSTER_TOL * max(1.0, scale)
    groups = [[0]]
    for i in range(1, len(w)):
        if w[i] - w[i - 1] > gap:
            groups.append([i])
        else:
            groups[-1].append(i)
    return groups


def joint_spectral_bases(ms, n: int, tol: Tolerance = DEFAULT_TOL):
    """Orthonormal bases of the joint eigenspaces of commuting normal matrices.

    Starts from the whole space and splits every current piece by the
    eigenspaces of each generator compressed to it; order follows the
    eigenvalue chain (real part, then imaginary part, per generator).
    """
    ms = [_square(m) for m in ms]
    for i, m in enumerate(ms):
        if m.shape != (n, n):
            raise ShapeError(f"generator {i} has shape {m.shape}, expected {(n, n)}")
        if max_norm(m @ adjoint(m) - adjoint(m) @ m) > tol.eps:
            raise PreconditionError(f"generator {i} is not normal")
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            c = max_norm(ms[i] @ ms[j] - ms[j] @ ms[i])
            if c > tol.eps:
                raise PreconditionError(f"generators {i} and {j} do not commute (|[a, b]|_max = {c:.3g})")

    pieces = [np.eye(n, dtype=np.complex128)]
    for m in ms:
        for h in _hermitian_parts(m, tol):
            scale = max_norm(h)
            refined = []
            for b in pieces:
                c = adjoint(b) @ h @ b
                c = (c + adjoint(c)) / 2
                w, y = eigh(c)
                for group in _clusters(w, scale):
                    refined.append(b @ y[:, group])
            pieces = refined
    return pieces


def joint_spectral_atoms(ms, tol: Tolerance = DEFAULT_TOL, n: int | None = None):
    """Minimal projections of the commutative algebra generated by ``ms``.

    Returns pairwise-orthogonal projections summing to the identity such
    that each input is a scalar combination of them. ``n`` is required
    only when ``ms`` is empty.
    """
    if n is None:
        if not ms:
            raise ShapeError("matrix size is needed for an empty generator list")
        n = _square(ms[0]).shape[0]
    return [b @ adjoint(b) for b in joint_spectral_bases(ms, n, tol)]


def random_unitary(n: int, seed: int) -> np.ndarray:
    """Haar-distributed unitary: Gram-Schmidt on seeded complex Gaussians."""
    if n < 1:
        raise ValueError("n must be positive")
    g = _backend.kernels.gaussian_matrix(n, int(seed) & _MASK64)
    return _backend.kernels.mgs_columns(g)


def random_projection(n: int, r: int, seed: int) -> np.ndarray:
    if not 0 <= r <= n:
        raise ValueError(f"rank {r} out of range for size {n}")
    u = random_unitary(n, seed)
    b = u[:, :r]
    p = b @ adjoint(b)
    return (p + adjoint(p)) / 2


def range_matching_unitary(p, q, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Unitary ``u`` with ``u p u^* = q`` for equal-rank projections."""
    p, q = _square(p), _square(q)
    if p.shape != q.shape:
        raise ShapeError(f"size mismatch {p.shape} vs {q.shape}")
    rp, rq = numerical_rank(p, tol), numerical_rank(q, tol)
    if rp != rq:
        raise PreconditionError(f"projections have different ranks ({rp} vs {rq})")
    range_p, ker_p = projection_bases(p)
    range_q, ker_q = projection_bases(q)
    if range_p.shape[1] != rp or range_q.shape[1] != rq:
        raise PreconditionError("inputs are not projections")
    return np.hstack([range_q, ker_q]) @ adjoint(np.hstack([range_p, ker_p]))
