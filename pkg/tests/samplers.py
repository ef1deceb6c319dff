"""Random inputs shared by the module tests and the acceptance suite."""
import numpy as np

from oracles import haar_like_unitary
from vnideals.algebra import BlockAlgebra, ProjectionElement
from vnideals.linalg import derive_seed, random_projection


def commuting_normal_family(n, seed, count):
    rng = np.random.default_rng(seed)
    u = haar_like_unitary(n, rng)
    out = []
    for _ in range(count):
        lam = rng.integers(0, 3, size=n) + 1j * rng.integers(0, 2, size=n) * rng.integers(0, 2)
        out.append(u @ np.diag(lam) @ u.conj().T)
    return out


def random_pair(dims, seed):
    """Blockwise, pick one of: equal, orthogonal, both zero, generic."""
    p_blocks, q_blocks = [], []
    for k, n in enumerate(dims):
        s = derive_seed(seed, k)
        kind = s % 4
        r = (s >> 8) % (n + 1)
        a = random_projection(n, r, s)
        if kind == 0:
            b = a
        elif kind == 1:
            b = np.eye(n) - a
        elif kind == 2:
            a = b = np.zeros((n, n))
        else:
            b = random_projection(n, (s >> 16) % (n + 1), s ^ 0xABCDEF)
        p_blocks.append(a)
        q_blocks.append(b)
    alg = BlockAlgebra(dims)
    return ProjectionElement(alg, p_blocks, validate=False), ProjectionElement(alg, q_blocks, validate=False)
