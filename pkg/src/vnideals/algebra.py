"""The ambient algebra ``M_{n_1}(C) + ... + M_{n_K}(C)``.

Elements are stored block by block. Central projections are 0/1 masks over
blocks, so all center arithmetic is exact.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import linalg
from .errors import AlgebraMismatchError, NotUnitarilyEquivalent, PreconditionError, ShapeError
from .linalg import DEFAULT_TOL, Tolerance

UNITARY_TOL = 1e-8


@dataclass(frozen=True)
class BlockAlgebra:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"block dimensions must be a nonempty list of positive integers, got {self.dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def num_blocks(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return sum(self.dims)

    @property
    def offsets(self) -> tuple[int, ...]:
        return tuple(itertools.accumulate((0,) + self.dims[:-1]))

    def element(self, blocks) -> BlockElement:
        return BlockElement(self, blocks)

    def zero(self) -> ProjectionElement:
        return ProjectionElement(self, [np.zeros((n, n)) for n in self.dims], validate=False)

    def identity(self) -> ProjectionElement:
        return ProjectionElement(self, [np.eye(n) for n in self.dims], validate=False)

    def from_dense(self, m) -> BlockElement:
        """Diagonal blocks of an ``N x N`` matrix; off-block entries are dropped."""
        m = linalg.as_cmatrix(m)
        if m.shape != (self.size, self.size):
            raise ShapeError(f"expected shape {(self.size, self.size)}, got {m.shape}")
        return BlockElement(self, [m[o:o + n, o:o + n] for o, n in zip(self.offsets, self.dims)])

    def central(self, mask) -> CentralProjection:
        return CentralProjection(self, tuple(mask))

    def minimal_central(self, k: int) -> CentralProjection:
        return self.central(i == k for i in range(self.num_blocks))

    def central_masks(self) -> Iterator[CentralProjection]:
        """All ``2^K`` central projections, in binary counting order."""
        for bits in itertools.product((False, True), repeat=self.num_blocks):
            yield self.central(bits)

    def random_unitary(self, seed: int) -> BlockElement:
        return BlockElement(self, [linalg.random_unitary(n, linalg.derive_seed(seed, k))
                                   for k, n in enumerate(self.dims)])

    def random_projection(self, ranks: Sequence[int], seed: int) -> ProjectionElement:
        if len(ranks) != self.num_blocks:
            raise ShapeError(f"rank vector {list(ranks)} does not match dims {list(self.dims)}")
        return ProjectionElement(self, [linalg.random_projection(n, r, linalg.derive_seed(seed, k))
                                        for k, (n, r) in enumerate(zip(self.dims, ranks))], validate=False)

    def _check(self, other: BlockAlgebra):
        if other != self:
            raise AlgebraMismatchError(f"dims {list(other.dims)} differ from {list(self.dims)}")


class BlockElement:
    """Block-diagonal complex matrix; immutable."""

    __slots__ = ("algebra", "blocks")

    def __init__(self, algebra: BlockAlgebra, blocks):
        blocks = [np.array(b, dtype=np.complex128) for b in blocks]
        if len(blocks) != algebra.num_blocks:
            raise ShapeError(f"{len(blocks)} blocks given for {algebra.num_blocks}-block algebra")
        for k, (b, n) in enumerate(zip(blocks, algebra.dims)):
            if b.shape != (n, n):
                raise ShapeError(f"block {k} has shape {b.shape}, expected {(n, n)}")
            b.flags.writeable = False
        self.algebra = algebra
        self.blocks = tuple(blocks)

    def _same(self, other):
        if not isinstance(other, BlockElement):
            return NotImplemented
        self.algebra._check(other.algebra)
        return other

    def __add__(self, other):
        if self._same(other) is NotImplemented:
            return NotImplemented
        return BlockElement(self.algebra, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other):
        if self._same(other) is NotImplemented:
            return NotImplemented
        return BlockElement(self.algebra, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __matmul__(self, other):
        if self._same(other) is NotImplemented:
            return NotImplemented
        return BlockElement(self.algebra, [a @ b for a, b in zip(self.blocks, other.blocks)])

    def __mul__(self, c):
        if isinstance(c, BlockElement):
            return NotImplemented
        return BlockElement(self.algebra, [c * b for b in self.blocks])

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    @property
    def H(self) -> BlockElement:
        return BlockElement(self.algebra, [linalg.adjoint(b) for b in self.blocks])

    def dense(self) -> np.ndarray:
        out = np.zeros((self.algebra.size,) * 2, dtype=np.complex128)
        for o, n, b in zip(self.algebra.offsets, self.algebra.dims, self.blocks):
            out[o:o + n, o:o + n] = b
        return out

    def max_norm(self) -> float:
        return max(linalg.max_norm(b) for b in self.blocks)

    def dist(self, other: BlockElement) -> float:
        return (self - other).max_norm()

    def is_projection(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        return all(linalg.is_projection(b, tol) for b in self.blocks)

    def is_unitary(self, atol: float = UNITARY_TOL) -> bool:
        return all(linalg.max_norm(linalg.adjoint(b) @ b - np.eye(len(b))) <= atol for b in self.blocks)

    def commutes_with(self, other: BlockElement, atol: float) -> bool:
        return (self @ other - other @ self).max_norm() <= atol

    def __repr__(self):
        return f"{type(self).__name__}(dims={list(self.algebra.dims)}, norm={self.max_norm():.3g})"


class ProjectionElement(BlockElement):
    """Block element whose blocks are all self-adjoint idempotents."""

    __slots__ = ()

    def __init__(self, algebra: BlockAlgebra, blocks, tol: Tolerance = DEFAULT_TOL, validate: bool = True):
        super().__init__(algebra, blocks)
        if validate:
            for k, b in enumerate(self.blocks):
                if not linalg.is_projection(b, tol):
                    raise PreconditionError(f"block {k} is not a projection")

    @classmethod
    def of(cls, x: BlockElement, tol: Tolerance = DEFAULT_TOL, validate: bool = True) -> ProjectionElement:
        if isinstance(x, ProjectionElement):
            return x
        return cls(x.algebra, x.blocks, tol, validate)

    @property
    def complement(self) -> ProjectionElement:
        return ProjectionElement(self.algebra, [np.eye(len(b)) - b for b in self.blocks], validate=False)

    def leq(self, other: BlockElement, atol: float = 1e-7) -> bool:
        """Range inclusion ``self <= other``, tested as ``|other self - self| <= atol``."""
        return (other @ self - self).max_norm() <= atol


@dataclass(frozen=True)
class CentralProjection:
    """``(mask_k * I_{n_k})_k``."""

    algebra: BlockAlgebra
    mask: tuple[bool, ...]

    def __post_init__(self):
        mask = tuple(bool(b) for b in self.mask)
        if len(mask) != self.algebra.num_blocks:
            raise ShapeError(f"mask of length {len(mask)} for {self.algebra.num_blocks} blocks")
        object.__setattr__(self, "mask", mask)

    def element(self) -> ProjectionElement:
        return ProjectionElement(self.algebra, [np.eye(n) * m for n, m in zip(self.algebra.dims, self.mask)],
                                 validate=False)

    def cut(self, x: BlockElement) -> BlockElement:
        """``z x``, computed by zeroing the blocks outside the mask."""
        self.algebra._check(x.algebra)
        blocks = [b if m else np.zeros_like(b) for b, m in zip(x.blocks, self.mask)]
        if isinstance(x, ProjectionElement):
            return ProjectionElement(x.algebra, blocks, validate=False)
        return BlockElement(x.algebra, blocks)

    def __invert__(self) -> CentralProjection:
        return CentralProjection(self.algebra, tuple(not m for m in self.mask))

    def __and__(self, other: CentralProjection) -> CentralProjection:
        self.algebra._check(other.algebra)
        return CentralProjection(self.algebra, tuple(a and b for a, b in zip(self.mask, other.mask)))

    def __or__(self, other: CentralProjection) -> CentralProjection:
        self.algebra._check(other.algebra)
        return CentralProjection(self.algebra, tuple(a or b for a, b in zip(self.mask, other.mask)))

    def __le__(self, other: CentralProjection) -> bool:
        return all(b or not a for a, b in zip(self.mask, other.mask))

    @property
    def bits(self) -> list[int]:
        return [int(m) for m in self.mask]


def rank_vector(p: BlockElement, tol: Tolerance = DEFAULT_TOL) -> tuple[int, ...]:
    return tuple(linalg.numerical_rank(b, tol) for b in p.blocks)


def central_carrier(q: BlockElement, tol: Tolerance = DEFAULT_TOL) -> CentralProjection:
    """Least central projection ``z`` with ``z q = q``: the blocks where ``q`` is nonzero."""
    return CentralProjection(q.algebra, tuple(r > 0 for r in rank_vector(q, tol)))


def is_central(p: BlockElement, tol: Tolerance = DEFAULT_TOL) -> bool:
    for b in p.blocks:
        if linalg.max_norm(b) > tol.eps and linalg.max_norm(b - np.eye(len(b))) > tol.eps:
            return False
    return True


@dataclass(frozen=True)
class Comparison:
    """Blockwise ``sign(rank p_k - rank q_k)``."""

    signs: tuple[int, ...]

    @property
    def leq(self) -> bool:
        return all(s <= 0 for s in self.signs)

    @property
    def geq(self) -> bool:
        return all(s >= 0 for s in self.signs)

    @property
    def equivalent(self) -> bool:
        return self.leq and self.geq

    @property
    def verdict(self) -> str:
        if self.equivalent:
            return "equivalent"
        if self.leq:
            return "below"
        if self.geq:
            return "above"
        return "incomparable"


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def mvn_compare(p: BlockElement, q: BlockElement, tol: Tolerance = DEFAULT_TOL) -> Comparison:
    """Murray-von Neumann comparison, which in finite dimension is blockwise rank comparison."""
    p.algebra._check(q.algebra)
    return Comparison(tuple(_sign(a - b) for a, b in zip(rank_vector(p, tol), rank_vector(q, tol))))


def comparison_split(p: BlockElement, q: BlockElement, tol: Tolerance = DEFAULT_TOL) -> CentralProjection:
    """Central ``z`` with ``z p >= z q`` and ``z^perp p < z^perp q`` strictly on each block of ``z^perp``."""
    p.algebra._check(q.algebra)
    return CentralProjection(p.algebra, tuple(a >= b for a, b in zip(rank_vector(p, tol), rank_vector(q, tol))))


def unitary_conjugate(x: BlockElement, u: BlockElement) -> BlockElement:
    x.algebra._check(u.algebra)
    if not u.is_unitary():
        raise PreconditionError("conjugating element is not unitary")
    blocks = [ub @ xb @ linalg.adjoint(ub) for ub, xb in zip(u.blocks, x.blocks)]
    if isinstance(x, ProjectionElement):
        blocks = [(b + linalg.adjoint(b)) / 2 for b in blocks]
        return ProjectionElement(x.algebra, blocks, validate=False)
    return BlockElement(x.algebra, blocks)


def orbit_conjugator(p: BlockElement, q: BlockElement, tol: Tolerance = DEFAULT_TOL) -> BlockElement:
    """Block unitary ``u`` with ``u p u^* = q``."""
    p.algebra._check(q.algebra)
    rp, rq = rank_vector(p, tol), rank_vector(q, tol)
    if rp != rq:
        raise NotUnitarilyEquivalent(f"rank vectors differ: {list(rp)} vs {list(rq)}")
    return BlockElement(p.algebra, [linalg.range_matching_unitary(a, b, tol) for a, b in zip(p.blocks, q.blocks)])
