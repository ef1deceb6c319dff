"""Commutative subalgebras, their ideals, and partial ideals.

A commutative unital subalgebra of a finite-dimensional algebra is the
span of its atoms: minimal projections, pairwise orthogonal, summing to
the identity. Every ideal of it is spanned by a subset of atoms, so ideals
are stored as atom-index sets and lattice operations are exact.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .algebra import BlockAlgebra, BlockElement, CentralProjection, ProjectionElement, unitary_conjugate
from .errors import PreconditionError
from .linalg import DEFAULT_TOL, Tolerance

# e <= p is decided by |p e - e|_max <= MATCH_TOL
MATCH_TOL = 1e-7
ATOM_TOL = 1e-8


class CommutativeSubalgebra:
    __slots__ = ("algebra", "atoms", "contains_center")

    def __init__(self, algebra: BlockAlgebra, atoms: Sequence[BlockElement], validate: bool = True):
        atoms = tuple(ProjectionElement.of(e, validate=False) for e in atoms)
        if not atoms:
            raise PreconditionError("a subalgebra needs at least one atom")
        for e in atoms:
            algebra._check(e.algebra)
        if validate:
            _check_atoms(algebra, atoms)
        self.algebra = algebra
        self.atoms = atoms
        self.contains_center = all(
            (_sum(algebra, [e for e in atoms if z.cut(e).dist(e) <= MATCH_TOL]).dist(z.element()) <= MATCH_TOL)
            for z in (algebra.minimal_central(k) for k in range(algebra.num_blocks))
        )

    def __len__(self):
        return len(self.atoms)

    def projection(self, indices) -> ProjectionElement:
        """Sum of the atoms with the given indices."""
        return _sum(self.algebra, [self.atoms[i] for i in sorted(indices)])

    def __repr__(self):
        return f"CommutativeSubalgebra(dims={list(self.algebra.dims)}, atoms={len(self)}, contains_center={self.contains_center})"


def _sum(algebra: BlockAlgebra, elements) -> ProjectionElement:
    blocks = [np.zeros((n, n), dtype=np.complex128) for n in algebra.dims]
    for e in elements:
        for b, eb in zip(blocks, e.blocks):
            b += eb
    return ProjectionElement(algebra, blocks, validate=False)


def _check_atoms(algebra, atoms):
    for i, e in enumerate(atoms):
        for j in range(i + 1, len(atoms)):
            d = (e @ atoms[j]).max_norm()
            if d > ATOM_TOL:
                raise PreconditionError(f"atoms {i} and {j} are not orthogonal ({d:.3g})")
    d = _sum(algebra, atoms).dist(algebra.identity())
    if d > ATOM_TOL:
        raise PreconditionError(f"atoms do not sum to the identity ({d:.3g})")


def _center_label(algebra: BlockAlgebra) -> np.ndarray:
    """Central element with a distinct eigenvalue per block; generates the center."""
    return algebra.element([np.eye(n) * (k + 1) for k, n in enumerate(algebra.dims)]).dense()


def generate(X: Sequence[BlockElement], algebra: BlockAlgebra | None = None, with_center: bool = True,
             tol: Tolerance = DEFAULT_TOL) -> CommutativeSubalgebra:
    """Commutative subalgebra generated by commuting normal elements ``X`` (and the center)."""
    if algebra is None:
        if not X:
            raise PreconditionError("algebra is required when X is empty")
        algebra = X[0].algebra
    for x in X:
        algebra._check(x.algebra)
    for i, x in enumerate(X):
        if not x.commutes_with(x.H, tol.eps):
            raise PreconditionError(f"generator {i} is not normal")
        for j in range(i + 1, len(X)):
            if not x.commutes_with(X[j], tol.eps):
                raise PreconditionError(f"generators {i} and {j} do not commute")
    gens = [_center_label(algebra)] if with_center else []
    gens += [x.dense() for x in X]
    bases = linalg.joint_spectral_bases(gens, algebra.size, tol)
    atoms = []
    for b in bases:
        e = b @ linalg.adjoint(b)
        e = algebra.from_dense((e + linalg.adjoint(e)) / 2)
        atoms.append(ProjectionElement.of(e, validate=False))
    return CommutativeSubalgebra(algebra, atoms)


@functools.lru_cache(maxsize=64)
def center(algebra: BlockAlgebra) -> CommutativeSubalgebra:
    """Atoms are the minimal central projections, exact by construction."""
    atoms = [algebra.minimal_central(k).element() for k in range(algebra.num_blocks)]
    return CommutativeSubalgebra(algebra, atoms, validate=False)


def trivial(algebra: BlockAlgebra) -> CommutativeSubalgebra:
    """The scalars ``C 1``."""
    return CommutativeSubalgebra(algebra, [algebra.identity()], validate=False)


def includes(V: CommutativeSubalgebra, W: CommutativeSubalgebra, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether ``V`` is a subalgebra of ``W``: every atom of ``V`` is a sum of atoms of ``W``."""
    V.algebra._check(W.algebra)
    for e in V.atoms:
        below = [f for f in W.atoms if f.leq(e, MATCH_TOL)]
        if _sum(V.algebra, below).dist(e) > MATCH_TOL:
            return False
    return True


def same_subalgebra(V: CommutativeSubalgebra, W: CommutativeSubalgebra, tol: Tolerance = DEFAULT_TOL) -> bool:
    return len(V) == len(W) and includes(V, W, tol) and includes(W, V, tol)


def conjugate_subalgebra(V: CommutativeSubalgebra, u: BlockElement) -> CommutativeSubalgebra:
    """``u V u^*``, atom by atom (order preserved)."""
    return CommutativeSubalgebra(V.algebra, [unitary_conjugate(e, u) for e in V.atoms], validate=False)


def atoms_below(V: CommutativeSubalgebra, p: BlockElement, tol: Tolerance = DEFAULT_TOL) -> frozenset[int]:
    V.algebra._check(p.algebra)
    return frozenset(i for i, e in enumerate(V.atoms) if (p @ e - e).max_norm() <= MATCH_TOL)


def largest_projection_below(V: CommutativeSubalgebra, p: BlockElement,
                             tol: Tolerance = DEFAULT_TOL) -> ProjectionElement:
    """Largest projection of ``V`` under ``p``: the sum of the atoms under ``p``."""
    return V.projection(atoms_below(V, p, tol))


@dataclass(frozen=True)
class CommutativeIdeal:
    subalgebra: CommutativeSubalgebra
    atom_subset: frozenset[int]

    def __post_init__(self):
        subset = frozenset(self.atom_subset)
        if not all(0 <= i < len(self.subalgebra) for i in subset):
            raise PreconditionError(f"atom indices {sorted(subset)} out of range")
        object.__setattr__(self, "atom_subset", subset)

    def __and__(self, other: CommutativeIdeal) -> CommutativeIdeal:
        return CommutativeIdeal(self.subalgebra, self.atom_subset & other.atom_subset)

    def __or__(self, other: CommutativeIdeal) -> CommutativeIdeal:
        return CommutativeIdeal(self.subalgebra, self.atom_subset | other.atom_subset)

    @property
    def support(self) -> ProjectionElement:
        return ideal_support(self)


def ideal_support(ideal: CommutativeIdeal) -> ProjectionElement:
    """Unit of the ideal; the ideal is ``support * V``."""
    return ideal.subalgebra.projection(ideal.atom_subset)


def total_partial_ideal(z: CentralProjection, V: CommutativeSubalgebra,
                        tol: Tolerance = DEFAULT_TOL) -> CommutativeIdeal:
    """``zA`` intersected with ``V``."""
    V.algebra._check(z.algebra)
    subset = frozenset(i for i, e in enumerate(V.atoms) if z.cut(e).dist(e) <= MATCH_TOL)
    return CommutativeIdeal(V, subset)


def one_sided_partial_ideal(p: BlockElement, side: str, V: CommutativeSubalgebra,
                            tol: Tolerance = DEFAULT_TOL) -> CommutativeIdeal:
    """``pA`` (right) or ``Ap`` (left) intersected with ``V``."""
    V.algebra._check(p.algebra)
    if side == "right":
        test = lambda e: (p @ e - e).max_norm()
    elif side == "left":
        test = lambda e: (e @ p - e).max_norm()
    else:
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    return CommutativeIdeal(V, frozenset(i for i, e in enumerate(V.atoms) if test(e) <= MATCH_TOL))


def _randint(seed: int, index: int, bound: int) -> int:
    return linalg.derive_seed(seed, index) % bound


def random_commuting_family(algebra: BlockAlgebra, seed: int, count: int = 2, levels: int = 3) -> list[BlockElement]:
    """Hermitian elements ``W diag(lambda) W^*`` sharing one random block unitary ``W``.

    Eigenvalues are drawn from ``{0, ..., levels - 1}`` so repeats are common
    and the generated subalgebra is usually not maximal abelian.
    """
    w = algebra.random_unitary(linalg.derive_seed(seed, 0))
    out = []
    k = 1
    for _ in range(count):
        blocks = []
        for wb, n in zip(w.blocks, algebra.dims):
            lam = [_randint(seed, k + i, levels) for i in range(n)]
            k += n
            blocks.append(wb @ np.diag(np.array(lam, dtype=float)) @ linalg.adjoint(wb))
        out.append(algebra.element([(b + linalg.adjoint(b)) / 2 for b in blocks]))
    return out


def random_subalgebra(algebra: BlockAlgebra, seed: int, with_center: bool = True, count: int = 2,
                      tol: Tolerance = DEFAULT_TOL) -> CommutativeSubalgebra:
    return generate(random_commuting_family(algebra, seed, count), algebra, with_center, tol)


def coarsen(V: CommutativeSubalgebra, seed: int, groups: int = 2) -> CommutativeSubalgebra:
    """Subalgebra of ``V`` obtained by merging its atoms into random groups."""
    labels = [_randint(seed, i, groups) for i in range(len(V))]
    merged = [V.projection(i for i, lab in enumerate(labels) if lab == g) for g in sorted(set(labels))]
    return CommutativeSubalgebra(V.algebra, merged, validate=False)


def random_chain(algebra: BlockAlgebra, seed: int, with_center: bool = True,
                 tol: Tolerance = DEFAULT_TOL) -> tuple[CommutativeSubalgebra, CommutativeSubalgebra]:
    """A pair ``(V, V')`` with ``V`` a subalgebra of ``V'``."""
    big = random_subalgebra(algebra, linalg.derive_seed(seed, 1), with_center, tol=tol)
    groups = 1 + _randint(seed, 2, max(1, len(big)))
    return coarsen(big, linalg.derive_seed(seed, 3), groups), big
