"""Partial orthogonality and covering a central carrier by a unitary orbit.

Two projections ``p, q`` are partially orthogonal when a central ``z``
makes ``zp`` orthogonal to ``zq`` and ``z^perp p`` equal to ``z^perp q``.
``main_lemma_cover`` packs ``floor(n_b / r_b)`` mutually orthogonal copies
of each block of ``q`` so that the union is partially orthogonal, and
picks one more conjugate ``u q u^*`` that strictly dominates what is left.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .algebra import (
    BlockElement,
    CentralProjection,
    ProjectionElement,
    central_carrier,
    rank_vector,
    unitary_conjugate,
)
from .errors import DegenerateInputError, IntegrityError, PreconditionError
from .linalg import DEFAULT_TOL, Tolerance

PO_TOL = 1e-7


@dataclass(frozen=True)
class PartialOrthWitness:
    """Central ``z``: orthogonal on ``z``, equal on ``z^perp``."""

    z: CentralProjection

    def defects(self, p: BlockElement, q: BlockElement) -> tuple[float, float]:
        """``(|(zp)(zq)|_max, |z^perp p - z^perp q|_max)``."""
        z = self.z
        return (z.cut(p) @ z.cut(q)).max_norm(), (~z).cut(p).dist((~z).cut(q))

    def holds(self, p: BlockElement, q: BlockElement, atol: float = PO_TOL) -> bool:
        return max(self.defects(p, q)) <= atol


def partially_orthogonal(p: BlockElement, q: BlockElement,
                         tol: Tolerance = DEFAULT_TOL) -> PartialOrthWitness | None:
    """Blockwise decision; ``None`` when some block is neither orthogonal nor equal.

    A block that is both (``p_k = q_k = 0``) goes to the orthogonal side.
    """
    p.algebra._check(q.algebra)
    mask = []
    for a, b in zip(p.blocks, q.blocks):
        if linalg.max_norm(a @ b) <= PO_TOL:
            mask.append(True)
        elif linalg.max_norm(a - b) <= PO_TOL:
            mask.append(False)
        else:
            return None
    return PartialOrthWitness(CentralProjection(p.algebra, tuple(mask)))


def glue_witnesses(p1: BlockElement, p2: BlockElement, z: CentralProjection,
                   y: CentralProjection, x: CentralProjection) -> PartialOrthWitness:
    """Combine witnesses for ``(z p1, z p2)`` and ``(z^perp p1, z^perp p2)``.

    Here ``y`` and ``x`` mark the *equal* parts: ``yz p1 = yz p2`` with
    ``y^perp z p1`` orthogonal to ``y^perp z p2``, and likewise ``x`` on
    ``z^perp``. The glued witness is ``y^perp z + x^perp z^perp``.
    """
    zc = ~z
    checks = [
        ("y z p1 = y z p2", (y & z).cut(p1).dist((y & z).cut(p2))),
        ("y^perp z p1 _|_ y^perp z p2", ((~y & z).cut(p1) @ (~y & z).cut(p2)).max_norm()),
        ("x z^perp p1 = x z^perp p2", (x & zc).cut(p1).dist((x & zc).cut(p2))),
        ("x^perp z^perp p1 _|_ x^perp z^perp p2", ((~x & zc).cut(p1) @ (~x & zc).cut(p2)).max_norm()),
    ]
    for name, defect in checks:
        if defect > PO_TOL:
            raise PreconditionError(f"witness identity fails: {name} (defect {defect:.3g})")
    glued = PartialOrthWitness((~y & z) | (~x & zc))
    if not glued.holds(p1, p2):
        raise IntegrityError("glued witness does not certify partial orthogonality")
    return glued


@dataclass(frozen=True)
class Packing:
    """Per-block data of the orbit packing of ``q``."""

    ranks: tuple[int, ...]
    copies: tuple[int, ...]          # t_b = n_b // r_b, 0 on zero blocks
    bases: tuple[np.ndarray | None, ...]  # ordered orthonormal basis of C^{n_b}, range(q_b) first

    @property
    def size(self) -> int:
        return max(self.copies)


def _packing(q: ProjectionElement, tol: Tolerance) -> Packing:
    ranks = rank_vector(q, tol)
    if not any(ranks):
        raise DegenerateInputError("q = 0: the remainder bound cannot be strict")
    bases, copies = [], []
    for b, n, r in zip(q.blocks, q.algebra.dims, ranks):
        if r == 0:
            bases.append(None)
            copies.append(0)
            continue
        rng, ker = linalg.projection_bases(b)
        if rng.shape[1] != r:
            raise IntegrityError(f"rank {r} disagrees with spectral rank {rng.shape[1]}")
        bases.append(np.hstack([rng, ker]))
        copies.append(n // r)
    return Packing(ranks, tuple(copies), tuple(bases))


def _span(basis: np.ndarray, cols) -> np.ndarray:
    b = basis[:, cols]
    p = b @ linalg.adjoint(b)
    return (p + linalg.adjoint(p)) / 2


def maximal_partially_orthogonal_family(q: ProjectionElement, tol: Tolerance = DEFAULT_TOL) -> list[ProjectionElement]:
    """``m_0 = q, m_1, ..., m_{T-1}`` in the unitary orbit of ``q``, pairwise partially orthogonal.

    Block ``b`` of ``m_i`` is the ``(i mod t_b)``-th of ``t_b`` mutually
    orthogonal rank-``r_b`` projections, the zeroth being ``q_b`` itself.
    """
    q = ProjectionElement.of(q, tol)
    pk = _packing(q, tol)
    family = []
    for i in range(pk.size):
        blocks = []
        for b, r, t, basis in zip(q.blocks, pk.ranks, pk.copies, pk.bases):
            j = i % t if t else 0
            if r == 0:
                blocks.append(np.zeros_like(b))
            elif j == 0:
                blocks.append(b)
            else:
                blocks.append(_span(basis, slice(j * r, (j + 1) * r)))
        family.append(ProjectionElement(q.algebra, blocks, validate=False))
    return family


@dataclass
class CoverCertificate:
    q: ProjectionElement
    M: list[ProjectionElement]
    s: ProjectionElement
    s_rem: ProjectionElement
    u: BlockElement
    pairwise_witnesses: dict[tuple[int, int], PartialOrthWitness]
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(self.checks.values())


def main_lemma_cover(q: ProjectionElement, tol: Tolerance = DEFAULT_TOL) -> CoverCertificate:
    """Cover ``C(q)`` by a commuting subset ``M`` of the orbit of ``q`` plus one conjugate.

    ``s = sup M`` has rank ``r_b t_b`` in each block, the remainder
    ``C(q) - s`` has rank ``n_b mod r_b < r_b``, and ``u`` maps
    ``range(q_b)`` onto a rank-``r_b`` subspace containing the remainder.
    """
    q = ProjectionElement.of(q, tol)
    pk = _packing(q, tol)
    M = maximal_partially_orthogonal_family(q, tol)
    alg = q.algebra
    s_blocks, rem_blocks, u_blocks = [], [], []
    for b, n, r, t, basis in zip(q.blocks, alg.dims, pk.ranks, pk.copies, pk.bases):
        if r == 0:
            s_blocks.append(np.zeros((n, n)))
            rem_blocks.append(np.zeros((n, n)))
            u_blocks.append(np.eye(n))
            continue
        covered = r * t
        s_blocks.append(_span(basis, slice(0, covered)))
        rem_blocks.append(_span(basis, slice(covered, n)))
        # remainder plus enough covered directions to reach rank r
        target = _span(basis, list(range(covered, n)) + list(range(r - (n - covered))))
        u_blocks.append(linalg.range_matching_unitary(b, target, tol))
    cert = CoverCertificate(
        q=q,
        M=M,
        s=ProjectionElement(alg, s_blocks, validate=False),
        s_rem=ProjectionElement(alg, rem_blocks, validate=False),
        u=BlockElement(alg, u_blocks),
        pairwise_witnesses={},
    )
    for i, j in itertools.combinations(range(len(M)), 2):
        w = partially_orthogonal(M[i], M[j], tol)
        if w is not None:
            cert.pairwise_witnesses[(i, j)] = w
    cert.checks = validate_certificate(cert, tol)
    return cert


def validate_certificate(cert: CoverCertificate, tol: Tolerance = DEFAULT_TOL) -> dict[str, bool]:
    """Re-derive every claim of the certificate from its matrices."""
    q, M, s, s_rem, u = cert.q, cert.M, cert.s, cert.s_rem, cert.u
    alg = q.algebra
    rq = rank_vector(q, tol)
    carrier = central_carrier(q, tol)
    pairs = list(itertools.combinations(range(len(M)), 2))
    uqu = unitary_conjugate(q, u)
    rem_ranks = rank_vector(s_rem, tol)
    expected_s = tuple(r * (n // r) if r else 0 for n, r in zip(alg.dims, rq))
    checks = {
        "q_in_M": bool(M) and M[0].dist(q) <= PO_TOL,
        "orbit_membership": all(rank_vector(m, tol) == rq for m in M),
        "pairwise_commute": all(M[i].commutes_with(M[j], PO_TOL) for i, j in pairs),
        "pairwise_witnesses": all((i, j) in cert.pairwise_witnesses
                                  and cert.pairwise_witnesses[(i, j)].holds(M[i], M[j]) for i, j in pairs),
        "s_dominates_M": all(m.leq(s, PO_TOL) for m in M),
        "s_rank": rank_vector(s, tol) == expected_s,
        "s_rem_orthogonal_to_s": (s_rem @ s).max_norm() <= PO_TOL,
        "s_plus_rem_is_carrier": (s + s_rem).dist(carrier.element()) <= PO_TOL
                                 and tuple(a + b for a, b in zip(expected_s, rem_ranks))
                                 == tuple(n if c else 0 for n, c in zip(alg.dims, carrier.mask)),
        "u_unitary": u.is_unitary(),
        "rem_below_uqu": s_rem.leq(uqu, PO_TOL),
        "rem_strictly_smaller": all(a < b for a, b, c in zip(rem_ranks, rank_vector(uqu, tol), carrier.mask) if c),
        "rem_minimal": all(a == (n % r if r else 0) for a, n, r in zip(rem_ranks, alg.dims, rq)),
    }
    return checks
