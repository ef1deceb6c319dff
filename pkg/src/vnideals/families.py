"""Consistent and invariant families of projections.

A family assigns to each commutative subalgebra ``V`` a projection in ``V``.
Only evaluable families are representable: the family induced by a
projection (largest projection of ``V`` under ``p``), the same for a
central projection, and finite tables for hand-built counterexamples.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import linalg
from .algebra import (
    BlockAlgebra,
    BlockElement,
    CentralProjection,
    ProjectionElement,
    is_central,
    rank_vector,
    unitary_conjugate,
)
from .commutative import (
    MATCH_TOL,
    CommutativeSubalgebra,
    center,
    coarsen,
    conjugate_subalgebra,
    generate,
    includes,
    largest_projection_below,
    same_subalgebra,
    trivial,
)
from .errors import EvaluationDomainError, IntegrityError, PreconditionError
from .linalg import DEFAULT_TOL, Tolerance

CHECK_TOL = 1e-7
WITNESS_GAP = 1e-4


class FamilyRule:
    algebra: BlockAlgebra

    def evaluate(self, V: CommutativeSubalgebra, tol: Tolerance = DEFAULT_TOL) -> ProjectionElement:
        raise NotImplementedError


@dataclass(frozen=True)
class FromProjection(FamilyRule):
    p: ProjectionElement

    @property
    def algebra(self):
        return self.p.algebra

    def evaluate(self, V, tol=DEFAULT_TOL):
        return largest_projection_below(V, self.p, tol)


@dataclass(frozen=True)
class FromCentral(FamilyRule):
    z: CentralProjection

    @property
    def algebra(self):
        return self.z.algebra

    def evaluate(self, V, tol=DEFAULT_TOL):
        return largest_projection_below(V, self.z.element(), tol)


class Table(FamilyRule):
    """Finite family; keys are compared as subalgebras, not by identity."""

    def __init__(self, entries: Sequence[tuple[CommutativeSubalgebra, BlockElement]]):
        if not entries:
            raise ValueError("empty table")
        self.algebra = entries[0][0].algebra
        self.entries = []
        for k, (V, value) in enumerate(entries):
            value = ProjectionElement.of(value)
            if largest_projection_below(V, value).dist(value) > MATCH_TOL:
                raise PreconditionError(f"table entry {k}: value is not a projection of its subalgebra")
            self.entries.append((V, value))

    def evaluate(self, V, tol=DEFAULT_TOL):
        for key, value in self.entries:
            if same_subalgebra(key, V, tol):
                return value
        raise EvaluationDomainError("subalgebra is not a key of the table")


def evaluate(rule: FamilyRule, V: CommutativeSubalgebra, tol: Tolerance = DEFAULT_TOL) -> ProjectionElement:
    return rule.evaluate(V, tol)


@dataclass
class CheckReport:
    kind: str
    verdict: str
    trials: int
    max_distance: float
    counterexample: dict[str, Any] | None = None
    info: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def _finish(kind, trials, worst, first_fail, info=None):
    return CheckReport(kind, "fail" if first_fail else "pass", trials, worst, first_fail, info or {})


def check_consistency(rule: FamilyRule, chains, tol: Tolerance = DEFAULT_TOL) -> CheckReport:
    """``Pi(V)`` must be the largest projection of ``V`` under ``Pi(V')`` for each ``V <= V'``."""
    worst, first_fail, n = 0.0, None, 0
    for n, (V, W) in enumerate(chains, 1):
        if not includes(V, W, tol):
            raise PreconditionError(f"chain {n - 1} is not an inclusion")
        lhs = rule.evaluate(V, tol)
        rhs = largest_projection_below(V, rule.evaluate(W, tol), tol)
        d = lhs.dist(rhs)
        worst = max(worst, d)
        if d > CHECK_TOL and first_fail is None:
            first_fail = {"trial": n - 1, "V": V, "V_prime": W, "lhs": lhs, "rhs": rhs, "distance": d}
    return _finish("consistency", n, worst, first_fail)


def check_invariance(rule: FamilyRule, samples, tol: Tolerance = DEFAULT_TOL) -> CheckReport:
    """``Pi(u V u^*)`` must equal ``u Pi(V) u^*``."""
    worst, first_fail, n = 0.0, None, 0
    for n, (V, u) in enumerate(samples, 1):
        lhs = rule.evaluate(conjugate_subalgebra(V, u), tol)
        rhs = unitary_conjugate(rule.evaluate(V, tol), u)
        d = lhs.dist(rhs)
        worst = max(worst, d)
        if d > CHECK_TOL and first_fail is None:
            first_fail = {"trial": n - 1, "V": V, "u": u, "lhs": lhs, "rhs": rhs, "distance": d}
    return _finish("invariance", n, worst, first_fail)


def center_value(rule: FamilyRule, tol: Tolerance = DEFAULT_TOL) -> CentralProjection:
    """The family's value at the center, as a mask."""
    value = rule.evaluate(center(rule.algebra), tol)
    mask = []
    for k, b in enumerate(value.blocks):
        if linalg.max_norm(b) <= CHECK_TOL:
            mask.append(False)
        elif linalg.max_norm(b - np.eye(len(b))) <= CHECK_TOL:
            mask.append(True)
        else:
            raise IntegrityError(f"value at the center is not central (block {k})")
    return CentralProjection(rule.algebra, tuple(mask))


def default_chains(subalgebras: Sequence[CommutativeSubalgebra], seed: int = 0):
    """Inclusions derived from sampled subalgebras: scalars, center and a coarsening below each."""
    chains = []
    for i, V in enumerate(subalgebras):
        chains.append((trivial(V.algebra), V))
        if V.contains_center:
            chains.append((center(V.algebra), V))
        chains.append((coarsen(V, linalg.derive_seed(seed, i)), V))
    return chains


def verify_theorem(rule: FamilyRule, subalgebras: Sequence[CommutativeSubalgebra],
                   unitaries: Sequence[BlockElement], tol: Tolerance = DEFAULT_TOL,
                   chains=None) -> CheckReport:
    """Check that an invariant family equals the family of its center value.

    Raises :class:`PreconditionError` (carrying the failed report) when the
    rule is not consistent or not invariant on the samples.
    """
    if chains is None:
        chains = default_chains(subalgebras)
    report = check_consistency(rule, chains, tol)
    if not report.passed:
        raise PreconditionError("family is not consistent on the samples", report)
    samples = [(V, unitaries[i % len(unitaries)]) for i, V in enumerate(subalgebras)] if unitaries else []
    report = check_invariance(rule, samples, tol)
    if not report.passed:
        raise PreconditionError("family is not invariant on the samples", report)
    z = center_value(rule, tol)
    reference = FromCentral(z)
    worst, first_fail, n = 0.0, None, 0
    for n, V in enumerate(subalgebras, 1):
        lhs, rhs = rule.evaluate(V, tol), reference.evaluate(V, tol)
        d = lhs.dist(rhs)
        worst = max(worst, d)
        if d > CHECK_TOL and first_fail is None:
            first_fail = {"trial": n - 1, "V": V, "lhs": lhs, "rhs": rhs, "distance": d}
    return _finish("theorem", n, worst, first_fail, {"center": z})


@dataclass(frozen=True)
class ViolationWitness:
    """``lhs = Pi_p(u V u^*)`` differs from ``rhs = u Pi_p(V) u^*`` by ``gap``."""

    p: ProjectionElement
    V: CommutativeSubalgebra
    u: BlockElement
    lhs: ProjectionElement
    rhs: ProjectionElement
    gap: float
    method: str = "swap"

    def recheck(self, tol: Tolerance = DEFAULT_TOL) -> float:
        """Recompute the gap from ``(p, V, u)`` alone."""
        rule = FromProjection(self.p)
        lhs = rule.evaluate(conjugate_subalgebra(self.V, self.u), tol)
        rhs = unitary_conjugate(rule.evaluate(self.V, tol), self.u)
        return lhs.dist(rhs)


def _gap(rule, V, u, tol):
    lhs = rule.evaluate(conjugate_subalgebra(V, u), tol)
    rhs = unitary_conjugate(rule.evaluate(V, tol), u)
    return lhs, rhs, lhs.dist(rhs)


def find_invariance_violation(p: ProjectionElement, tol: Tolerance = DEFAULT_TOL,
                              seed: int = 0, max_trials: int = 1000) -> ViolationWitness:
    """Exhibit ``(V, u)`` on which the family of a non-central ``p`` is not invariant.

    ``V`` is generated by ``p`` and the center, so the family takes the value
    ``p`` there; ``u`` swaps a unit vector of ``range(p_k)`` with one of
    ``ker(p_k)`` in a block where ``p`` is neither 0 nor 1, so ``u p u^*``
    is not under ``p`` while the family's value at ``u V u^*`` is.
    """
    p = ProjectionElement.of(p, tol)
    if is_central(p, tol):
        raise PreconditionError("p is central; its family is invariant")
    alg = p.algebra
    ranks = rank_vector(p, tol)
    k = next(i for i, (r, n) in enumerate(zip(ranks, alg.dims)) if 0 < r < n)
    rng, ker = linalg.projection_bases(p.blocks[k])
    xi, eta = rng[:, :1], ker[:, :1]
    swap = (np.eye(alg.dims[k]) - xi @ linalg.adjoint(xi) - eta @ linalg.adjoint(eta)
            + xi @ linalg.adjoint(eta) + eta @ linalg.adjoint(xi))
    u = BlockElement(alg, [swap if i == k else np.eye(n) for i, n in enumerate(alg.dims)])
    V = generate([p], alg, with_center=True, tol=tol)
    rule = FromProjection(p)
    lhs, rhs, gap = _gap(rule, V, u, tol)
    if gap >= WITNESS_GAP:
        return ViolationWitness(p, V, u, lhs, rhs, gap, "swap")
    for t in range(max_trials):
        u = alg.random_unitary(linalg.derive_seed(seed, t))
        lhs, rhs, gap = _gap(rule, V, u, tol)
        if gap >= WITNESS_GAP:
            return ViolationWitness(p, V, u, lhs, rhs, gap, "random")
    raise IntegrityError(f"no violation with gap >= {WITNESS_GAP} found for a non-central projection")
