"""JSON interchange.

complex: ``[re, im]``; matrix: ``{"rows", "cols", "data"}`` with ``data`` the
row-major list of complex pairs; element: ``{"dims", "blocks"}``; central
projection: ``{"mask"}``; subalgebra: ``{"atoms", "contains_center"}``.
Reports carry ``"schema_version": 1``.
"""
from __future__ import annotations

import json

import numpy as np

from .algebra import BlockAlgebra, BlockElement, CentralProjection, ProjectionElement, rank_vector
from .commutative import CommutativeSubalgebra
from .covering import CoverCertificate
from .errors import ShapeError
from .families import CheckReport, ViolationWitness

SCHEMA_VERSION = 1


def complex_to_json(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def matrix_to_json(m) -> dict:
    m = np.asarray(m)
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]), "data": [complex_to_json(z) for z in m.ravel()]}


def matrix_from_json(d) -> np.ndarray:
    rows, cols, data = int(d["rows"]), int(d["cols"]), d["data"]
    if len(data) != rows * cols:
        raise ShapeError(f"matrix data has {len(data)} entries, expected {rows * cols}")
    return np.array([complex(re, im) for re, im in data], dtype=np.complex128).reshape(rows, cols)


def element_to_json(x: BlockElement) -> dict:
    return {"dims": list(x.algebra.dims), "blocks": [matrix_to_json(b) for b in x.blocks]}


def element_from_json(d, projection: bool = False) -> BlockElement:
    alg = BlockAlgebra(tuple(d["dims"]))
    blocks = [matrix_from_json(b) for b in d["blocks"]]
    return ProjectionElement(alg, blocks) if projection else BlockElement(alg, blocks)


def central_to_json(z: CentralProjection) -> dict:
    return {"mask": list(z.mask)}


def central_from_json(d, algebra: BlockAlgebra) -> CentralProjection:
    return CentralProjection(algebra, tuple(bool(b) for b in d["mask"]))


def subalgebra_to_json(V: CommutativeSubalgebra) -> dict:
    return {"atoms": [element_to_json(e) for e in V.atoms], "contains_center": V.contains_center}


def subalgebra_from_json(d) -> CommutativeSubalgebra:
    atoms = [element_from_json(a) for a in d["atoms"]]
    if not atoms:
        raise ShapeError("subalgebra without atoms")
    return CommutativeSubalgebra(atoms[0].algebra, atoms)


def _value_to_json(v):
    if isinstance(v, CommutativeSubalgebra):
        return subalgebra_to_json(v)
    if isinstance(v, BlockElement):
        return element_to_json(v)
    if isinstance(v, CentralProjection):
        return central_to_json(v)
    if isinstance(v, dict):
        return {k: _value_to_json(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_value_to_json(x) for x in v]
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    return v


def report_to_json(r: CheckReport) -> dict:
    return {
        "kind": r.kind,
        "verdict": r.verdict,
        "trials": r.trials,
        "max_distance": float(r.max_distance),
        "counterexample": _value_to_json(r.counterexample),
        **({"info": _value_to_json(r.info)} if r.info else {}),
    }


def witness_to_json(w: ViolationWitness) -> dict:
    return {
        "p": element_to_json(w.p),
        "V": subalgebra_to_json(w.V),
        "u": element_to_json(w.u),
        "lhs": element_to_json(w.lhs),
        "rhs": element_to_json(w.rhs),
        "gap": float(w.gap),
        "method": w.method,
    }


def certificate_to_json(c: CoverCertificate) -> dict:
    return {
        "q": element_to_json(c.q),
        "M": [element_to_json(m) for m in c.M],
        "s": element_to_json(c.s),
        "s_rem": element_to_json(c.s_rem),
        "u": element_to_json(c.u),
        "pairwise_witnesses": [{"i": i, "j": j, "mask": list(w.z.mask)}
                               for (i, j), w in sorted(c.pairwise_witnesses.items())],
        "ranks": {"q": list(rank_vector(c.q)), "s": list(rank_vector(c.s)), "s_rem": list(rank_vector(c.s_rem))},
        "checks": dict(c.checks),
        "verdict": "pass" if c.passed else "fail",
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"
