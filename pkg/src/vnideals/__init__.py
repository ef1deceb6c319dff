"""Projection families, partial ideals and central projections in finite-dimensional von Neumann algebras."""
from ._backend import BACKEND, COMPILED_AVAILABLE
from .algebra import (
    BlockAlgebra,
    BlockElement,
    CentralProjection,
    ProjectionElement,
    central_carrier,
    comparison_split,
    is_central,
    mvn_compare,
    orbit_conjugator,
    rank_vector,
    unitary_conjugate,
)
from .commutative import (
    CommutativeIdeal,
    CommutativeSubalgebra,
    generate,
    includes,
    largest_projection_below,
    one_sided_partial_ideal,
    total_partial_ideal,
)
from .covering import main_lemma_cover, maximal_partially_orthogonal_family, partially_orthogonal
from .families import (
    FromCentral,
    FromProjection,
    Table,
    center_value,
    check_consistency,
    check_invariance,
    find_invariance_violation,
    verify_theorem,
)
from .linalg import Tolerance

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BlockAlgebra",
    "BlockElement",
    "center_value",
    "central_carrier",
    "CentralProjection",
    "check_consistency",
    "check_invariance",
    "CommutativeIdeal",
    "CommutativeSubalgebra",
    "comparison_split",
    "COMPILED_AVAILABLE",
    "find_invariance_violation",
    "FromCentral",
    "FromProjection",
    "generate",
    "includes",
    "is_central",
    "largest_projection_below",
    "main_lemma_cover",
    "maximal_partially_orthogonal_family",
    "mvn_compare",
    "one_sided_partial_ideal",
    "orbit_conjugator",
    "partially_orthogonal",
    "ProjectionElement",
    "rank_vector",
    "Table",
    "Tolerance",
    "total_partial_ideal",
    "unitary_conjugate",
    "verify_theorem",
]
