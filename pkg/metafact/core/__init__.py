from .models import BasisPair, FactorReport, MetaFactorization, ProjectorPair, SketchPair
from .service import (
    assemble,
    factor_report,
    meta_factorize,
    mixing_matrix,
    penrose_condition,
    penrose_general_solution,
    projector_defect,
    reconstruct,
    solve_projector_equation,
    solve_vector_equation,
    verify_idempotent,
)

__all__ = [
    "BasisPair",
    "FactorReport",
    "MetaFactorization",
    "ProjectorPair",
    "SketchPair",
    "assemble",
    "factor_report",
    "meta_factorize",
    "mixing_matrix",
    "penrose_condition",
    "penrose_general_solution",
    "projector_defect",
    "reconstruct",
    "solve_projector_equation",
    "solve_vector_equation",
    "verify_idempotent",
]
