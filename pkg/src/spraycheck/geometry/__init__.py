"""Algebroid, prolongation, connection, derivation, curvature and symmetry layers."""
from spraycheck.geometry.algebroid import (
    AlgebroidStructure,
    BaseSection,
    PullbackSection,
    check_structure_equations,
)
from spraycheck.geometry.connection import BerwaldConnection, Spray, berwald_from_spray
from spraycheck.geometry.curvature import TENSORS, CurvatureSuite
from spraycheck.geometry.derivation import TensorField, lie_derivation
from spraycheck.geometry.prolong import ProlongSection, prolong_bracket
from spraycheck.geometry.symmetry import (
    SymmetryReport,
    collineation_check,
    lie_symmetry_residual,
)

__all__ = [
    "AlgebroidStructure",
    "BaseSection",
    "PullbackSection",
    "check_structure_equations",
    "BerwaldConnection",
    "Spray",
    "berwald_from_spray",
    "TENSORS",
    "CurvatureSuite",
    "TensorField",
    "lie_derivation",
    "ProlongSection",
    "prolong_bracket",
    "SymmetryReport",
    "collineation_check",
    "lie_symmetry_residual",
]
