"""Admissible graphs, exceptional cones and universal polynomials for nodal curve counts."""

from .cones import DomainError, ExcCone, MultiplicityVector, cone_of, enumerate_delta
from .graphs import AdmissibleGraph, AxiomError, ExcClass, check_axioms, enumerate_adm, graph_from_classes, type_I_classes
from .poly import UniversalPoly

__all__ = [
    "AdmissibleGraph",
    "AxiomError",
    "DomainError",
    "ExcClass",
    "ExcCone",
    "MultiplicityVector",
    "UniversalPoly",
    "check_axioms",
    "cone_of",
    "enumerate_adm",
    "enumerate_delta",
    "graph_from_classes",
    "type_I_classes",
]
