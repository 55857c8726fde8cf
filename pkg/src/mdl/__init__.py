"""Minimal diagrams of forall-exists frame conditions and the modal logics they define.

The main entry points are re-exported here; see the submodules for the rest.
"""

from .axioms import AxiomSpec, build_chi, build_eta, gamma_m, gamma_psi, reduced_tree
from .constructions import (
    ConstructionBundle,
    build_bundle,
    build_f_plus,
    pseudoproduct,
    refuting_valuation,
    select_edge_and_build_f_minus,
    verify_rank1,
)
from .diagram import Diagram, Frame, has_inner_cycle, is_rooted, parse_diagram, spanning_tree
from .formulas import parse_formula, render
from .minimizer import chase, classify, entails_globally, entails_locally, minimize
from .semantics import Valuation, eval, gamma_semantic, satisfies_e, valid_at

__version__ = "0.1.0"

__all__ = [
    "AxiomSpec",
    "ConstructionBundle",
    "Diagram",
    "Frame",
    "Valuation",
    "build_bundle",
    "build_chi",
    "build_eta",
    "build_f_plus",
    "chase",
    "classify",
    "entails_globally",
    "entails_locally",
    "eval",
    "gamma_m",
    "gamma_psi",
    "gamma_semantic",
    "has_inner_cycle",
    "is_rooted",
    "minimize",
    "parse_diagram",
    "parse_formula",
    "pseudoproduct",
    "reduced_tree",
    "refuting_valuation",
    "render",
    "satisfies_e",
    "select_edge_and_build_f_minus",
    "spanning_tree",
    "valid_at",
    "verify_rank1",
]
