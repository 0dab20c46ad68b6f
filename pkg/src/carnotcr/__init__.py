"""Exact computations for CR structures on Carnot groups.

Hall bases and polynomial realizations of the free nilpotent Lie algebras
on two generators, their CR-embedding equations, and algebraic predicates
(conformal, CR, anti-CR, tight) on stratified Lie algebras.
"""
from .algebra import GradingError, StratifiedAlgebra, StructureConstants
from .embed import (Ansatz, emit_surface, lemma42_table, lemma43_table, solve_embedding,
                    step9_certificate, verify_solution)
from .exactcore import CRat, Infeasible, RatMatrix, format_rat, parse_rat, rref, solve_affine
from .hall import HallBasis, dimension, generate_hall_basis, monomial_table
from .poly import Poly, PolyRing, VField, vf_apply, vf_bracket
from .realize import (bch_coefficients, free_algebra, left_invariant_fields,
                      structure_constants)
from .stratified import (CRStructure, check_ac_structure, decompose_product_automorphism,
                         dilation, direct_sum, distortion, extend_free_automorphism, heisenberg,
                         is_anti_cr, is_conformal, is_cr, is_strata_automorphism, is_tight,
                         perm_automorphism)

__version__ = "0.1.0"

__all__ = [
    "GradingError",
    "StratifiedAlgebra",
    "StructureConstants",
    "Ansatz",
    "emit_surface",
    "lemma42_table",
    "lemma43_table",
    "solve_embedding",
    "step9_certificate",
    "verify_solution",
    "CRat",
    "Infeasible",
    "RatMatrix",
    "format_rat",
    "parse_rat",
    "rref",
    "solve_affine",
    "HallBasis",
    "dimension",
    "generate_hall_basis",
    "monomial_table",
    "Poly",
    "PolyRing",
    "VField",
    "vf_apply",
    "vf_bracket",
    "bch_coefficients",
    "free_algebra",
    "left_invariant_fields",
    "structure_constants",
    "CRStructure",
    "check_ac_structure",
    "decompose_product_automorphism",
    "dilation",
    "direct_sum",
    "distortion",
    "extend_free_automorphism",
    "heisenberg",
    "is_anti_cr",
    "is_conformal",
    "is_cr",
    "is_strata_automorphism",
    "is_tight",
    "perm_automorphism",
]
