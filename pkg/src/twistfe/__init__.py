"""Hecke coefficient sequences, twisted L-function functional equations with
recovered root numbers, and the modular-transformation checks that go with them.
"""

__version__ = "0.1.0"

from .characters import DirichletCharacter, character_from_label, enumerate_characters
from .coeffs import (
    CoefficientSequence,
    check_hecke_relations,
    eisenstein_coefficients,
    eta_sequence,
    load_coefficients,
    save_coefficients,
    twist_coefficients,
)
from .lfun import recover_epsilon, solve_epsilon, verify_fe, verify_ramanujan_twist
from .modular import Matrix2x2, modularity_check, verify_matrix_identities, verify_sq_equals_one

__all__ = [
    "CoefficientSequence",
    "DirichletCharacter",
    "Matrix2x2",
    "character_from_label",
    "check_hecke_relations",
    "eisenstein_coefficients",
    "enumerate_characters",
    "eta_sequence",
    "load_coefficients",
    "modularity_check",
    "recover_epsilon",
    "save_coefficients",
    "solve_epsilon",
    "twist_coefficients",
    "verify_fe",
    "verify_matrix_identities",
    "verify_ramanujan_twist",
    "verify_sq_equals_one",
]
