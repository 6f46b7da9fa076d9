"""Executable checks of the identities and lemmas behind the classification."""
from .constructions import (GeneralFrame, IsoscelesFrame, construct_b_prime_c_prime,
                            construct_c_p, construct_c_star, isosceles_frame)
from .polynomials import (EquilateralState, PChain, QChain, eval_F_system, p_chain,
                          q_chain, reduced_argmin)
from .suites import SECTIONS, IdentityReport, verify_ideal_membership, verify_lemma_suite

__all__ = [
    "EquilateralState", "GeneralFrame", "IdentityReport", "IsoscelesFrame", "PChain", "QChain",
    "SECTIONS", "construct_b_prime_c_prime", "construct_c_p", "construct_c_star",
    "eval_F_system", "isosceles_frame", "p_chain", "q_chain", "reduced_argmin",
    "verify_ideal_membership", "verify_lemma_suite",
]
