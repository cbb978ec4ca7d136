"""Desk-scale laboratory for Boolean-function degree measures.

Exact/approximate/sign/one-sided degrees with verified certificates, dual
witnesses and their amplification pipeline, spectral sensitivity, and the
AND2/OR2/majority gadget constructions, over truth-table functions.
"""

from .boolfn import (Assignment, BooleanFunction, Classification, Const,
                     Projection, Var, apply_projection, classify, compose,
                     depends_on, make_builtin, power, restrict)
from .degrees import (DegreeCertificate, DegreesConfig, DualWitness,
                      Refutation, approx_degree, dual_witness, exact_degree,
                      is_full_sign_degree, one_sided_approx_degree,
                      sign_degree)
from .polynomial import (MultilinearPolynomial, eval_poly, interpolate,
                         linf_error, robustness_probe)
from .spectral import SpectralResult, spectral_sensitivity
from .gadgets import (SensitiveBlock, SimulationCircuit,
                      find_min_sensitive_block2, find_minimal_one_input,
                      find_negation_gadget, majority_projection,
                      simulate_and2, simulate_or2, verify_circuit)
from .amplify import (AmplifierReport, SplitDual, apply_L, mu_expectation,
                      split_dual, verify_amplifier_pipeline)
from .exprs import parse_function_expr, parse_to_function, print_expr

__all__ = [name for name in dir() if not name.startswith("_")]
