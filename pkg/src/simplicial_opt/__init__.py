"""Exact analysis of simplicial operational probabilistic theories."""
from .analysis import (analyse_composite, check_associativity, check_atomicity, check_causality,
                       check_classicality, discriminability_degree, entanglement_present, is_separable)
from .composition import (CompositionRule, Side, Theory, compose_effects, compose_nfold, compose_states,
                          excess_dimension, marginalize, validate_rule)
from .exact import LPProblem, lp_feasible, lp_maximize, lp_minimize, parse_rational, rank, solve
from .generators import generate_ct, generate_random, generate_toy, t5_theory
from .principles import Mode, check_purification, check_superposition, maximal_discriminable_set
from .system import FULL_DUAL, EffectVector, RestrictedCone, StateVector, SystemSpace, classify_state, pair
from .theory_io import load_theory, parse_theory, serialize_theory

__version__ = "0.1.0"
