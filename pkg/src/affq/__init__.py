"""q-characters of minimal affinizations in types A and B, M-system identities
and the cluster mutations that produce them."""

from .catalog import MinAffParams, MSystemInstance, highest_weight, identify, msystem_instance
from .cluster import Seed, dual_seed, initial_seed, mutation_sequence, run_and_verify
from .fm import fm_qchar
from .kernels import BACKEND
from .lattice import AlgebraType, GMonomial, QPolynomial, a_factor, iota, leq, tau_shift
from .paths import enumerate_paths, qchar_minaff
from .verifier import verify_dual, verify_equation

__version__ = "0.1.0"

__all__ = [
    "AlgebraType",
    "BACKEND",
    "GMonomial",
    "MSystemInstance",
    "MinAffParams",
    "QPolynomial",
    "Seed",
    "a_factor",
    "dual_seed",
    "enumerate_paths",
    "fm_qchar",
    "highest_weight",
    "identify",
    "initial_seed",
    "iota",
    "leq",
    "msystem_instance",
    "mutation_sequence",
    "qchar_minaff",
    "run_and_verify",
    "tau_shift",
    "verify_dual",
    "verify_equation",
]
