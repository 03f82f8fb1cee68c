"""Exact simulation and conversion of cutpoint automata.

Generalized (GFA), probabilistic (PFA) and measure-once quantum (GQFA)
finite automata, the n**2-dimensional linearization of quantum automata,
the exact GFA -> PFA construction with 2k + 6 states, and the
prepare-test witnesses that shatter n**2 - 1 quantum states.
"""
from .convert import ConversionTrace, degenerate_pfa, gfa_to_pfa, qfa_to_pfa
from .linalg import gell_mann_basis, hs_inner, is_density, operator_norm, spectral_decompose
from .linearize import channel_matrix, coords, qfa_to_gfa
from .models import (
    GFA,
    GQFA,
    PFA,
    BoundaryError,
    Channel,
    accepts,
    apply_channel,
    eval_gfa,
    eval_pfa,
    eval_qfa,
    pfa_as_qfa,
    validate,
)
from .verify import check_agreement, enumerate_words, halfspace_shatter, support_shatter
from .witness import build_witness, verify_shattering, witness_acceptance

__version__ = "0.1.0"
