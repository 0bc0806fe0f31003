"""Structural analysis of low-degree polynomials over prime finite fields.

Bias and Gowers norms, bias-to-low-rank decompositions, polynomial-factor
regularization, Nullstellensatz certificates, radical membership, rational
point counting, and Reed-Muller list-decoding experiments, all verified at
desk scale against exhaustive oracles.
"""

from .config import Caps, DecomposeConfig, DEFAULT_CAPS, RegularizeConfig
from .errors import (
    CapExceeded,
    DecompositionFailed,
    InputError,
    InternalConsistencyError,
    PartialResultError,
    PolystructError,
    PreconditionError,
    UnsupportedError,
)
from .ffpoly import (
    FieldCtx,
    LookupTable,
    MultiPoly,
    compose_gamma,
    compose_poly,
    derivative,
    functional_reduce,
    homogeneous_top,
    parse_poly,
    poly_to_str,
    restrict_hyperplane,
)

__version__ = "0.1.0"

__all__ = [
    "Caps",
    "CapExceeded",
    "DecomposeConfig",
    "DecompositionFailed",
    "DEFAULT_CAPS",
    "FieldCtx",
    "InputError",
    "InternalConsistencyError",
    "LookupTable",
    "MultiPoly",
    "PartialResultError",
    "PolystructError",
    "PreconditionError",
    "RegularizeConfig",
    "UnsupportedError",
    "compose_gamma",
    "compose_poly",
    "derivative",
    "functional_reduce",
    "homogeneous_top",
    "parse_poly",
    "poly_to_str",
    "restrict_hyperplane",
]
