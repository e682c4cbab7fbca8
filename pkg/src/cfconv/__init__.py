"""Certified binomial-convolution identities for C-finite sequences."""

from .cfseq import CFiniteSequence, Recurrence, from_gf, seq_terms, to_gf
from .convolve import (
    ConvolutionSpec,
    IdentityResult,
    InternalConsistencyError,
    binomial_conv_terms,
    conv_order_bound,
    cross_convolution_identity,
    self_convolution_identity,
)
from .families import kbonacci, kbonacci_gf, named_sequence
from .guess import GuessResult, guess_gf, guess_recurrence
from .ratcore import (
    Polynomial,
    RationalFunction,
    normalize,
    parse_poly,
    parse_rational,
    series_expand,
)

__version__ = "0.1.0"
