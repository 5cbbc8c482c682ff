"""Exact symbolic machinery for quantum principal bundles.

Coefficients live in Q(q, s); algebras are given by degree-compatible
presentations with normal forms certified up to a degree bound.
"""

from .scalars import ONE, Q, S, ZERO, DivisionByZero, PoleAtPoint, Scalar, ScalarError
from .algebra import EMPTY_WORD, Element, Word, word_key
from .parsing import ParseError, parse_element, parse_tensor
from .tensors import TensorElement
from .presentations import (
    Morphism,
    Presentation,
    UnknownBuiltin,
    ValidationError,
    builtin,
    builtin_names,
    load_presentation,
    serialize_presentation,
)
from .rewriting import (
    DegreeBoundExceeded,
    DegreeIncompatibleRelation,
    RewriteError,
    RewriteSystem,
    RuleCapExceeded,
    complete,
)

__all__ = [
    "Scalar", "ScalarError", "DivisionByZero", "PoleAtPoint",
    "Q", "S", "ZERO", "ONE",
    "Element", "Word", "EMPTY_WORD", "word_key",
    "RewriteSystem", "complete", "RewriteError",
    "DegreeIncompatibleRelation", "RuleCapExceeded", "DegreeBoundExceeded",
    "TensorElement",
    "ParseError", "parse_element", "parse_tensor",
    "Presentation", "Morphism", "ValidationError", "UnknownBuiltin",
    "builtin", "builtin_names",
    "load_presentation", "serialize_presentation",
]

__version__ = "0.1.0"
