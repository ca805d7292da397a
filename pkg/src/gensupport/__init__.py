"""Generalized support for constraint propagation: model, propagators, oracle and solver."""
from .core import Domain, Signature, rng
from .errors import (
    ConfigurationError,
    ContractViolation,
    EnumerationLimitError,
    GenSupportError,
    ParseError,
)
from .semantics import DiseqIdx, Element, OccurrenceGeq, OccurrenceLeq, Table, denote
from .support import FullTuple, Lit, SupportProperty

__version__ = "0.1.0"

__all__ = [
    "Domain",
    "Signature",
    "rng",
    "Element",
    "OccurrenceLeq",
    "OccurrenceGeq",
    "Table",
    "DiseqIdx",
    "denote",
    "Lit",
    "FullTuple",
    "SupportProperty",
    "GenSupportError",
    "ContractViolation",
    "ConfigurationError",
    "EnumerationLimitError",
    "ParseError",
]
