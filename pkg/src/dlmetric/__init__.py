"""Exact word metric toolkit for the Diestel-Leader groups Gamma_d(q)."""

from .errors import DLError, ParamError, ParseError
from .geometry import heights, project, project_relative, tree_distance
from .group import (
    Generator,
    GroupElem,
    eval_word,
    format_elem,
    generators,
    identity,
    invert,
    multiply,
    parse_elem,
    parse_word,
)
from .metric import distance, geodesic_word, length, quasi_geodesic, word_length
from .ring import RingParams, validate_params

__version__ = "0.1.0"
