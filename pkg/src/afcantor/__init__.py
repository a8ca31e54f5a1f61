"""Exact combinatorics of finite-dimensional C*-algebras, their multiplicity
matrices, and Bratteli diagrams of AF-algebras."""

from .fdalg import (
    ZERO,
    EpPair,
    FdAlgebra,
    MalformedInput,
    Morphism,
    NotLeftInvertible,
    compose,
    find_section,
    is_left_invertible,
    validate_morphism,
)
from .amalgam import amalgam_identities, proper_amalgamate, weakly_initial
from .bratteli import BratteliDiagram, check_cantor, tensor, cantorize, split_cover
from .fraisse import CategorySpec, build_fraisse, intertwine, universal_surjection_witness
from .k0 import DimensionGroupPresentation, extract_k0, check_universal_presentation

__all__ = [
    "ZERO",
    "EpPair",
    "FdAlgebra",
    "MalformedInput",
    "Morphism",
    "NotLeftInvertible",
    "compose",
    "find_section",
    "is_left_invertible",
    "validate_morphism",
    "amalgam_identities",
    "proper_amalgamate",
    "weakly_initial",
    "BratteliDiagram",
    "check_cantor",
    "tensor",
    "cantorize",
    "split_cover",
    "CategorySpec",
    "build_fraisse",
    "intertwine",
    "universal_surjection_witness",
    "DimensionGroupPresentation",
    "extract_k0",
    "check_universal_presentation",
]
