"""Coarse-geometry and paradoxical-decomposition toolkit at desk scale."""
from .coarse import CoarseWindow, EntourageRel, make_window
from .free_group import ReducedWord, reduce, standard_paradox
from .harem import HaremFunction, harem_matching
from .paradox import GroupModel, ParadoxicalDecomposition, PiecewiseTranslation

__version__ = "0.1.0"

__all__ = [
    "CoarseWindow",
    "EntourageRel",
    "GroupModel",
    "HaremFunction",
    "ParadoxicalDecomposition",
    "PiecewiseTranslation",
    "ReducedWord",
    "harem_matching",
    "make_window",
    "reduce",
    "standard_paradox",
]
