"""Model sets from cut-and-project schemes and the arithmetic progressions inside them."""
from .cps import (
    GuardExceeded,
    covering_radius_estimate,
    enumerate_model_set,
    is_member,
    is_relatively_dense,
    is_uniformly_discrete,
    min_gap,
    star,
)
from .pointset import CpsDescriptor, PointSet
from .progressions import (
    DifferenceWindow,
    Progression,
    bounded_gap_radius,
    constructive_ap,
    difference_window,
    fact_r1_radius,
    find_aps_bruteforce,
    punctured_covering_radius,
    verify_ap,
)
from .quadratic import GOLDEN, TAU, QuadElem, QuadRing
from .windows import Ball, Box, Interval

__version__ = "0.1.0"

__all__ = [
    "GOLDEN", "TAU", "QuadElem", "QuadRing",
    "Interval", "Box", "Ball",
    "CpsDescriptor", "PointSet",
    "GuardExceeded", "star", "enumerate_model_set", "is_member", "covering_radius_estimate",
    "min_gap", "is_relatively_dense", "is_uniformly_discrete",
    "Progression", "DifferenceWindow", "verify_ap", "find_aps_bruteforce", "difference_window",
    "constructive_ap", "punctured_covering_radius", "bounded_gap_radius", "fact_r1_radius",
]
