"""Numerical toolkit for torus homeomorphisms homotopic to the identity.

Rotation sets and diffusion rates, essential/inessential classification of
points, winding and linking numbers, periodic orbits realizing rational
rotation vectors, and deviation probes.
"""

__version__ = "0.1.0"

from .geometry import ConvexPolygon, chebyshev_center, convex_hull, diffusion_rate, hausdorff_distance
from .linking import (
    LinkingError, Polyline, isotopy_path, linking_number_periodic, linking_number_region,
    winding_index,
)
from .orbit_regions import (
    ESSENTIAL, INESSENTIAL, UNDECIDED, classify_torus, essential_point_test, orbit_region,
    transitions,
)
from .orbits import (
    RealizationTarget, annularity_probe, find_periodic_realizing, irrotational_probe,
    strict_torality_flags, verify_realization,
)
from .regions import GridRegion, fill, label_components, region_class
from .rotation import (
    Ball, birkhoff_rotation_vector, estimate_local_rotation_set, estimate_rotation_set,
)
from .torus import (
    LiftedMap, LinearPartError, MapSpecError, compose, iterate_lift, make_map, map_from_spec,
    map_names, power,
)

__all__ = [
    "__version__",
    "Ball", "ConvexPolygon", "ESSENTIAL", "GridRegion", "INESSENTIAL", "LiftedMap",
    "LinearPartError", "LinkingError", "MapSpecError", "Polyline", "RealizationTarget",
    "UNDECIDED", "annularity_probe", "birkhoff_rotation_vector", "chebyshev_center",
    "classify_torus", "compose", "convex_hull", "diffusion_rate", "essential_point_test",
    "estimate_local_rotation_set", "estimate_rotation_set", "fill", "find_periodic_realizing",
    "hausdorff_distance", "irrotational_probe", "isotopy_path", "iterate_lift",
    "label_components", "linking_number_periodic", "linking_number_region", "make_map",
    "map_from_spec", "map_names", "orbit_region", "power", "region_class",
    "strict_torality_flags", "transitions", "verify_realization", "winding_index",
]
