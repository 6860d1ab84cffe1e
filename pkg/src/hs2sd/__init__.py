"""Hyperbolic set-to-set distances.

Modules
-------
poincare : Möbius addition, geodesic distance, Klein maps, Einstein midpoint
pointset : the ``PointSet`` container
topology : distance graphs and Thue-Morse word signatures
setdist : the blended set distance, batch matrices, prototype classification
adapter : forward pass of the learned λ weighting network
delta : Gromov δ-hyperbolicity
trees : small-tree word-trace and isomorphism tools
"""

__version__ = "0.1.0"

from .errors import GeometryError, HS2SDError, InputError, ShapeMismatchError
from .pointset import PointSet
from .poincare import (
    einstein_midpoint,
    geodesic_distance,
    klein_to_poincare,
    lorentz_factor,
    mobius_add,
    poincare_to_klein,
    project_to_ball,
)
from .setdist import (
    DistanceConfig,
    DistanceReport,
    geodesic_set_distance,
    hs2sd_distance,
    nearest_prototype_classify,
    pairwise_distance_matrix,
)
from .topology import topological_distance

__all__ = [
    "DistanceConfig",
    "DistanceReport",
    "GeometryError",
    "HS2SDError",
    "InputError",
    "PointSet",
    "ShapeMismatchError",
    "einstein_midpoint",
    "geodesic_distance",
    "geodesic_set_distance",
    "hs2sd_distance",
    "klein_to_poincare",
    "lorentz_factor",
    "mobius_add",
    "nearest_prototype_classify",
    "pairwise_distance_matrix",
    "poincare_to_klein",
    "project_to_ball",
    "topological_distance",
]
