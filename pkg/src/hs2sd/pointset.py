from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import poincare
from .errors import GeometryError, ShapeMismatchError


@dataclass(frozen=True)
class PointSet:
    """An ordered set of points in the curvature-``c`` Poincaré ball.

    Coordinates are projected inside the ball on construction and stored as a
    read-only ``(N, d)`` array. Order matters: the topological distance
    compares matrices entry by entry.
    """

    points: np.ndarray
    curvature: float
    id: str | None = None
    label: str | None = None
    margin: float = field(default=poincare.DEFAULT_MARGIN, repr=False, compare=False)

    def __post_init__(self):
        c = poincare.check_curvature(self.curvature)
        p = np.asarray(self.points, dtype=np.float64)
        if p.ndim == 1 and p.size:
            p = p[None, :]
        if p.ndim != 2 or p.shape[0] < 1 or p.shape[1] < 1:
            raise ShapeMismatchError(f"a point set needs shape (N>=1, d>=1), got {p.shape}")
        p = poincare.project_to_ball(p, c, self.margin)
        p.setflags(write=False)
        object.__setattr__(self, "points", p)
        object.__setattr__(self, "curvature", c)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def midpoint(self) -> np.ndarray:
        return poincare.einstein_midpoint(self.points, self.curvature)

    def reordered(self, order) -> PointSet:
        return PointSet(self.points[np.asarray(order)], self.curvature, self.id, self.label, self.margin)

    def canonical_order(self) -> np.ndarray:
        """Indices sorted by distance to the Einstein midpoint, ties broken on coordinates."""
        d = np.atleast_1d(poincare.geodesic_distance(self.midpoint(), self.points, self.curvature))
        # np.lexsort sorts by the last key first
        keys = [self.points[:, k] for k in range(self.dim - 1, -1, -1)] + [d]
        return np.lexsort(keys)

    def canonical(self) -> PointSet:
        return self.reordered(self.canonical_order())


def check_compatible(a: PointSet, b: PointSet, *, same_size: bool = False) -> None:
    if a.curvature != b.curvature:
        raise GeometryError(f"curvature mismatch: {a.curvature!r} vs {b.curvature!r}")
    if a.dim != b.dim:
        raise ShapeMismatchError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if same_size and len(a) != len(b):
        raise ShapeMismatchError(
            f"cardinality mismatch: {len(a)} vs {len(b)} points; the topological term "
            "needs equal-size sets (resample or pad upstream, or use lambda=1)"
        )


def merge(sets, id: str | None = None, label: str | None = None) -> PointSet:
    """Concatenate the points of several sets, preserving order."""
    sets = list(sets)
    if not sets:
        raise GeometryError("cannot merge an empty list of point sets")
    for s in sets[1:]:
        check_compatible(sets[0], s)
    pts = np.concatenate([s.points for s in sets], axis=0)
    return PointSet(pts, sets[0].curvature, id, label, sets[0].margin)
