"""Deterministic labeled point sets with known cluster structure."""

from __future__ import annotations

import math

import numpy as np

from . import poincare
from .errors import InputError
from .pointset import PointSet

MAX_ANCHOR_TRIES = 10_000


def sample_anchors(rng, classes: int, dimension: int, radius: float, min_separation: float, anchor_radius: float):
    """Class anchors uniform in the ball of ``anchor_radius * radius``, pairwise at least
    ``min_separation * radius`` apart (rejection sampling)."""
    anchors: list[np.ndarray] = []
    for _ in range(MAX_ANCHOR_TRIES):
        if len(anchors) == classes:
            break
        v = rng.standard_normal(dimension)
        v *= anchor_radius * radius * rng.random() ** (1.0 / dimension) / np.linalg.norm(v)
        if all(np.linalg.norm(v - a) >= min_separation * radius for a in anchors):
            anchors.append(v)
    if len(anchors) < classes:
        raise InputError(
            f"could not place {classes} anchors {min_separation} radii apart; lower --min-separation"
        )
    return np.array(anchors)


def synthesize(
    classes: int,
    sets_per_class: int,
    points_per_set: int,
    dimension: int,
    curvature: float,
    spread: float,
    seed: int = 0,
    *,
    min_separation: float = 0.5,
    anchor_radius: float = 0.6,
) -> list[PointSet]:
    """Labeled point sets clustered around well-separated class anchors.

    Each point is its class anchor Möbius-translated by a small Gaussian
    offset, so the perturbation has geodesic size about ``spread`` per
    coordinate wherever the anchor sits (Möbius translation is an isometry).
    Anchor placement is in Euclidean fractions of the ball radius. Sets are
    ordered class by class; ids are ``c<k>-s<j>`` and labels ``class<k>``.
    """
    for name, v in (("classes", classes), ("sets_per_class", sets_per_class),
                    ("points_per_set", points_per_set), ("dimension", dimension)):
        if int(v) < 1:
            raise InputError(f"{name} must be >= 1, got {v}")
    if not spread > 0:
        raise InputError(f"spread must be > 0, got {spread}")
    if not 0 < anchor_radius < 1:
        raise InputError(f"anchor_radius must lie in (0, 1), got {anchor_radius}")
    c = poincare.check_curvature(curvature)
    radius = 1.0 / math.sqrt(c)
    rng = np.random.default_rng(seed)
    anchors = sample_anchors(rng, classes, dimension, radius, min_separation, anchor_radius)
    out = []
    for k, anchor in enumerate(anchors):
        for j in range(sets_per_class):
            # near the origin geodesic length is twice the Euclidean one
            v = 0.5 * spread * rng.standard_normal((points_per_set, dimension))
            pts = poincare.mobius_add(anchor, v, c)
            out.append(PointSet(pts, c, f"c{k}-s{j}", f"class{k}"))
    return out


def split_supports(sets, supports_per_class: int) -> tuple[list[PointSet], list[PointSet]]:
    """First ``supports_per_class`` sets of every label become supports, the rest queries."""
    seen: dict[str | None, int] = {}
    supports, queries = [], []
    for s in sets:
        n = seen.get(s.label, 0)
        (supports if n < supports_per_class else queries).append(s)
        seen[s.label] = n + 1
    return supports, queries
