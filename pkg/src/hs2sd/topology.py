"""Topology graphs of point sets and Thue-Morse matrix-word signatures.

A set's graph is the full matrix of pairwise geodesic distances (``A``) with
its row-sum degree matrix (``D``). Words over ``{A, D}`` are evaluated as left
to right matrix products, and two sets are compared through the Frobenius
distances between their evaluated Thue-Morse words.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import poincare
from .errors import GeometryError, InputError
from .pointset import PointSet, check_compatible

DEFAULT_TM_TERMS = 4
_SWAP = str.maketrans("AD", "DA")


class NumericOverflowError(GeometryError):
    pass


@dataclass(frozen=True)
class TopologyGraph:
    adjacency: np.ndarray
    degree: np.ndarray

    @classmethod
    def from_adjacency(cls, adjacency, *, normalize: bool = False) -> TopologyGraph:
        a = np.array(adjacency, dtype=np.float64)
        if normalize:
            top = a.sum(axis=1).max(initial=0.0)
            if top > 0.0:
                a = a / top
        a.setflags(write=False)
        d = np.diag(a.sum(axis=1))
        d.setflags(write=False)
        return cls(a, d)

    @property
    def size(self) -> int:
        return self.adjacency.shape[0]


def build_topology_graph(s: PointSet, *, normalize: bool = False) -> TopologyGraph:
    """Weighted complete graph of ``s`` with geodesic distances as edge weights."""
    return TopologyGraph.from_adjacency(poincare.pairwise_distances(s.points, s.curvature), normalize=normalize)


def thue_morse_words(n: int) -> list[str]:
    """Words ``w_0 .. w_n`` with ``w_0 = "D"`` and ``w_i = w_{i-1} + swap(w_{i-1})``."""
    if n < 0:
        raise InputError(f"term index must be >= 0, got {n}")
    words = ["D"]
    for _ in range(n):
        words.append(words[-1] + words[-1].translate(_SWAP))
    return words


def _check_word(word: str) -> None:
    bad = set(word) - {"A", "D"}
    if bad:
        raise InputError(f"word letters must be 'A' or 'D', got {sorted(bad)}")


def is_overlap_free(word: str) -> bool:
    """True iff ``word`` has no factor ``c x c x c`` (``c`` a letter, ``x`` possibly empty).

    Such a factor is exactly a run of length ``2p + 1`` with period ``p``.
    """
    w = np.frombuffer(word.encode("ascii"), dtype=np.uint8)
    n = len(w)
    for p in range(1, (n - 1) // 2 + 1):
        match = (w[:-p] == w[p:]).astype(np.int32)
        # need p + 1 consecutive period matches
        window = np.convolve(match, np.ones(p + 1, dtype=np.int32), mode="valid")
        if window.size and window.max() == p + 1:
            return False
    return True


def evaluate_word(word: str, g: TopologyGraph) -> np.ndarray:
    """Left-to-right product of the word's letters with ``A -> adjacency``, ``D -> degree``."""
    _check_word(word)
    mats = {"A": g.adjacency, "D": g.degree}
    out = np.eye(g.size)
    with np.errstate(over="ignore", invalid="ignore"):
        for letter in word:
            out = out @ mats[letter]
    if not np.all(np.isfinite(out)):
        raise NumericOverflowError(
            f"evaluating a length-{len(word)} word overflowed; enable adjacency normalization"
        )
    return out


def thue_morse_signature(g: TopologyGraph, n: int = DEFAULT_TM_TERMS) -> list[np.ndarray]:
    """Evaluated words ``t_0 .. t_n`` (``n + 1`` matrices)."""
    return [evaluate_word(w, g) for w in thue_morse_words(n)]


def signature_distance(sig_x, sig_y) -> float:
    if len(sig_x) != len(sig_y):
        raise InputError("signatures have different term counts")
    return float(np.mean([np.linalg.norm(tx - ty, "fro") for tx, ty in zip(sig_x, sig_y)]))


def topological_distance(
    sx: PointSet,
    sy: PointSet,
    n: int = DEFAULT_TM_TERMS,
    *,
    normalize: bool = False,
    canonical: bool = False,
) -> float:
    """Mean Frobenius distance between the two sets' Thue-Morse signatures.

    Parameters
    ----------
    sx, sy : PointSet
        Sets of equal cardinality and curvature.
    n : int
        Index of the last word; ``n + 1`` terms are averaged.
    normalize : bool
        Divide each adjacency by its largest row sum before evaluating words.
    canonical : bool
        Reorder each set by distance to its Einstein midpoint first.
    """
    check_compatible(sx, sy, same_size=True)
    if canonical:
        sx, sy = sx.canonical(), sy.canonical()
    gx = build_topology_graph(sx, normalize=normalize)
    gy = build_topology_graph(sy, normalize=normalize)
    return signature_distance(thue_morse_signature(gx, n), thue_morse_signature(gy, n))
