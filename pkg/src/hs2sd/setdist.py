"""Hyperbolic set-to-set distance: a convex blend of the geodesic distance
between Einstein midpoints and the Thue-Morse topological distance.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import poincare
from .adapter import AdapterWeights, lambda_adapter_forward
from .errors import HS2SDError, InputError
from .pointset import PointSet, check_compatible, merge
from .topology import DEFAULT_TM_TERMS, NumericOverflowError, build_topology_graph, signature_distance, thue_morse_signature


@dataclass(frozen=True)
class DistanceConfig:
    """How two sets are compared.

    ``lam`` is the weight of the geodesic term. When ``adapter`` is given it
    replaces ``lam`` with a per-pair value.
    """

    lam: float = 0.5
    tm_terms: int = DEFAULT_TM_TERMS
    adapter: AdapterWeights | None = None
    symmetrize_adapter: bool = False
    normalize_adjacency: bool = False
    canonical_order: bool = False

    def __post_init__(self):
        if self.adapter is None and not (0.0 <= self.lam <= 1.0):
            raise InputError(f"lambda must lie in [0, 1], got {self.lam!r}")
        if self.tm_terms < 0:
            raise InputError(f"tm_terms must be >= 0, got {self.tm_terms}")

    @property
    def fixed(self) -> bool:
        return self.adapter is None


@dataclass(frozen=True)
class DistanceReport:
    d_g: float
    d_t: float | None
    lambda_used: float
    total: float

    def as_dict(self) -> dict:
        return {"d_g": self.d_g, "d_t": self.d_t, "lambda": self.lambda_used, "total": self.total}


class _Prepared:
    """Per-set quantities reused across many pairwise comparisons."""

    def __init__(self, s: PointSet, cfg: DistanceConfig):
        self.set = s
        self.cfg = cfg

    @cached_property
    def midpoint(self) -> np.ndarray:
        return self.set.midpoint()

    @cached_property
    def signature(self) -> list[np.ndarray]:
        s = self.set.canonical() if self.cfg.canonical_order else self.set
        g = build_topology_graph(s, normalize=self.cfg.normalize_adjacency)
        return thue_morse_signature(g, self.cfg.tm_terms)


def geodesic_set_distance(sx: PointSet, sy: PointSet) -> float:
    """Geodesic distance between the Einstein midpoints of the two sets."""
    check_compatible(sx, sy)
    return float(poincare.geodesic_distance(sx.midpoint(), sy.midpoint(), sx.curvature))


def _combine(d_g: float, d_t: float | None, lam: float) -> float:
    if lam == 1.0:
        return d_g
    if lam == 0.0:
        return d_t
    return lam * d_g + (1.0 - lam) * d_t


def _report(px: _Prepared, py: _Prepared, cfg: DistanceConfig, *, force_geodesic: bool = False) -> DistanceReport:
    sx, sy = px.set, py.set
    check_compatible(sx, sy)
    same_size = len(sx) == len(sy)
    if force_geodesic:
        lam = 1.0
    elif cfg.adapter is not None:
        lam = lambda_adapter_forward(sx, sy, cfg.adapter, symmetrize=cfg.symmetrize_adapter)
    else:
        lam = float(cfg.lam)
    if lam != 1.0:
        check_compatible(sx, sy, same_size=True)
    d_g = float(poincare.geodesic_distance(px.midpoint, py.midpoint, sx.curvature))
    d_t = None
    if same_size:
        try:
            d_t = signature_distance(px.signature, py.signature)
        except NumericOverflowError:
            if lam != 1.0:
                raise
    return DistanceReport(d_g, d_t, lam, _combine(d_g, d_t, lam))


def hs2sd_distance(sx: PointSet, sy: PointSet, cfg: DistanceConfig | None = None) -> DistanceReport:
    """Blend ``lam * d_g + (1 - lam) * d_t`` of geodesic and topological distances.

    ``d_t`` is ``None`` when the sets differ in size, which is only allowed at
    ``lam == 1``.
    """
    cfg = cfg or DistanceConfig()
    return _report(_Prepared(sx, cfg), _Prepared(sy, cfg), cfg)


def _map(fn, items, threads: int | None):
    if threads is not None and threads <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _pair_error(exc: HS2SDError, pair) -> HS2SDError:
    return type(exc)(f"pair {pair}: {exc}")


def pairwise_distance_matrix(sets, cfg: DistanceConfig | None = None, *, threads: int | None = None) -> np.ndarray:
    """``(M, M)`` matrix of HS2SD totals; exactly symmetric when ``lam`` is fixed."""
    cfg = cfg or DistanceConfig()
    prepared = [_Prepared(s, cfg) for s in sets]
    m = len(prepared)
    if cfg.fixed:
        pairs = list(itertools.combinations(range(m), 2))
    else:
        pairs = [(i, j) for i in range(m) for j in range(m) if i != j]

    def one(pair):
        i, j = pair
        try:
            return _report(prepared[i], prepared[j], cfg).total
        except HS2SDError as exc:
            raise _pair_error(exc, pair) from exc

    values = _map(one, pairs, threads)
    out = np.zeros((m, m))
    for (i, j), v in zip(pairs, values):
        out[i, j] = v
        if cfg.fixed:
            out[j, i] = v
    return out


@dataclass(frozen=True)
class Classification:
    classes: list[str]
    predicted: list[str]
    logits: np.ndarray  # (queries, classes), negative distances

    def accuracy(self, truth) -> float:
        truth = list(truth)
        return sum(p == t for p, t in zip(self.predicted, truth)) / len(truth)


def class_prototypes(supports) -> tuple[list[str], list[PointSet]]:
    """Merge the support sets of each label, classes ordered by first appearance."""
    groups: dict[str, list[PointSet]] = {}
    for s in supports:
        if s.label is None:
            raise InputError(f"support set {s.id!r} has no label")
        groups.setdefault(s.label, []).append(s)
    if not groups:
        raise InputError("no support sets given")
    classes = list(groups)
    return classes, [merge(groups[c], id=c, label=c) for c in classes]


def nearest_prototype_classify(queries, supports, cfg: DistanceConfig | None = None, *, threads: int | None = None):
    """Assign each query the label of the closest class prototype.

    A class prototype concatenates all of that class's support sets. Where a
    query and prototype differ in size the topological term is undefined and the
    pair is compared with ``lam = 1``. Exact ties go to the lowest class index.
    """
    cfg = cfg or DistanceConfig()
    classes, protos = class_prototypes(supports)
    pq = [_Prepared(q, cfg) for q in queries]
    pp = [_Prepared(p, cfg) for p in protos]
    pairs = [(i, k) for i in range(len(pq)) for k in range(len(pp))]

    def one(pair):
        i, k = pair
        try:
            force = len(pq[i].set) != len(pp[k].set)
            return _report(pq[i], pp[k], cfg, force_geodesic=force).total
        except HS2SDError as exc:
            raise _pair_error(exc, pair) from exc

    dist = np.array(_map(one, pairs, threads), dtype=np.float64).reshape(len(pq), len(pp))
    if not np.all(np.isfinite(dist)):
        bad = np.argwhere(~np.isfinite(dist))[0]
        raise InputError(f"non-finite distance for query {int(bad[0])}, class {classes[bad[1]]!r}")
    pred = [classes[k] for k in np.argmin(dist, axis=1)] if len(pq) else []
    return Classification(classes, pred, -dist)

