"""Gromov δ-hyperbolicity of finite metric spaces via the four-point condition.

For every quadruple the three pair sums ``d(x,y)+d(z,w)``, ``d(x,z)+d(y,w)``
and ``d(x,w)+d(y,z)`` are formed; the quadruple's defect is half the gap between
the largest and the middle sum, and δ is the largest defect. The value is
unnormalized; ``relative`` rescales it by ``2 / diameter``.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import poincare
from .errors import GeometryError, InputError
from .pointset import PointSet

EXACT_LIMIT = 60
METRIC_TOL = 1e-6


@dataclass(frozen=True)
class DeltaEstimate:
    delta: float
    mode: str
    quadruples_evaluated: int
    relative: float | None

    def as_dict(self) -> dict:
        return asdict(self)


def check_metric(d, tol: float = METRIC_TOL) -> np.ndarray:
    """Validate a distance matrix; the first broken triangle is named in the error."""
    d = np.array(d, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise InputError(f"distance matrix must be square, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise GeometryError("distance matrix has non-finite entries")
    if np.any(d < 0):
        raise GeometryError("distance matrix has negative entries")
    if np.any(np.diag(d) != 0):
        raise GeometryError("distance matrix diagonal must be zero")
    if not np.allclose(d, d.T, rtol=0, atol=tol):
        i, j = np.argwhere(np.abs(d - d.T) > tol)[0]
        raise GeometryError(f"distance matrix is not symmetric at ({i}, {j})")
    for k in range(d.shape[0]):
        bad = d > d[:, k : k + 1] + d[k : k + 1, :] + tol
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise GeometryError(
                f"triangle inequality fails for ({i}, {j}) via {k}: "
                f"{d[i, j]:.9g} > {d[i, k]:.9g} + {d[k, j]:.9g}"
            )
    return d


def metric_from_point_set(s: PointSet) -> np.ndarray:
    return poincare.pairwise_distances(s.points, s.curvature)


def gromov_product(d, x: int, y: int, base: int) -> float:
    d = np.asarray(d)
    n = d.shape[0]
    for i in (x, y, base):
        if not 0 <= i < n:
            raise InputError(f"index {i} out of range for {n} points")
    return float(d[base, x] + d[base, y] - d[x, y]) / 2.0


def _defects(d: np.ndarray, q: np.ndarray) -> np.ndarray:
    x, y, z, w = q.T
    sums = np.stack([d[x, y] + d[z, w], d[x, z] + d[y, w], d[x, w] + d[y, z]], axis=1)
    sums.sort(axis=1)
    return (sums[:, 2] - sums[:, 1]) / 2.0


def _quadruples_from(n: int, first: int) -> np.ndarray:
    flat = itertools.chain.from_iterable(itertools.combinations(range(first + 1, n), 3))
    rest = np.fromiter(flat, dtype=np.int64).reshape(-1, 3)
    return np.column_stack([np.full(len(rest), first), rest])


def _sample_quadruples(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    out = np.empty((0, 4), dtype=np.int64)
    while len(out) < count:
        q = rng.integers(0, n, size=(count, 4))
        s = np.sort(q, axis=1)
        distinct = np.all(s[:, 1:] != s[:, :-1], axis=1)
        out = np.concatenate([out, q[distinct]])
    return out[:count]


def delta_hyperbolicity(
    d,
    mode: str = "exact",
    sample_count: int = 10_000,
    seed: int | None = 0,
    *,
    threads: int | None = None,
    validate: bool = True,
) -> DeltaEstimate:
    """Four-point δ of a metric matrix.

    ``exact`` scans all ``C(n, 4)`` quadruples (``n <= 60``). ``sampled`` draws
    ``sample_count`` quadruples of distinct points from ``seed`` and returns a
    lower bound on the exact value.
    """
    d = check_metric(d) if validate else np.asarray(d, dtype=np.float64)
    n = d.shape[0]
    diam = float(d.max()) if n else 0.0
    if mode not in ("exact", "sampled"):
        raise InputError(f"mode must be 'exact' or 'sampled', got {mode!r}")
    if mode == "sampled" and sample_count < 1:
        raise InputError("sampled mode needs sample_count >= 1")
    if n < 4:
        return DeltaEstimate(0.0, mode, 0, 0.0 if diam > 0 else None)

    if mode == "exact":
        if n > EXACT_LIMIT:
            raise InputError(f"exact mode is capped at n={EXACT_LIMIT}; use sampled mode")

        def scan(first):
            q = _quadruples_from(n, first)
            return float(_defects(d, q).max(initial=0.0)), len(q)

        firsts = range(n - 3)
        if threads is not None and threads <= 1:
            parts = [scan(f) for f in firsts]
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(scan, firsts))
        delta = max(p[0] for p in parts)
        count = sum(p[1] for p in parts)
    else:
        rng = np.random.default_rng(seed)
        q = _sample_quadruples(n, sample_count, rng)
        delta = float(_defects(d, q).max())
        count = sample_count
    return DeltaEstimate(delta, mode, count, 2.0 * delta / diam if diam > 0 else None)
