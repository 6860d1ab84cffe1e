"""Poincaré-ball operations at positive curvature magnitude ``c``.

The ball is ``{x : c * |x|^2 < 1}``, radius ``1/sqrt(c)``. All functions
operate on the last axis and broadcast over leading axes, so a ``(N, d)``
array is treated as ``N`` points.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import GeometryError, ShapeMismatchError

DEFAULT_MARGIN = 1e-5
# arctanh argument cap; reaching it means the point sits on the boundary
ARTANH_CAP = 1.0 - 1e-12
ARTANH_MAX_CLAMP = 1e-6


def check_curvature(c) -> float:
    c = float(c)
    if not math.isfinite(c) or c <= 0.0:
        raise GeometryError(f"curvature must be a positive finite magnitude, got {c!r}")
    return c


def _as_points(x, name: str = "x") -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 0:
        raise ShapeMismatchError(f"{name} must have at least one coordinate axis")
    if x.shape[-1] < 1:
        raise ShapeMismatchError(f"{name} has dimension 0")
    if not np.all(np.isfinite(x)):
        raise GeometryError(f"{name} contains non-finite coordinates")
    return x


def _sqnorm(x: np.ndarray) -> np.ndarray:
    return np.sum(x * x, axis=-1)


def _check_inside(x: np.ndarray, c: float, name: str) -> None:
    if np.any(c * _sqnorm(x) >= 1.0):
        raise GeometryError(f"{name} lies on or outside the ball of radius {1 / math.sqrt(c):.6g}")


def _check_pair(x, y, c):
    c = check_curvature(c)
    x = _as_points(x, "x")
    y = _as_points(y, "y")
    if x.shape[-1] != y.shape[-1]:
        raise ShapeMismatchError(f"dimension mismatch: {x.shape[-1]} vs {y.shape[-1]}")
    _check_inside(x, c, "x")
    _check_inside(y, c, "y")
    return x, y, c


def project_to_ball(x, c, margin: float = DEFAULT_MARGIN) -> np.ndarray:
    """Radially pull points back to norm ``(1 - margin)/sqrt(c)`` if they exceed it.

    Points already strictly inside that radius are returned unchanged.
    """
    c = check_curvature(c)
    if not 0.0 < margin < 1.0:
        raise GeometryError(f"margin must lie in (0, 1), got {margin!r}")
    x = _as_points(x)
    limit = (1.0 - margin) / math.sqrt(c)
    norm = np.sqrt(_sqnorm(x))
    outside = c * norm**2 >= (1.0 - margin) ** 2
    if not np.any(outside):
        return x.copy()
    scale = np.where(outside, limit / np.where(outside, norm, 1.0), 1.0)
    return x * scale[..., None]


def _mobius_add(x: np.ndarray, y: np.ndarray, c: float) -> np.ndarray:
    # gyrovector form for a positive curvature magnitude; writing it with a
    # signed curvature k = -c flips the three linear-in-c signs
    xy = np.sum(x * y, axis=-1)[..., None]
    x2 = _sqnorm(x)[..., None]
    y2 = _sqnorm(y)[..., None]
    num = (1.0 + 2.0 * c * xy + c * y2) * x + (1.0 - c * x2) * y
    den = 1.0 + 2.0 * c * xy + c * c * x2 * y2
    return num / den


def mobius_add(x, y, c, *, project: bool = True, margin: float = DEFAULT_MARGIN) -> np.ndarray:
    """Möbius sum ``x ⊕_c y``.

    Parameters
    ----------
    x, y : array_like
        Points inside the ball, broadcastable against each other.
    c : float
        Curvature magnitude.
    project : bool
        Pull the result back inside ``(1 - margin)/sqrt(c)``; rounding can push
        sums of near-boundary points onto the boundary.
    """
    x, y, c = _check_pair(x, y, c)
    out = _mobius_add(x, y, c)
    return project_to_ball(out, c, margin) if project else out


def _artanh_arg(z: np.ndarray) -> np.ndarray:
    over = z > ARTANH_CAP
    if np.any(over):
        worst = float(np.max((z[over] - ARTANH_CAP) / z[over]))
        if worst > ARTANH_MAX_CLAMP:
            raise GeometryError(
                f"distance argument {float(np.max(z)):.9g} is at the ball boundary; "
                "project points inward before measuring"
            )
        z = np.where(over, ARTANH_CAP, z)
    return z


def geodesic_distance(x, y, c) -> np.ndarray | float:
    """``(2/sqrt(c)) * artanh(sqrt(c) * |(-x) ⊕_c y|)``, broadcast over leading axes."""
    x, y, c = _check_pair(x, y, c)
    sc = math.sqrt(c)
    z = sc * np.sqrt(_sqnorm(_mobius_add(-x, y, c)))
    d = (2.0 / sc) * np.arctanh(_artanh_arg(z))
    # (-x) ⊕ x can leave an ulp-sized residue; identical inputs are exactly 0 apart
    d = np.where(np.all(x == y, axis=-1), 0.0, d)
    return float(d) if d.ndim == 0 else d


def pairwise_distances(points, c) -> np.ndarray:
    """Symmetric ``(N, N)`` geodesic distance matrix with an exact zero diagonal."""
    c = check_curvature(c)
    p = _as_points(points, "points")
    if p.ndim != 2:
        raise ShapeMismatchError(f"points must be an (N, d) array, got shape {p.shape}")
    _check_inside(p, c, "points")
    n = p.shape[0]
    sc = math.sqrt(c)
    z = sc * np.sqrt(_sqnorm(_mobius_add(-p[:, None, :], p[None, :, :], c)))
    d = (2.0 / sc) * np.arctanh(_artanh_arg(z))
    iu = np.triu_indices(n, 1)
    out = np.zeros((n, n))
    out[iu] = d[iu]
    return out + out.T


def poincare_to_klein(x, c) -> np.ndarray:
    c = check_curvature(c)
    x = _as_points(x)
    _check_inside(x, c, "x")
    return 2.0 * x / (1.0 + c * _sqnorm(x))[..., None]


def klein_to_poincare(u, c) -> np.ndarray:
    c = check_curvature(c)
    u = _as_points(u, "u")
    s = 1.0 - c * _sqnorm(u)
    if np.any(s < 0.0):
        raise GeometryError("Klein point lies outside the ball")
    return u / (1.0 + np.sqrt(s))[..., None]


def lorentz_factor(x, c) -> np.ndarray | float:
    """``1/sqrt(1 - c|x|^2)`` for whatever coordinates are passed in."""
    c = check_curvature(c)
    x = _as_points(x)
    s = 1.0 - c * _sqnorm(x)
    if np.any(s <= 0.0):
        raise GeometryError("Lorentz factor undefined on or outside the ball")
    g = 1.0 / np.sqrt(s)
    return float(g) if g.ndim == 0 else g


def einstein_midpoint(points, c) -> np.ndarray:
    """Lorentz-weighted mean computed in the Klein model, returned in Poincaré coordinates.

    The weights are the Lorentz factors of the Klein vectors. Sums run over
    the stored order of ``points`` so the result is deterministic.
    """
    c = check_curvature(c)
    p = _as_points(points, "points")
    if p.ndim != 2:
        raise ShapeMismatchError(f"points must be an (N, d) array, got shape {p.shape}")
    if p.shape[0] == 0:
        raise GeometryError("Einstein midpoint of an empty set is undefined")
    u = poincare_to_klein(p, c)
    gamma = lorentz_factor(u, c)
    gamma = np.atleast_1d(gamma)
    u_bar = np.sum(gamma[:, None] * u, axis=0) / np.sum(gamma)
    return klein_to_poincare(u_bar, c)
