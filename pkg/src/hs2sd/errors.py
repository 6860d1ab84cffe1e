"""Exception classes shared across the package.

Each class carries a short ``token`` used as the stderr prefix by the CLI and
an ``exit_code`` that the CLI returns when the error escapes a subcommand.
"""

from __future__ import annotations


class HS2SDError(ValueError):
    token = "error"
    exit_code = 1


class InputError(HS2SDError):
    """Bad user input: unknown ids, malformed files, invalid parameters."""

    token = "input"
    exit_code = 2


class GeometryError(HS2SDError):
    """A point or metric violates the hyperbolic model's constraints."""

    token = "geometry"
    exit_code = 3


class ShapeMismatchError(HS2SDError):
    """Operands are not conformable (cardinality, dimension, weight shapes)."""

    token = "shape"
    exit_code = 4
