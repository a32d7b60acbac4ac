"""Spherical trigonometry on the unit sphere.

Angles a, b, c sit at vertices A, B, C; side lengths alpha = |BC|, beta = |AC|,
gamma = |AB|. Functions accept scalars or numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BOUNDARY_TOL = 1e-12


class DomainError(ValueError):
    pass


def _open_interval(name, x, lo=0.0, hi=np.pi, tol=BOUNDARY_TOL):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= lo + tol) or np.any(arr >= hi - tol):
        raise DomainError(f"{name} must lie in ({lo}, {hi})")
    return arr


def _closed_interval(name, x, lo=0.0, hi=np.pi):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < lo) or np.any(arr > hi):
        raise DomainError(f"{name} must lie in [{lo}, {hi}]")
    return arr


def arccot(t):
    """Inverse cotangent with range (0, pi)."""
    return np.pi / 2 - np.arctan(t)


@dataclass(frozen=True)
class SphericalTriangleAngles:
    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            _open_interval(name, getattr(self, name), tol=0.0)
        if self.a + self.b + self.c <= np.pi:
            raise DomainError("angles of a spherical triangle sum to more than pi")


@dataclass(frozen=True)
class SphericalTriangleSides:
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            _open_interval(name, getattr(self, name), tol=0.0)


def g_unchecked(x, y, z):
    """:func:`g` without domain checks, for integrands evaluated at interior nodes."""
    return arccot((np.sin(y) / np.tan(x) - np.cos(y) * np.cos(z)) / np.sin(z))


def g(x, y, z):
    """Angle opposite side ``x`` given sides ``x, y`` and their included angle ``z``.

    arccot((cot x sin y - cos y cos z) / sin z), from the four-part cotangent
    relation cot(x) sin(y) = cos(y) cos(z) + sin(z) cot(angle).
    """
    return g_unchecked(_open_interval("x", x), _open_interval("y", y), _open_interval("z", z))


def angles_from_two_sides_and_included_angle(alpha, beta, c):
    """Angles ``(a, b)`` at A and B from sides ``alpha = |BC|``, ``beta = |AC|`` and angle ``c`` at C."""
    return g(alpha, beta, c), g(beta, alpha, c)


def lune_area(angle):
    return 2.0 * _closed_interval("angle", angle, 0.0, np.pi)


def triangle_area(angles: SphericalTriangleAngles) -> float:
    return angles.a + angles.b + angles.c - np.pi


def crossing_prob_unchecked(a, b, c):
    return (a - b - c + np.pi) / (4.0 * np.pi)


def crossing_prob_given_triangle(angles: SphericalTriangleAngles) -> float:
    """P(arc AP crosses arc BC) for uniform P: area of triangle (A', B, C) over 4 pi."""
    return float(crossing_prob_unchecked(angles.a, angles.b, angles.c))


def arc_length_density(alpha):
    """Density of the distance between two independent uniform points."""
    return 0.5 * np.sin(_closed_interval("alpha", alpha))


def cross_prob_given_length(alpha):
    """P(random arc crosses a fixed arc of length alpha)."""
    return _closed_interval("alpha", alpha) / (4.0 * np.pi)


def vertex_angle(P, Q, R) -> float:
    """Angle at vertex P of the spherical triangle PQR, from explicit coordinates."""
    P, Q, R = (np.asarray(v, dtype=float) for v in (P, Q, R))
    n1 = np.cross(P, Q)
    n2 = np.cross(P, R)
    return float(np.arctan2(np.linalg.norm(np.cross(n1, n2)), n1 @ n2))
