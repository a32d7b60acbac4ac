"""Great-arc intersection on the unit sphere.

Two minor arcs ``ST`` and ``UV`` intersect when the planar triangles ``(O, S, T)``
and ``(O, U, V)`` meet somewhere other than the origin ``O``. The decision uses
the four orientation determinants

    d1 = det(U, V, S)   d2 = det(U, V, T)   d3 = det(S, T, U)   d4 = det(S, T, V)

plus a hemisphere check on the candidate point ``(S x T) x (U x V)``. Any
determinant with magnitude below ``DET_EPS`` is treated as zero and sent to the
degenerate-case classifier (shared or incident endpoints, cocircular arcs).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .geom_core import UnitVector, octant, rotation_stack

DET_EPS = 1e-13
DEGENERACY_TOL = 1e-9


class DegenerateArc(ValueError):
    """Arc endpoints coincide or are antipodal, so the minor arc is undefined."""


class Kind(str, enum.Enum):
    PROPER = "proper"
    ENDPOINT_TOUCH = "endpoint_touch"
    COCIRCULAR_OVERLAP = "cocircular_overlap"
    NONE = "none"


class FilterVerdict(str, enum.Enum):
    CERTAINLY_DISJOINT = "certainly_disjoint"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class GreatArc:
    a: UnitVector
    b: UnitVector

    def __post_init__(self):
        pa, pb = self.a.as_array(), self.b.as_array()
        if np.linalg.norm(pa - pb) <= DEGENERACY_TOL:
            raise DegenerateArc("arc endpoints coincide")
        if np.linalg.norm(pa + pb) <= DEGENERACY_TOL:
            raise DegenerateArc("arc endpoints are antipodal")

    @classmethod
    def from_points(cls, a, b) -> GreatArc:
        return cls(UnitVector.from_array(a), UnitVector.from_array(b))


@dataclass(frozen=True)
class IntersectVerdict:
    crossing: bool
    kind: Kind

    def __post_init__(self):
        if self.crossing != (self.kind is not Kind.NONE):
            raise ValueError("crossing must be true exactly when kind is not 'none'")


@dataclass(frozen=True)
class FilterConfig:
    l: int = 1
    degeneracy_epsilon: float = DET_EPS
    _rotations: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.l < 0:
            raise ValueError("l must be non-negative")
        object.__setattr__(self, "_rotations", rotation_stack(self.l))

    @property
    def rotations(self) -> np.ndarray:
        """Identity plus the 3l rotation matrices."""
        return self._rotations


NO_CROSSING = IntersectVerdict(False, Kind.NONE)


def _det(a, b, c) -> float:
    return float(np.dot(a, np.cross(b, c)))


def _on_closed_arc(x, s, t, tol: float = 1e-12) -> bool:
    """Whether x, already known to lie on the great circle of ``st``, lies on the minor arc."""
    n = np.cross(s, t)
    return float(np.dot(np.cross(s, x), n)) >= -tol and float(np.dot(np.cross(x, t), n)) >= -tol


def _cocircular(s, t, u, v, tol: float = 1e-12) -> IntersectVerdict:
    n = np.cross(s, t)
    n /= np.linalg.norm(n)
    e1 = s
    e2 = np.cross(n, s)

    def ang(p):
        return math.atan2(float(p @ e2), float(p @ e1))

    len1 = ang(t)  # in (0, pi) by construction of e2
    start, end = ang(u), ang(v)
    span = math.remainder(end - start, 2 * math.pi)
    if span < 0:
        start, span = end, -span
    best = -math.inf
    for k in (-1, 0, 1):
        lo = start + 2 * math.pi * k
        best = max(best, min(len1, lo + span) - max(0.0, lo))
    if best > tol:
        return IntersectVerdict(True, Kind.COCIRCULAR_OVERLAP)
    if best >= -tol:
        return IntersectVerdict(True, Kind.ENDPOINT_TOUCH)
    return NO_CROSSING


def arcs_intersect(a1: GreatArc, a2: GreatArc, eps: float = DET_EPS) -> IntersectVerdict:
    """Classify the intersection of two minor arcs."""
    s, t = a1.a.as_array(), a1.b.as_array()
    u, v = a2.a.as_array(), a2.b.as_array()
    d1, d2 = _det(u, v, s), _det(u, v, t)
    d3, d4 = _det(s, t, u), _det(s, t, v)
    z1, z2, z3, z4 = (abs(d) < eps for d in (d1, d2, d3, d4))

    if (z3 and z4) or (z1 and z2):
        return _cocircular(s, t, u, v)
    if z1 or z2 or z3 or z4:
        # the arc with the off-plane endpoint meets the other plane at most once,
        # so the only possible contact is a zero-determinant endpoint
        touches = (
            (z1 and _on_closed_arc(s, u, v))
            or (z2 and _on_closed_arc(t, u, v))
            or (z3 and _on_closed_arc(u, s, t))
            or (z4 and _on_closed_arc(v, s, t))
        )
        return IntersectVerdict(True, Kind.ENDPOINT_TOUCH) if touches else NO_CROSSING
    if d1 * d2 < 0 and d3 * d4 < 0:
        p = np.cross(np.cross(s, t), np.cross(u, v))
        if float(p @ (s + t)) * float(p @ (u + v)) > 0:
            return IntersectVerdict(True, Kind.PROPER)
    return NO_CROSSING


def fast_reject(a1: GreatArc, a2: GreatArc, cfg: FilterConfig | None = None) -> FilterVerdict:
    """Cheap sufficient test for disjointness; never rejects a crossing pair."""
    cfg = cfg or FilterConfig()
    pts = np.array([a1.a.as_array(), a1.b.as_array(), a2.a.as_array(), a2.b.as_array()])
    for R in cfg.rotations:
        s, t, u, v = (octant(UnitVector.from_array(p)) for p in pts @ R.T)
        if s == t and u == v and s != u:
            return FilterVerdict.CERTAINLY_DISJOINT
        for c in range(3):
            cs, ct, cu, cv = (o.as_tuple()[c] for o in (s, t, u, v))
            if cs == ct and cu == cv and cs != cu:
                return FilterVerdict.CERTAINLY_DISJOINT
    n = np.cross(pts[0], pts[1])
    d3, d4 = float(n @ pts[2]), float(n @ pts[3])
    eps = cfg.degeneracy_epsilon
    if (d3 > eps and d4 > eps) or (d3 < -eps and d4 < -eps):
        return FilterVerdict.CERTAINLY_DISJOINT
    return FilterVerdict.UNKNOWN


def reference_intersect(a1: GreatArc, a2: GreatArc, tol: float = 1e-9) -> bool:
    """Slow oracle: intersect the two great circles explicitly, then test arc membership.

    Membership of ``p`` in arc ``ST`` is ``|Sp| + |pT| = |ST|`` in angular distance.
    Meant for pairs away from degeneracy; cocircular pairs are not handled.
    """
    s, t = a1.a.as_array(), a1.b.as_array()
    u, v = a2.a.as_array(), a2.b.as_array()
    p = np.cross(np.cross(s, t), np.cross(u, v))
    p = p / np.linalg.norm(p)

    def dist(x, y):
        return math.atan2(float(np.linalg.norm(np.cross(x, y))), float(x @ y))

    def member(x, a, b):
        return abs(dist(a, x) + dist(x, b) - dist(a, b)) < tol

    return any(member(c, s, t) and member(c, u, v) for c in (p, -p))


# -- vectorized paths used by the simulation --------------------------------

def _rowdot(a, b):
    return np.einsum("...i,...i->...", a, b)


def crossing_batch(S, T, U, V, eps: float = DET_EPS) -> np.ndarray:
    """Vectorized ``arcs_intersect(...).crossing`` over arrays of shape ``(..., 3)``.

    Pairs near a degenerate configuration are re-decided by the scalar classifier.
    """
    S, T, U, V = (np.asarray(x, dtype=float) for x in (S, T, U, V))
    n1 = np.cross(S, T)
    n2 = np.cross(U, V)
    d1, d2 = _rowdot(n2, S), _rowdot(n2, T)
    d3, d4 = _rowdot(n1, U), _rowdot(n1, V)
    p = np.cross(n1, n2)
    h = _rowdot(p, S + T) * _rowdot(p, U + V)
    out = (d1 * d2 < 0) & (d3 * d4 < 0) & (h > 0)
    degenerate = np.minimum(np.minimum(np.abs(d1), np.abs(d2)), np.minimum(np.abs(d3), np.abs(d4))) < eps
    if degenerate.any():
        for idx in zip(*np.nonzero(degenerate)):
            a1 = GreatArc.from_points(S[idx], T[idx])
            a2 = GreatArc.from_points(U[idx], V[idx])
            out[idx] = arcs_intersect(a1, a2, eps).crossing
    return out


def octant_signatures(points: np.ndarray, cfg: FilterConfig) -> np.ndarray:
    """Sign bits of every point under the identity and each filter rotation.

    Input ``(..., 3)``; output boolean ``(..., 1 + 3l, 3)``, True for sign +1.
    """
    rotated = np.einsum("rij,...j->...ri", cfg.rotations, points)
    return ~(rotated < 0)


def fast_reject_batch(sig_s, sig_t, sig_u, sig_v, d3, d4, eps: float = DET_EPS) -> np.ndarray:
    """Vectorized filter; True marks pairs that are certainly disjoint.

    ``sig_*`` come from :func:`octant_signatures`. Only the coordinate-plane
    separation is tested on the signatures, since "different octants" implies it.
    """
    sep = (sig_s == sig_t) & (sig_u == sig_v) & (sig_s != sig_u)
    sep = sep.any(axis=(-1, -2))
    half = ((d3 > eps) & (d4 > eps)) | ((d3 < -eps) & (d4 < -eps))
    return sep | half
