"""Points on the unit sphere: construction, uniform sampling, axis rotations, octants."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12


class Axis(enum.Enum):
    OX = 0
    OY = 1
    OZ = 2


@dataclass(frozen=True)
class UnitVector:
    """A point on the unit sphere. Coordinates are re-normalized on construction."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        x, y, z = float(self.x), float(self.y), float(self.z)
        if not all(math.isfinite(c) for c in (x, y, z)):
            raise ValueError(f"non-finite coordinates ({x}, {y}, {z})")
        r = math.sqrt(x * x + y * y + z * z)
        if r == 0.0:
            raise ValueError("cannot normalize the zero vector")
        if abs(r - 1.0) > NORM_TOL:
            x, y, z = x / r, y / r, z / r
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)

    @classmethod
    def from_array(cls, a) -> UnitVector:
        return cls(float(a[0]), float(a[1]), float(a[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __neg__(self) -> UnitVector:
        return UnitVector(-self.x, -self.y, -self.z)


@dataclass(frozen=True)
class OctantSignature:
    sx: int
    sy: int
    sz: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.sx, self.sy, self.sz)


def angle_between(p: UnitVector, q: UnitVector) -> float:
    """Great-circle distance, via atan2 so it stays accurate near 0 and pi."""
    a, b = p.as_array(), q.as_array()
    return math.atan2(float(np.linalg.norm(np.cross(a, b))), float(a @ b))


# -- sampling -----------------------------------------------------------------

def make_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent reproducible stream for ``(seed, *key)``.

    Streams with different keys are statistically independent (SeedSequence
    spawn keys), so Monte Carlo blocks can be generated in any order.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def points_from_uniforms(u, v) -> np.ndarray:
    """Inverse-CDF map of ``u, v in [0, 1]`` to the sphere.

    Azimuth ``2*pi*u`` and ``z = 2v - 1``, which makes ``z`` uniform and hence the
    point uniform on the sphere (Archimedes). Returns shape ``u.shape + (3,)``.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    theta = 2.0 * np.pi * u
    z = np.clip(2.0 * v - 1.0, -1.0, 1.0)
    r = np.sqrt(1.0 - z * z)  # sin(arccos z)
    return np.stack([np.cos(theta) * r, np.sin(theta) * r, z], axis=-1)


def random_unit_points(rng: np.random.Generator, size) -> np.ndarray:
    """Array of uniform points on the sphere, shape ``size + (3,)``."""
    if isinstance(size, int):
        size = (size,)
    uv = rng.random(tuple(size) + (2,))
    return points_from_uniforms(uv[..., 0], uv[..., 1])


def random_unit_point(rng: np.random.Generator) -> UnitVector:
    u, v = rng.random(2)
    return UnitVector.from_array(points_from_uniforms(u, v))


# -- rotations and octants ----------------------------------------------------

def rotation_matrix(axis: Axis, theta: float) -> np.ndarray:
    if not math.isfinite(theta):
        raise ValueError("rotation angle must be finite")
    c, s = math.cos(theta), math.sin(theta)
    if axis is Axis.OX:
        return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
    if axis is Axis.OY:
        return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rotate(p: UnitVector, axis: Axis, theta: float) -> UnitVector:
    return UnitVector.from_array(rotation_matrix(axis, theta) @ p.as_array())


def rotation_angles(l: int) -> list[float]:
    """Angles ``i*pi / (2(l+1))`` for ``i = 1..l``."""
    return [i * math.pi / (2 * (l + 1)) for i in range(1, l + 1)]


def rotation_stack(l: int) -> np.ndarray:
    """Identity followed by the 3l filter rotations, shape ``(1 + 3l, 3, 3)``."""
    mats = [np.eye(3)]
    for theta in rotation_angles(l):
        mats.extend(rotation_matrix(ax, theta) for ax in Axis)
    return np.stack(mats)


def _sgn(c: float) -> int:
    return -1 if c < 0 else 1


def octant(p: UnitVector) -> OctantSignature:
    """Component-wise sign, with sgn(0) = +1."""
    return OctantSignature(_sgn(p.x), _sgn(p.y), _sgn(p.z))


def octant_positive(points: np.ndarray) -> np.ndarray:
    """Vectorized octant: True where the component sign is +1 (zero included)."""
    return ~(np.asarray(points) < 0)


def octant_index(points: np.ndarray) -> np.ndarray:
    """Octant as an integer in 0..7 (bit k set when coordinate k is negative)."""
    neg = np.asarray(points) < 0
    return neg[..., 0] * 1 + neg[..., 1] * 2 + neg[..., 2] * 4
