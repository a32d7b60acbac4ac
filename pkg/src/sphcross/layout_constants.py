"""Layout constants: the single-pair crossing probability delta, and for each product
type w, pi_w = P(both pairs cross) and gamma_w = pi_w - delta**2.

For the uniform spherical layout ("rsa") the types 00, 01, 04, 12, 24 are known
in closed form. Types 021, 03, 13 and 022 are obtained by adaptive cubature over the
triangle parameters (alpha, beta, c) or (alpha, beta, beta', c, c'), where c
ranges over (0, pi) and the mirror-image half (-pi, 0) is folded in as a
factor of 2 per angle.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate

from .product_types import OMEGA
from .spherical_trig import crossing_prob_unchecked, g_unchecked

PI = math.pi
PI12_EXACT = (PI**2 - 4) / (32 * PI**2)

INTEGRATED_TYPES = ("021", "13", "03", "022")
DIMENSION = {"12": 1, "021": 3, "13": 3, "03": 3, "022": 5}

# Published cubature values; these differ from a high-accuracy evaluation by
# up to 2e-5 for 022, 03 and 13 and are kept only to reproduce published analyses.
PUBLISHED_PI = {"021": 0.012665, "022": 0.018566, "03": 0.010401, "13": 0.031265}


class CubatureNotConverged(RuntimeError):
    def __init__(self, omega, estimate, error, tolerance):
        super().__init__(
            f"cubature for pi_{omega} did not reach {tolerance:g}: "
            f"best estimate {estimate:.9f} +/- {error:.2e}"
        )
        self.omega = omega
        self.estimate = estimate
        self.error = error
        self.tolerance = tolerance


@dataclass(frozen=True)
class CubatureSpec:
    dimension: int
    target_abs_tolerance: float
    max_evaluations: int = 50_000_000

    def __post_init__(self):
        if self.dimension not in (1, 3, 5):
            raise ValueError("dimension must be 1, 3 or 5")
        if not self.target_abs_tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_evaluations < 1:
            raise ValueError("max_evaluations must be positive")


DEFAULT_SPECS = {
    1: CubatureSpec(1, 1e-12),
    3: CubatureSpec(3, 5e-7),
    5: CubatureSpec(5, 5e-6),
}
FALLBACK_TOL_5D = 5e-5


@dataclass
class LayoutConstants:
    layout_tag: str
    delta: float
    pi: dict[str, float] = field(default_factory=dict)
    gamma: dict[str, float] = field(default_factory=dict)
    provenance: dict[str, str] = field(default_factory=dict)
    error: dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_pi(cls, layout_tag, delta, pi, provenance, error=None) -> LayoutConstants:
        gamma = {w: p - delta**2 for w, p in pi.items()}
        return cls(layout_tag, delta, dict(pi), gamma, dict(provenance), dict(error or {}))

    @classmethod
    def from_gamma(cls, layout_tag, delta, gamma, provenance) -> LayoutConstants:
        pi = {w: gm + delta**2 for w, gm in gamma.items()}
        return cls(layout_tag, delta, pi, dict(gamma), dict(provenance))

    def to_dict(self) -> dict:
        order = [w for w in OMEGA if w in self.gamma or w in self.pi]
        d = {
            "layout": self.layout_tag,
            "delta": self.delta,
            "pi": {w: self.pi[w] for w in order if w in self.pi},
            "gamma": {w: self.gamma[w] for w in order if w in self.gamma},
            "provenance": {w: self.provenance[w] for w in order if w in self.provenance},
        }
        if self.error:
            d["error"] = {w: self.error[w] for w in order if w in self.error}
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> LayoutConstants:
        return cls(d["layout"], float(d["delta"]), dict(d.get("pi", {})),
                   dict(d.get("gamma", {})), dict(d.get("provenance", {})),
                   dict(d.get("error", {})))

    @classmethod
    def from_json(cls, text: str) -> LayoutConstants:
        return cls.from_dict(json.loads(text))

    def provenance_summary(self) -> str:
        return f"{self.layout_tag}:" + ",".join(f"{w}={self.provenance.get(w, '?')}" for w in OMEGA)


# -- integrands ---------------------------------------------------------------

def _cross(x, y, c):
    """P(random arc from A crosses BC) with sides |BC| = x, |AC| = y and angle c at C."""
    return crossing_prob_unchecked(g_unchecked(x, y, c), g_unchecked(y, x, c), c)


def _f12(X):
    al = X[:, 0]
    return (al / (4 * PI)) ** 2 * 0.5 * np.sin(al)


def _f021(X):
    al, be, c = X[:, 0], X[:, 1], X[:, 2]
    return 2 * _cross(al, be, c) * be / (4 * PI) * np.sin(al) * np.sin(be) / (8 * PI)


def _f13(X):
    al, be, c = X[:, 0], X[:, 1], X[:, 2]
    return 2 * _cross(al, be, c) ** 2 * np.sin(al) * np.sin(be) / (8 * PI)


def _f03(X):
    al, be, c = X[:, 0], X[:, 1], X[:, 2]
    return 2 * _cross(al, be, c) * _cross(be, al, c) * np.sin(al) * np.sin(be) / (8 * PI)


def _f022(X):
    al, be, be2, c, c2 = X.T
    return (4 * _cross(be, al, c) * _cross(be2, al, c2)
            * np.sin(al) * np.sin(be) * np.sin(be2) / (32 * PI**2))


INTEGRANDS = {"12": _f12, "021": _f021, "13": _f13, "03": _f03, "022": _f022}


def _points_per_region(d: int) -> int:
    if d == 1:
        return 21  # Gauss-Kronrod 21
    return 2**d + 2 * d * d + 2 * d + 1  # Genz-Malik degree 7


@lru_cache(maxsize=64)
def integrate_pi(omega: str, spec: CubatureSpec | None = None) -> tuple[float, float]:
    """Adaptive cubature of pi_omega; returns ``(value, error_bound)``."""
    if omega not in INTEGRANDS:
        raise ValueError(f"no integral representation for type {omega!r}")
    d = DIMENSION[omega]
    spec = spec or DEFAULT_SPECS[d]
    if spec.dimension != d:
        raise ValueError(f"pi_{omega} is a {d}-dimensional integral, spec says {spec.dimension}")
    # each subdivision splits a region into 2**d children, one rule application each
    max_sub = max(1, spec.max_evaluations // (2**d * _points_per_region(d)))
    res = integrate.cubature(
        INTEGRANDS[omega], np.zeros(d), np.full(d, PI),
        rule="gk21" if d == 1 else "genz-malik",
        atol=spec.target_abs_tolerance, rtol=0.0, max_subdivisions=max_sub,
    )
    value, err = float(res.estimate), float(res.error)
    if not err <= spec.target_abs_tolerance:
        raise CubatureNotConverged(omega, value, err, spec.target_abs_tolerance)
    return value, err


# -- constant sets ------------------------------------------------------------

def _rsa_exact() -> tuple[dict, dict]:
    pi = {"00": 1 / 64, "01": 1 / 64, "04": 0.0, "12": PI12_EXACT, "24": 1 / 8}
    return pi, {w: "exact" for w in pi}


def rsa_constants(specs: dict[int, CubatureSpec] | None = None) -> LayoutConstants:
    """Uniform spherical layout: exact entries plus integrated 021, 13, 03, 022."""
    specs = {**DEFAULT_SPECS, **(specs or {})}
    pi, prov = _rsa_exact()
    err = {}
    for w in INTEGRATED_TYPES:
        spec = specs[DIMENSION[w]]
        pi[w], err[w] = integrate_pi(w, spec)
        prov[w] = f"integrated({spec.target_abs_tolerance:g})"
    c = LayoutConstants.from_pi("rsa", 1 / 8, pi, prov, err)
    # exact gammas written literally rather than as pi - 1/64
    c.gamma.update({"00": 0.0, "01": 0.0, "04": -1 / 64, "24": 7 / 64,
                    "12": (PI**2 - 8) / (64 * PI**2)})
    return c


@lru_cache(maxsize=1)
def default_rsa_constants() -> LayoutConstants:
    return rsa_constants()


def published_rsa_constants() -> LayoutConstants:
    """rsa constants with the published six-decimal cubature values for 021, 022, 03, 13."""
    pi, prov = _rsa_exact()
    pi.update(PUBLISHED_PI)
    prov.update({w: "external" for w in PUBLISHED_PI})
    c = LayoutConstants.from_pi("custom", 1 / 8, pi, prov)
    c.gamma.update({"00": 0.0, "01": 0.0, "04": -1 / 64, "24": 7 / 64})
    return c


def moon_hypothesis_constants() -> LayoutConstants:
    """The gammas implied by Moon's 1965 variance: 021, 022, 03 assumed null, gamma_13 = gamma_12."""
    k = (PI**2 - 8) / (64 * PI**2)
    gamma = {"00": 0.0, "01": 0.0, "021": 0.0, "022": 0.0, "03": 0.0,
             "04": -1 / 64, "12": k, "13": k, "24": 7 / 64}
    return LayoutConstants.from_gamma("custom", 1 / 8, gamma, {w: "external" for w in gamma})


def rla_constants() -> LayoutConstants:
    """Uniform linear arrangement: only delta is carried; its gammas are not stored."""
    return LayoutConstants("rla", 1 / 3, provenance={"delta": "exact"})


def anchored_cross_prob(rho):
    """P(arc s-t crosses arc u-v) for fixed s, u at distance rho and uniform t, v.

    The closed form (pi - rho) / (4 pi) agrees with direct quadrature and with
    simulation. Integrated against the arc-length density it gives
    pi_022 = pi_12 and pi_021 = 1/32 - pi_12.
    """
    return (PI - np.asarray(rho, dtype=float)) / (4 * PI)
