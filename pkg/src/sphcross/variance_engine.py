"""Expectation and variance of the crossing count C.

Var(C) = sum_w f_w * gamma_w, with graph counts f_w and layout constants gamma_w.
Also Moon's 1965 formulas for K_n and K_{n1,n2}, the deviation between the two,
and the reference results for the uniform linear arrangement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np

from .layout_constants import LayoutConstants, default_rsa_constants, rla_constants
from .product_types import (GraphSpec, TypeCensus, UnsupportedGraph, census_bruteforce,
                            census_closed_form, q_size)

PI = math.pi
MOON1977_COMPLETE = (PI**2 - 8) / (512 * PI**2)
MOON1977_BIPARTITE = (PI**2 - 8) / (128 * PI**2)


class MissingConstant(KeyError):
    pass


@dataclass(frozen=True)
class MomentReport:
    expectation: float
    variance: float
    method: str
    constants_used: str


def _k(k: LayoutConstants | None) -> LayoutConstants:
    return default_rsa_constants() if k is None else k


def expectation(g: GraphSpec, k: LayoutConstants | None = None) -> float:
    return q_size(g) * _k(k).delta


def variance_general(census: TypeCensus, k: LayoutConstants | None = None) -> float:
    k = _k(k)
    total = 0.0
    for w, f in census.items():
        if f == 0:
            continue
        if w not in k.gamma:
            raise MissingConstant(f"gamma_{w} not available for layout {k.layout_tag!r}")
        total += f * k.gamma[w]
    return total


def variance_complete_rsa(n: int, k: LayoutConstants | None = None) -> float:
    """Var(C(K_n)) from the structured complete-graph form."""
    G = _k(k).gamma
    m = n - 4
    inner = (m * (m - 1) * (G["12"] + 4 * (G["021"] + G["022"]))
             + 4 * m * (G["13"] + 2 * G["03"]) + 2 * G["04"] + G["24"])
    return 3 * comb(n, 4) * inner


def variance_bipartite_rsa(n1: int, n2: int, k: LayoutConstants | None = None) -> float:
    """Var(C(K_{n1,n2})) from the structured complete-bipartite form."""
    G = _k(k).gamma
    C = comb
    return (2 * (G["24"] + G["04"]) * C(n1, 2) * C(n2, 2)
            + 12 * (G["03"] + G["13"]) * (C(n1, 3) * C(n2, 2) + C(n1, 2) * C(n2, 3))
            + 36 * (G["12"] + G["022"] + 2 * G["021"]) * C(n1, 3) * C(n2, 3)
            + 24 * G["022"] * (C(n1, 4) * C(n2, 2) + C(n1, 2) * C(n2, 4)))


def variance_complete_rounded(n: int) -> float:
    """The published rounded-coefficient approximation, for cross-checks only."""
    return 3 * comb(n, 4) * ((n - 4) * (0.0029 * (n - 5) + 0.021) + 5 / 64)


def variance_bipartite_rounded(n1: int, n2: int) -> float:
    C = comb
    return (3 / 16 * C(n1, 2) * C(n2, 2) - 0.00068 * C(n1, 3) * C(n2, 3)
            + 0.12 * (C(n1, 3) * C(n2, 2) + C(n1, 2) * C(n2, 3))
            + 0.07 * (C(n1, 4) * C(n2, 2) + C(n1, 2) * C(n2, 4)))


def moon_variance_complete(n: int) -> float:
    return 3 * comb(n, 4) * (5 / 64 + (PI**2 - 8) / (64 * PI**2) * (n - 4) * (n - 1))


def moon_variance_bipartite(n1: int, n2: int) -> float:
    return (comb(n1, 2) * comb(n2, 2) / (16 * PI**2)
            * ((n1 - 1) * (n2 - 1) * (PI**2 - 8) + 2 * (PI**2 + 4)))


def deviation_complete(n: int, k: LayoutConstants | None = None) -> float:
    """Ours minus Moon's for K_n; positive means Moon underestimates."""
    return variance_complete_rsa(n, k) - moon_variance_complete(n)


def deviation_bipartite(n1: int, n2: int, k: LayoutConstants | None = None) -> float:
    return variance_bipartite_rsa(n1, n2, k) - moon_variance_bipartite(n1, n2)


def sign(x: float) -> int:
    return -1 if x < 0 else 1


def deviation_sign_map(n1_range, n2_range, k: LayoutConstants | None = None) -> np.ndarray:
    """Grid of deviation signs (+1 / -1, zero counted as +1); rows follow ``n1_range``."""
    k = _k(k)
    return np.array([[sign(deviation_bipartite(a, b, k)) for b in n2_range] for a in n1_range],
                    dtype=np.int8)


def rla_reference(g: GraphSpec) -> MomentReport:
    delta = rla_constants().delta
    if g.kind == "complete":
        var = 0.0
    elif g.kind == "complete_bipartite":
        a, b = g.n1, g.n2
        var = comb(a, 2) * comb(b, 2) * ((a + b) ** 2 + a + b) / 90
    else:
        raise UnsupportedGraph("rla reference variances exist only for K_n and K_{n1,n2}")
    return MomentReport(q_size(g) * delta, var, "rla_reference", "rla:delta=exact")


def moments(g: GraphSpec, k: LayoutConstants | None = None, method: str = "closed_form") -> MomentReport:
    """Expectation and variance of C for ``g`` by the requested method."""
    k = _k(k)
    if method == "closed_form":
        if g.kind == "complete":
            var = variance_complete_rsa(g.n, k)
        elif g.kind == "complete_bipartite":
            var = variance_bipartite_rsa(g.n1, g.n2, k)
        else:
            raise UnsupportedGraph("closed-form variance needs K_n or K_{n1,n2}")
    elif method == "general_sum":
        census = census_bruteforce(g) if g.kind == "edge_list" else census_closed_form(g)
        var = variance_general(census, k)
        if var < -1e-9 * max(1.0, abs(var)):
            raise ArithmeticError(f"negative variance {var} from constants {k.layout_tag}")
    elif method == "moon_1965":
        if g.kind == "complete":
            var = moon_variance_complete(g.n)
        elif g.kind == "complete_bipartite":
            var = moon_variance_bipartite(g.n1, g.n2)
        else:
            raise UnsupportedGraph("Moon's formulas cover K_n and K_{n1,n2} only")
    elif method == "rla_reference":
        return rla_reference(g)
    else:
        raise ValueError(f"unknown method {method!r}")
    return MomentReport(expectation(g, k), var, method, k.provenance_summary())


def moon1977_leading_coefficient_check(n_probe: int, k: LayoutConstants | None = None) -> tuple[float, float]:
    """``(Var(K_n) / n**6, (pi^2 - 8) / (512 pi^2))`` at ``n = n_probe``."""
    return variance_complete_rsa(n_probe, k) / float(n_probe) ** 6, MOON1977_COMPLETE


def moon1977_bipartite_check(m: int, k: LayoutConstants | None = None) -> tuple[float, float]:
    """Balanced bipartite analogue: ``Var(K_{m,m}) / (m^4 * 2 m^2)`` against its target."""
    return variance_bipartite_rsa(m, m, k) / (float(m) ** 4 * 2 * float(m) ** 2), MOON1977_BIPARTITE
