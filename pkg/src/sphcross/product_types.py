"""Independent edge pairs and the classification of their products.

An element of Q is an unordered pair of vertex-disjoint edges. An ordered pair
``(q1, q2)`` of elements of Q has a type determined by

    tau = |{e1, e2} & {e3, e4}|      (shared edges)
    phi = |(e1 | e2) & (e3 | e4)|    (shared vertices)

with the (tau, phi) = (0, 2) tie split into 021 / 022 by whether the two shared
vertices sit in a single edge of one of the pairs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from pathlib import Path

import networkx as nx
import numpy as np

OMEGA = ("00", "01", "021", "022", "03", "04", "12", "13", "24")
OMEGA_INDEX = {w: i for i, w in enumerate(OMEGA)}

# code -> (tau, phi, number of distinct vertices)
TYPE_TABLE = {
    "00": (0, 0, 8),
    "01": (0, 1, 7),
    "021": (0, 2, 6),
    "022": (0, 2, 6),
    "03": (0, 3, 5),
    "04": (0, 4, 4),
    "12": (1, 2, 6),
    "13": (1, 3, 5),
    "24": (2, 4, 4),
}

# multiplicity a_w and the union subgraph F_w, as (path orders, cycle orders)
SUBGRAPH_TABLE = {
    "00": (6, (2, 2, 2, 2), ()),
    "01": (4, (3, 2, 2), ()),
    "021": (2, (4, 2), ()),
    "022": (4, (3, 3), ()),
    "03": (2, (5,), ()),
    "04": (2, (), (4,)),
    "12": (6, (2, 2, 2), ()),
    "13": (2, (3, 2), ()),
    "24": (1, (2, 2), ()),
}

_BY_TAU_PHI = {(0, 0): "00", (0, 1): "01", (0, 3): "03", (0, 4): "04",
               (1, 2): "12", (1, 3): "13", (2, 4): "24"}


class UnsupportedGraph(ValueError):
    pass


class ResourceLimit(RuntimeError):
    pass


Edge = tuple[int, int]


def _edge(u: int, v: int) -> Edge:
    u, v = int(u), int(v)
    if u == v:
        raise ValueError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class GraphSpec:
    """Complete ``K_n``, complete bipartite ``K_{n1,n2}`` or an explicit edge list."""

    kind: str
    n: int = 0
    n1: int = 0
    n2: int = 0
    num_vertices: int = 0
    edges: tuple[Edge, ...] = ()

    @classmethod
    def complete(cls, n: int) -> GraphSpec:
        if n < 1:
            raise ValueError("n must be >= 1")
        edges = tuple(itertools.combinations(range(n), 2))
        return cls("complete", n=n, num_vertices=n, edges=edges)

    @classmethod
    def complete_bipartite(cls, n1: int, n2: int) -> GraphSpec:
        if n1 < 1 or n2 < 1:
            raise ValueError("n1, n2 must be >= 1")
        edges = tuple((i, n1 + j) for i in range(n1) for j in range(n2))
        return cls("complete_bipartite", n1=n1, n2=n2, num_vertices=n1 + n2, edges=edges)

    @classmethod
    def edge_list(cls, edges, num_vertices: int | None = None) -> GraphSpec:
        norm = [_edge(u, v) for u, v in edges]
        if len(set(norm)) != len(norm):
            raise ValueError("duplicate edges")
        nv = max((max(e) for e in norm), default=-1) + 1
        if num_vertices is not None:
            if num_vertices < nv:
                raise ValueError("num_vertices smaller than largest vertex id + 1")
            nv = num_vertices
        return cls("edge_list", num_vertices=nv, edges=tuple(sorted(norm)))

    @classmethod
    def from_edge_file(cls, path) -> GraphSpec:
        """Read one ``u v`` pair per line, 0-based ids; blank lines and ``#`` comments skipped."""
        edges = []
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'u v', got {line!r}")
            edges.append((int(parts[0]), int(parts[1])))
        return cls.edge_list(edges)

    @property
    def label(self) -> str:
        if self.kind == "complete":
            return f"K_{self.n}"
        if self.kind == "complete_bipartite":
            return f"K_{{{self.n1},{self.n2}}}"
        return f"edge_list(|V|={self.num_vertices}, |E|={len(self.edges)})"


@dataclass(frozen=True, order=True)
class EdgePair:
    """Unordered pair of vertex-disjoint edges, stored canonically (e1 < e2)."""

    e1: Edge
    e2: Edge

    def __post_init__(self):
        e1, e2 = _edge(*self.e1), _edge(*self.e2)
        if set(e1) & set(e2):
            raise ValueError(f"edges {e1} and {e2} share a vertex")
        if e2 < e1:
            e1, e2 = e2, e1
        object.__setattr__(self, "e1", e1)
        object.__setattr__(self, "e2", e2)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.e1 + self.e2)


@dataclass(frozen=True)
class ProductType:
    code: str
    tau: int
    phi: int
    num_vertices: int

    @classmethod
    def of(cls, code: str) -> ProductType:
        return cls(code, *TYPE_TABLE[code])


TypeCensus = dict  # code -> f_w


def classify(q1: EdgePair, q2: EdgePair) -> ProductType:
    tau = len({q1.e1, q1.e2} & {q2.e1, q2.e2})
    shared = q1.vertices & q2.vertices
    phi = len(shared)
    if tau == 0 and phi == 2:
        in_one_edge = any(shared <= set(e) for e in (q1.e1, q1.e2, q2.e1, q2.e2))
        return ProductType.of("021" if in_one_edge else "022")
    return ProductType.of(_BY_TAU_PHI[(tau, phi)])


def enumerate_Q(g: GraphSpec) -> list[EdgePair]:
    return [EdgePair(a, b) for a, b in itertools.combinations(g.edges, 2) if not set(a) & set(b)]


def q_size(g: GraphSpec) -> int:
    if g.kind == "complete":
        return comb(g.n, 2) * comb(g.n - 2, 2) // 2
    if g.kind == "complete_bipartite":
        return 2 * comb(g.n1, 2) * comb(g.n2, 2)
    return len(enumerate_Q(g))


def q_index_array(g: GraphSpec) -> tuple[np.ndarray, np.ndarray]:
    """Edges as an ``(m, 2)`` array and Q as an ``(q, 2)`` array of edge indices."""
    edges = np.array(g.edges, dtype=np.int64).reshape(-1, 2)
    pairs = [(i, j) for i, j in itertools.combinations(range(len(edges)), 2)
             if not set(g.edges[i]) & set(g.edges[j])]
    return edges, np.array(pairs, dtype=np.int64).reshape(-1, 2)


def classify_many(edges: np.ndarray, qa: np.ndarray, qb: np.ndarray) -> np.ndarray:
    """Vectorized :func:`classify`: type index (into OMEGA) of each row pair.

    ``qa`` and ``qb`` are broadcast-compatible integer arrays of shape ``(..., 2)``
    holding edge indices into ``edges``.
    """
    qa, qb = np.broadcast_arrays(np.asarray(qa), np.asarray(qb))
    tau = sum((qa[..., i] == qb[..., j]).astype(np.int8) for i in range(2) for j in range(2))
    va = edges[qa].reshape(qa.shape[:-1] + (4,))
    vb = edges[qb].reshape(qb.shape[:-1] + (4,))
    a_in_b = (va[..., :, None] == vb[..., None, :]).any(axis=-1)  # (..., 4)
    b_in_a = (vb[..., :, None] == va[..., None, :]).any(axis=-1)
    phi = a_in_b.sum(axis=-1)
    in_one_edge = ((a_in_b[..., 0] & a_in_b[..., 1]) | (a_in_b[..., 2] & a_in_b[..., 3])
                   | (b_in_a[..., 0] & b_in_a[..., 1]) | (b_in_a[..., 2] & b_in_a[..., 3]))
    lut = np.full((3, 5), -1, dtype=np.int8)
    for (t, p), code in _BY_TAU_PHI.items():
        lut[t, p] = OMEGA_INDEX[code]
    out = lut[tau, phi]
    tie = (tau == 0) & (phi == 2)
    out[tie] = np.where(in_one_edge[tie], OMEGA_INDEX["021"], OMEGA_INDEX["022"])
    return out


def type_matrix(g: GraphSpec) -> np.ndarray:
    """``(q, q)`` int8 matrix of type indices for every ordered pair of Q."""
    edges, Q = q_index_array(g)
    return classify_many(edges, Q[:, None, :], Q[None, :, :])


def census_bruteforce(g: GraphSpec, max_pairs: int = 50_000_000, block: int = 256) -> TypeCensus:
    edges, Q = q_index_array(g)
    q = len(Q)
    if q * q > max_pairs:
        raise ResourceLimit(f"q^2 = {q * q} exceeds the brute-force bound {max_pairs}")
    counts = np.zeros(len(OMEGA), dtype=np.int64)
    for start in range(0, q, block):
        types = classify_many(edges, Q[start:start + block, None, :], Q[None, :, :])
        counts += np.bincount(types.ravel(), minlength=len(OMEGA))
    return {w: int(c) for w, c in zip(OMEGA, counts)}


def census_closed_form(g: GraphSpec) -> TypeCensus:
    C = comb
    if g.kind == "complete":
        n = g.n
        return {"00": 630 * C(n, 8), "01": 1260 * C(n, 7), "021": 360 * C(n, 6),
                "022": 360 * C(n, 6), "03": 120 * C(n, 5), "04": 6 * C(n, 4),
                "12": 90 * C(n, 6), "13": 60 * C(n, 5), "24": 3 * C(n, 4)}
    if g.kind == "complete_bipartite":
        a, b = g.n1, g.n2
        return {
            "00": 144 * C(a, 4) * C(b, 4),
            "01": 144 * (C(a, 4) * C(b, 3) + C(a, 3) * C(b, 4)),
            "021": 72 * C(a, 3) * C(b, 3),
            "022": 24 * (C(a, 2) * C(b, 4) + C(a, 4) * C(b, 2)) + 36 * C(a, 3) * C(b, 3),
            "03": 12 * (C(a, 3) * C(b, 2) + C(a, 2) * C(b, 3)),
            "04": 2 * C(a, 2) * C(b, 2),
            "12": 36 * C(a, 3) * C(b, 3),
            "13": 12 * (C(a, 3) * C(b, 2) + C(a, 2) * C(b, 3)),
            "24": 2 * C(a, 2) * C(b, 2),
        }
    raise UnsupportedGraph("closed forms exist only for complete and complete bipartite graphs")


def f_over_q(g: GraphSpec) -> dict[str, Fraction]:
    """Normalized frequencies f_w / q as simplified closed forms (requires q > 0)."""
    C = comb
    if g.kind == "complete":
        n = g.n
        if n < 4:
            raise ValueError("q = 0 for n < 4")
        m = n - 4
        forms = {"00": 3 * C(m, 4), "01": 12 * C(m, 3), "021": 4 * m * (m - 1),
                 "022": 4 * m * (m - 1), "03": 8 * m, "04": 2, "12": m * (m - 1),
                 "13": 4 * m, "24": 1}
    elif g.kind == "complete_bipartite":
        a, b = g.n1, g.n2
        if a < 2 or b < 2:
            raise ValueError("q = 0 unless n1, n2 >= 2")
        forms = {"00": 2 * C(a - 2, 2) * C(b - 2, 2),
                 "01": 2 * (a - 2) * (b - 2) * (a + b - 6),
                 "021": 4 * (a - 2) * (b - 2),
                 "022": (a + b - 5) * (a + b - 4),
                 "03": 2 * (a + b - 4), "04": 1, "12": 2 * (a - 2) * (b - 2),
                 "13": 2 * (a + b - 4), "24": 1}
    else:
        raise UnsupportedGraph("closed forms exist only for complete and complete bipartite graphs")
    return {w: Fraction(v) for w, v in forms.items()}


def union_graph(q1: EdgePair, q2: EdgePair) -> nx.Graph:
    return nx.Graph([q1.e1, q1.e2, q2.e1, q2.e2])


def reference_subgraph(code: str) -> nx.Graph:
    """F_w: disjoint union of paths (by vertex count) and cycles."""
    _, paths, cycles = SUBGRAPH_TABLE[code]
    parts = [nx.path_graph(k) for k in paths] + [nx.cycle_graph(k) for k in cycles]
    return nx.disjoint_union_all(parts)
