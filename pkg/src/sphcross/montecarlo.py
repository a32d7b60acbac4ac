"""Monte Carlo side: random spherical layouts, crossing counts, pi_w estimates.

Layouts are generated in fixed blocks of ``RNG_BLOCK`` layouts, block ``b`` drawing
from the stream ``(master_seed, b)``. Partitions are contiguous runs of blocks, so
the partition count changes only the scheduling, never the numbers.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arc_predicate import (DEGENERACY_TOL, FilterConfig, crossing_batch, fast_reject_batch,
                            octant_signatures)
from .geom_core import make_rng, random_unit_points
from .product_types import (OMEGA, GraphSpec, census_bruteforce, q_index_array, q_size,
                            type_matrix)

log = logging.getLogger(__name__)

RNG_BLOCK = 1024
PAIRS_PER_BATCH = 250_000
THREADS_ENV = "SPHCROSS_THREADS"


class InsufficientSamples(ValueError):
    pass


def default_workers() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return max(1, min(8, os.cpu_count() or 1))


@dataclass(frozen=True)
class SimulationConfig:
    graph: GraphSpec
    num_layouts: int
    master_seed: int = 0
    partitions: int = 1
    filter: FilterConfig | None = field(default_factory=FilterConfig)
    workers: int | None = None

    def __post_init__(self):
        if self.num_layouts < 2:
            raise ValueError("need at least two layouts for an unbiased variance")
        if self.partitions < 1:
            raise ValueError("partitions must be >= 1")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class CrossingSample:
    layout_index: int
    crossings: int


@dataclass(frozen=True)
class TypeEstimate:
    omega: str
    pi_hat: float
    gamma_hat: float
    samples_used: int
    count: int
    stderr_binomial: float
    stderr_layout: float


# -- estimators ---------------------------------------------------------------

def unbiased_variance(samples) -> float:
    """Sum of squared deviations over N - 1.

    Integer samples are reduced exactly in Python integers; floats use two passes.
    """
    x = np.asarray(samples)
    n = x.size
    if n < 2:
        raise InsufficientSamples("unbiased variance needs at least two samples")
    if np.issubdtype(x.dtype, np.integer):
        s1 = int(x.sum(dtype=np.int64))
        s2 = int(np.sum(x.astype(np.int64) ** 2))
        return float(Fraction(n * s2 - s1 * s1, n * (n - 1)))
    x = x.astype(float)
    d = x - x.mean()
    return float(d @ d / (n - 1))


def variance_stderr(samples) -> float:
    """Standard error of the sample variance from the fourth central moment."""
    x = np.asarray(samples, dtype=float)
    n = x.size
    if n < 4:
        raise InsufficientSamples("variance standard error needs at least four samples")
    d = x - x.mean()
    m4 = float(np.mean(d**4))
    s2 = unbiased_variance(samples)
    return math.sqrt(max(m4 - s2 * s2 * (n - 3) / (n - 1), 0.0) / n)


# -- layout generation and crossing detection ---------------------------------

class _Prepared:
    def __init__(self, graph: GraphSpec):
        self.graph = graph
        self.nv = graph.num_vertices
        self.edges, self.Q = q_index_array(graph)
        e = self.edges
        self.s, self.t = e[self.Q[:, 0], 0], e[self.Q[:, 0], 1]
        self.u, self.v = e[self.Q[:, 1], 0], e[self.Q[:, 1], 1]


def _bad_layouts(pts: np.ndarray, edges: np.ndarray) -> np.ndarray:
    if len(edges) == 0:
        return np.zeros(len(pts), dtype=bool)
    a, b = pts[:, edges[:, 0]], pts[:, edges[:, 1]]
    bad = (np.linalg.norm(a - b, axis=-1) <= DEGENERACY_TOL) | (np.linalg.norm(a + b, axis=-1) <= DEGENERACY_TOL)
    return bad.any(axis=1)


def draw_block(prep: _Prepared, seed: int, block: int, count: int) -> tuple[np.ndarray, int]:
    """Vertex positions for one block, shape ``(count, nv, 3)``, and the number of redraws.

    A layout with a coincident or antipodal edge is redrawn whole from the same stream.
    """
    rng = make_rng(seed, block)
    pts = random_unit_points(rng, (count, prep.nv))
    redraws = 0
    for i in np.flatnonzero(_bad_layouts(pts, prep.edges)):
        while _bad_layouts(pts[i:i + 1], prep.edges)[0]:
            pts[i] = random_unit_points(rng, prep.nv)
            redraws += 1
    if redraws:
        log.info("block %d: redrew %d degenerate layouts", block, redraws)
    return pts, redraws


def crossing_matrix(prep: _Prepared, pts: np.ndarray, filt: FilterConfig | None) -> np.ndarray:
    """Boolean ``(L, q)``: which independent edge pairs cross in each layout."""
    L, q = len(pts), len(prep.Q)
    out = np.zeros((L, q), dtype=bool)
    if q == 0:
        return out
    step = max(1, PAIRS_PER_BATCH // q)
    for lo in range(0, L, step):
        P = pts[lo:lo + step]
        S, T, U, V = P[:, prep.s], P[:, prep.t], P[:, prep.u], P[:, prep.v]
        if filt is None:
            out[lo:lo + step] = crossing_batch(S, T, U, V)
            continue
        sig = octant_signatures(P, filt)
        n1 = np.cross(S, T)
        d3 = np.einsum("...i,...i->...", n1, U)
        d4 = np.einsum("...i,...i->...", n1, V)
        rejected = fast_reject_batch(sig[:, prep.s], sig[:, prep.t], sig[:, prep.u], sig[:, prep.v],
                                     d3, d4, filt.degeneracy_epsilon)
        keep = ~rejected
        block = np.zeros(rejected.shape, dtype=bool)
        block[keep] = crossing_batch(S[keep], T[keep], U[keep], V[keep])
        out[lo:lo + step] = block
    return out


def _blocks(n: int) -> list[tuple[int, int]]:
    return [(b, min(RNG_BLOCK, n - b * RNG_BLOCK)) for b in range(math.ceil(n / RNG_BLOCK))]


def _partition(blocks: list, parts: int) -> list[list]:
    parts = min(parts, len(blocks))
    bounds = np.linspace(0, len(blocks), parts + 1).round().astype(int)
    return [blocks[bounds[i]:bounds[i + 1]] for i in range(parts)]


def _run_partitions(cfg, job):
    blocks = _partition(_blocks(cfg.num_layouts), cfg.partitions)
    workers = min(cfg.workers or default_workers(), len(blocks))
    if workers <= 1:
        return [job(p) for p in blocks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(job, blocks))


# -- crossing-count simulation ------------------------------------------------

@dataclass
class SimulationResult:
    config: SimulationConfig
    samples: np.ndarray
    redraws: int = 0

    @property
    def n(self) -> int:
        return int(self.samples.size)

    @property
    def mean(self) -> float:
        return float(self.samples.mean())

    @property
    def variance(self) -> float:
        return unbiased_variance(self.samples)

    @property
    def stderr_mean(self) -> float:
        return math.sqrt(self.variance / self.n)

    @property
    def stderr_variance(self) -> float:
        return variance_stderr(self.samples)

    def crossing_samples(self):
        for i, c in enumerate(self.samples):
            yield CrossingSample(i, int(c))

    def summary(self) -> dict:
        cfg = self.config
        return {
            "graph": cfg.graph.label,
            "q": q_size(cfg.graph),
            "N": self.n,
            "mean": self.mean,
            "variance": self.variance,
            "stderr": self.stderr_mean,
            "stderr_variance": self.stderr_variance,
            "seed": cfg.master_seed,
            "partitions": cfg.partitions,
            "filter_l": None if cfg.filter is None else cfg.filter.l,
            "redraws": self.redraws,
        }


def simulate_crossings(cfg: SimulationConfig) -> SimulationResult:
    prep = _Prepared(cfg.graph)

    def job(blocks):
        counts, redraws = [], 0
        for b, count in blocks:
            pts, r = draw_block(prep, cfg.master_seed, b, count)
            redraws += r
            counts.append(crossing_matrix(prep, pts, cfg.filter).sum(axis=1, dtype=np.int64))
        return counts, redraws

    parts = _run_partitions(cfg, job)
    samples = np.concatenate([c for counts, _ in parts for c in counts])
    return SimulationResult(cfg, samples, sum(r for _, r in parts))


def write_samples_csv(result: SimulationResult, path) -> None:
    cfg = result.config
    with open(path, "w") as fh:
        fh.write(f"# graph={cfg.graph.label} seed={cfg.master_seed} partitions={cfg.partitions} N={result.n}\n")
        fh.write("layout_index,crossings\n")
        for i, c in enumerate(result.samples):
            fh.write(f"{i},{int(c)}\n")


# -- product-type estimation --------------------------------------------------

def layout_type_counts(cross_row: np.ndarray, tmat: np.ndarray) -> np.ndarray:
    """Per-type counts of ordered crossing pairs in one layout, via the crossing set X x X."""
    X = np.flatnonzero(cross_row)
    return np.bincount(tmat[np.ix_(X, X)].ravel(), minlength=len(OMEGA))


def layout_type_counts_direct(cross_row: np.ndarray, tmat: np.ndarray) -> np.ndarray:
    """Same as :func:`layout_type_counts` but summed over all of Q x Q."""
    a = cross_row.astype(np.int64)
    return np.array([a @ (tmat == i).astype(np.int64) @ a for i in range(len(OMEGA))])


@dataclass
class TypeEstimation:
    estimates: dict[str, TypeEstimate]
    per_layout: np.ndarray  # (T, 9) counts
    census: dict[str, int]
    T: int


def estimate_pi_omegas(T: int, seed: int = 0, graph: GraphSpec | None = None,
                       partitions: int = 1, filter: FilterConfig | None = None,
                       workers: int | None = None, delta: float = 1 / 8) -> TypeEstimation:
    """Estimate every pi_w from T random layouts of ``graph`` (default K_10).

    pi_hat_w = (crossing ordered pairs of type w) / (T f_w). The binomial standard
    error treats the T f_w products as independent; ``stderr_layout`` is the
    between-layout standard error, which accounts for correlation within a layout.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    graph = graph or GraphSpec.complete(10)
    filt = filter if filter is not None else FilterConfig()
    cfg = SimulationConfig(graph, max(T, 2), seed, partitions, filt, workers)
    prep = _Prepared(graph)
    tmat = type_matrix(graph)
    census = census_bruteforce(graph)

    def job(blocks):
        rows = []
        for b, count in blocks:
            pts, _ = draw_block(prep, seed, b, count)
            cm = crossing_matrix(prep, pts, filt)
            rows.append(np.array([layout_type_counts(r, tmat) for r in cm], dtype=np.int64))
        return rows

    if T == 1:
        pts, _ = draw_block(prep, seed, 0, 1)
        per_layout = np.array([layout_type_counts(crossing_matrix(prep, pts, filt)[0], tmat)])
    else:
        per_layout = np.concatenate([r for rows in _run_partitions(cfg, job) for r in rows])

    totals = per_layout.sum(axis=0)
    out = {}
    for i, w in enumerate(OMEGA):
        f = census[w]
        if f == 0:
            continue
        n_samples = T * f
        p = totals[i] / n_samples
        se_bin = math.sqrt(p * (1 - p) / n_samples)
        se_lay = float(np.std(per_layout[:, i] / f, ddof=1) / math.sqrt(T)) if T > 1 else math.nan
        out[w] = TypeEstimate(w, float(p), float(p - delta**2), n_samples, int(totals[i]), se_bin, se_lay)
    return TypeEstimation(out, per_layout, census, T)
