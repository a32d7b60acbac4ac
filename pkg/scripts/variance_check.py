"""Simulated Var(C) against the analytic value and Moon's formula for a few graphs."""

import argparse

from sphcross.layout_constants import default_rsa_constants
from sphcross.montecarlo import SimulationConfig, simulate_crossings
from sphcross.product_types import GraphSpec
from sphcross.variance_engine import moments


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    k = default_rsa_constants()
    graphs = [GraphSpec.complete(n) for n in (5, 8, 12)] + [GraphSpec.complete_bipartite(4, 6)]
    print(f"{'graph':>10} {'simulated':>11} {'+/-':>8} {'ours':>11} {'Moon':>11}")
    for g in graphs:
        r = simulate_crossings(SimulationConfig(g, args.N, args.seed, partitions=4))
        print(f"{g.label:>10} {r.variance:11.4f} {r.stderr_variance:8.4f} "
              f"{moments(g, k).variance:11.4f} {moments(g, k, 'moon_1965').variance:11.4f}")


if __name__ == "__main__":
    main()
