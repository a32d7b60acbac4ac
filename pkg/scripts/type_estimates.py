"""Simulated pi_w on K_10 with both the binomial and the between-layout standard error."""

import argparse

from sphcross.layout_constants import default_rsa_constants
from sphcross.montecarlo import estimate_pi_omegas
from sphcross.product_types import OMEGA


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--T", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=1965)
    ap.add_argument("--partitions", type=int, default=4)
    args = ap.parse_args()
    k = default_rsa_constants()
    est = estimate_pi_omegas(args.T, args.seed, partitions=args.partitions)
    print(f"{'w':>4} {'pi_hat':>10} {'pi':>10} {'se_binom':>9} {'se_layout':>9} {'z_binom':>8} {'z_layout':>8}")
    for w in OMEGA:
        e = est.estimates[w]
        d = e.pi_hat - k.pi[w]
        zb = d / e.stderr_binomial if e.stderr_binomial else float("nan")
        zl = d / e.stderr_layout if e.stderr_layout else float("nan")
        print(f"{w:>4} {e.pi_hat:10.7f} {k.pi[w]:10.7f} {e.stderr_binomial:9.2e} {e.stderr_layout:9.2e} "
              f"{zb:8.2f} {zl:8.2f}")


if __name__ == "__main__":
    main()
