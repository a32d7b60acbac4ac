"""Write the plot-ready CSVs: complete-graph variances, bipartite variances at fixed n2,
and the bipartite deviation sign grid."""

import argparse
from pathlib import Path

from sphcross.cli import main as cli


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figure_data")
    ap.add_argument("--constants", default="rsa")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    c = ["--constants", args.constants]
    cli(["analytic", "--graph", "complete", "--n", "4..50", "--moon", *c, "-o", str(out / "complete.csv")])
    for n2 in (5, 10, 20, 40):
        cli(["analytic", "--graph", "bipartite", "--n1", "2..50", "--n2", str(n2), "--moon", *c,
             "-o", str(out / f"bipartite_n2_{n2}.csv")])
    cli(["deviation", "--bipartite", "--n1", "2..40", "--n2", "2..40", *c, "-o", str(out / "sign_grid.csv")])
    print(f"wrote {len(list(out.glob('*.csv')))} files to {out}/")


if __name__ == "__main__":
    main()
