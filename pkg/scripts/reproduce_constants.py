"""Integrate the rsa layout constants and compare them with the published six-decimal
values and with the closed forms implied by the anchored crossing probability."""

import argparse
import json

from sphcross.layout_constants import PI12_EXACT, PUBLISHED_PI, rsa_constants

CLOSED = {"021": 1 / 32 - PI12_EXACT, "022": PI12_EXACT, "03": 1 / 96, "13": 1 / 32}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--json", help="also write the constants here")
    args = ap.parse_args()
    k = rsa_constants()
    print(f"{'w':>4} {'integrated':>12} {'+/-':>8} {'closed form':>12} {'published':>10} {'pub - int':>10}")
    for w in ("021", "022", "03", "13"):
        print(f"{w:>4} {k.pi[w]:12.8f} {k.error[w]:8.1e} {CLOSED[w]:12.8f} {PUBLISHED_PI[w]:10.6f} "
              f"{PUBLISHED_PI[w] - k.pi[w]:+10.1e}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(k.to_dict(), fh, indent=2)


if __name__ == "__main__":
    main()
