"""Where Moon's complete-graph variance crosses ours, for each constant set.

The deviation factors as 3 C(n,4) (n-4) [A (n-5) + B]; a crossover exists only when A < 0.
"""

import math

from sphcross.layout_constants import default_rsa_constants, published_rsa_constants
from sphcross.variance_engine import moon1977_leading_coefficient_check

K = (math.pi**2 - 8) / (64 * math.pi**2)


def main():
    for name, k in (("integrated", default_rsa_constants()), ("published", published_rsa_constants())):
        G = k.gamma
        A = G["12"] + 4 * (G["021"] + G["022"]) - K
        B = 4 * (G["13"] + 2 * G["03"]) - 4 * K
        root = 5 - B / A if A < 0 else math.inf
        r, t = moon1977_leading_coefficient_check(10**4, k)
        print(f"{name:>10}: A={A:+.3e} B={B:+.3e} crossover n={root:.2f} "
              f"leading ratio at 1e4={r / t:.4f}")


if __name__ == "__main__":
    main()
