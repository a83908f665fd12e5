"""Effective couplings from two-tone magnon frequency modulation.

Run: python3 demos/01_couplings.py
"""
import numpy as np

from magsim import bogoliubov_parameters, effective_couplings
from magsim.bessel import bessel_j

# Two tones at nu1 = omega_m - omega_c and nu2 = omega_m + omega_c leave two
# stationary terms: pair creation with g1 = g J0(l1) J-1(l2) and exchange
# with g2 = g J-1(l1) J0(l2).  Everything else oscillates and averages out.
g = 1.0
for l1, l2 in [(0.16, 0.16), (0.2, 0.04), (0.2, 0.12), (3.8317, 0.3)]:
    eff = effective_couplings(g, l1, l2)
    print(f"lambda = ({l1}, {l2}):  g1 = {eff.g1:+.5f}  g2 = {eff.g2:+.5f}")

# Equal indices give g1 = g2, the backaction-evading point (about -0.08 g).

# For small indices g1/g2 is close to lambda2/lambda1, which is how the
# modulation depth tunes the squeezing parameter r = atanh(g1/g2).
l2 = np.array([0.04, 0.06, 0.08, 0.10, 0.12])
ratios = [effective_couplings(g, 0.2, x).g1 / effective_couplings(g, 0.2, x).g2 for x in l2]
print("\nl2          ", l2)
print("g1/g2       ", np.round(ratios, 4))
print("r           ", np.round([bogoliubov_parameters(r, 1.0)[0] for r in ratios], 4))
print("V_m = e^-2r/2", np.round([np.exp(-2 * np.arctanh(r)) / 2 for r in ratios], 4))

# lambda1 at the first zero of J1 switches the exchange term off entirely;
# the cavity then only creates pairs with magnon 1.
print("\nJ1(3.8317) =", bessel_j(1, 3.8317))
