"""Backaction-evading coupling at g1 = g2.

Run: python3 demos/04_backaction_evasion.py
"""
from magsim import bae_demo

# With g1 = g2 = G the interaction is G (m + m^dag)(c + c^dag): X_m commutes
# with it and stays untouched, while all the cavity's noise lands in P_m.
for G in (0.005, 0.01, 0.02):
    rep = bae_demo(G, kappa_c=2e-3, t_end=1e3, dt=0.1)
    print(f"G = {G:<6} max |dVar(X_m)| = {rep.xm_deviation:.1e}   "
          f"Var(P_m) ~ 1/2 + {rep.pm_growth:.3e} t^2   Var(P_m)(1000) = {rep.var_pm[-1]:.1f}")

# doubling G quadruples the early P_m heating
a = bae_demo(0.01, 2e-3).pm_growth
b = bae_demo(0.02, 2e-3).pm_growth
print(f"growth ratio = {b / a:.4f}")
