"""Steady magnon squeezing in a single sphere.

Run: python3 demos/02_magnon_squeezing.py   (about 15 s)

Writes demos/out/squeezing.svg when matplotlib is installed.
"""
import dataclasses
from pathlib import Path

from magsim import load_preset, run_scenario, steady_observables
from magsim.scenarios import bogoliubov_prediction

cfg = load_preset("fig2a_l2_0.12")
print(cfg.description)
print("effective couplings:", cfg.effective)

# RWA: time-independent drift, so the steady state is one linear solve.
rwa = steady_observables(cfg, "rwa")
print(f"steady V_m (RWA)        = {rwa['V_m']:.4f}")

# Without magnon damping the magnon relaxes to a pure squeezed vacuum.
print(f"Bogoliubov limit        = {bogoliubov_prediction(cfg)['V_m']:.4f}")
weak = dataclasses.replace(cfg, kappa_m=cfg.kappa_m / 100)
print(f"kappa_m / 100 (RWA)     = {steady_observables(weak, 'rwa')['V_m']:.4f}")

# Full modulated Hamiltonian, from vacuum to t = 8/kappa_m.  The long-time
# state still wobbles at the modulation period, so `steady` is a period mean.
lab = run_scenario(cfg, "lab")
lo, hi = lab.metadata["steady_range"]["V_m"]
print(f"steady V_m (lab frame)  = {lab.steady['V_m']:.4f}  (micromotion {lo:.4f} .. {hi:.4f})")

# Cavity loss sweep, RWA.
for kc in (0.001, 0.004, 0.01, 0.02):
    c = load_preset(f"fig2b_kc_{kc}")
    print(f"  kappa_c = {kc:<6} V_m = {steady_observables(c, 'rwa')['V_m']:.4f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    out = Path(__file__).parent / "out"
    out.mkdir(exist_ok=True)
    r = run_scenario(cfg, "rwa")
    plt.plot(lab.times, lab.series["V_m"], label="lab frame")
    plt.plot(r.times, r.series["V_m"], "--", label="RWA")
    plt.axhline(0.5, color="k", lw=0.5)
    plt.xlabel("t (1/omega_m)")
    plt.ylabel("V_m")
    plt.legend()
    plt.savefig(out / "squeezing.svg")
    print("wrote", out / "squeezing.svg")
