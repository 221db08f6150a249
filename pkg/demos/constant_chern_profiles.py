"""Constant Chern scalar curvature on the Hirzebruch surfaces M_m.

For each degree m the end ratio phi0/phi1 is the root of a quartic, the
constants of y(phi) follow in closed form, and the profile (f, h) is obtained
by integrating dt = dphi / sqrt(y) and inverting.  The run prints how
constant s^C actually is on the sampled metric and how well the smooth
closing conditions at the two ends hold.
"""

import time

import numpy as np

from hermcurv import hirzebruch

print(f"{'m':>3} {'phi0/phi1':>12} {'lambda':>10} {'length':>9} {'max|sC-lam|/lam':>16} "
      f"{'ends':>9} {'secs':>5}")
for m in (1, 2, 3, 5, 10):
    start = time.perf_counter()
    sol = hirzebruch.solve_chern(m)
    profile = hirzebruch.build_profile(sol, n_grid=512)
    report = hirzebruch.verify_profile(profile, sol)
    secs = time.perf_counter() - start
    print(f"{m:>3} {sol.phi0 / sol.phi1:>12.8f} {sol.lam:>10.5f} {report.length:>9.5f} "
          f"{report.constancy:>16.2e} {max(report.boundary.values()):>9.1e} {secs:>5.2f}")

# f starts at 0 with slope m, so the orbit collapses smoothly to a 2-sphere at t = 0
sol = hirzebruch.solve_chern(2)
p = hirzebruch.build_profile(sol)
i = np.searchsorted(p.t, [0.0, p.l / 4, p.l / 2, 3 * p.l / 4, p.l])
i[-1] = p.t.size - 1
print("\nm = 2 profile samples")
for k in i:
    print(f"  t={p.t[k]:.4f}  f={p.f.values[k]:.6f}  h={p.h.values[k]:.6f}  f'={p.f1.values[k]:+.6f}")
