"""Closed-form curvature of the U(2)-invariant ansatz against a frame computation.

The oracle builds the Chern and Levi-Civita connections from the structure
constants of the orthonormal frame, forms the full curvature tensors, and
takes traces.  The closed forms are single expressions in f, h and their
derivatives.  They should agree to rounding.
"""

import numpy as np

from hermcurv import frame

names = ("sC", "s3", "sg", "rho12", "rho34", "r12", "r34", "theta_t", "delta_theta")

hopf = frame.hopf_profile()
rep = frame.curvature_report(hopf, [0.5])
print("h = f = 1:", {k: round(float(getattr(rep, k)[0]), 12) + 0.0 for k in names})

worst = 0.0
for p in frame.smooth_profile_corpus():
    t = p.interior[::9]
    a, b = frame.curvature_report(p, t), frame.curvature_oracle(p, t)
    for k in names:
        x, y = getattr(a, k), getattr(b, k)
        worst = max(worst, float(np.max(np.abs(x - y) / np.maximum(1, np.abs(x)))))
print(f"seeded corpus, worst relative gap over all quantities: {worst:.1e}")

k = frame.kahler_profile()
t = k.interior
print("f = h h' is Kähler:", frame.is_kahler(k),
      f"  max|sC - sg/2| = {np.max(np.abs(frame.chern_scalar(k, t) - frame.riemannian_scalar(k, t) / 2)):.1e}")

R = frame.curvature_tensor(frame.smooth_profile_corpus()[0], 1.0)
print("Chern curvature tensor at t = 1 (nonzero entries):", int(np.count_nonzero(np.abs(R) > 1e-12)))
