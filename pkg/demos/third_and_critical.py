"""The two other curvature conditions on M_1.

* constant third scalar curvature: an explicit end ratio (a cube-root formula);
* Gauduchon-critical (s^C + delta theta constant): the end ratio comes from a
  one-dimensional root search after eliminating three constants linearly.

Degrees above 1 are reported as unsupported or unsolvable rather than guessed.
"""

from hermcurv import hirzebruch
from hermcurv.errors import HermcurvError

for kind in ("third", "critical"):
    sol = hirzebruch.solve(kind, 1)
    profile = hirzebruch.build_profile(sol)
    report = hirzebruch.verify_profile(profile, sol)
    print(f"{kind:>8}: phi1/phi0={sol.phi1 / sol.phi0:.10f} lambda={sol.lam:.6f} "
          f"c1={sol.c1:.6f} c2={sol.c2:.3e}")
    print(f"{'':>8}  length={report.length:.6f} constancy={report.constancy:.1e} "
          f"worst end residual={max(report.boundary.values()):.1e} passed={report.passed()}")

for kind in ("third", "critical"):
    try:
        hirzebruch.solve(kind, 2)
    except HermcurvError as exc:
        print(f"{kind} m=2: {type(exc).__name__}: {exc}")
