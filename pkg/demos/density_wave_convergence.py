"""Convergence of the DGSEM scheme on a moving mesh.

An advected density wave (exact solution known) is integrated to t = 1
on a sequence of refined meshes with sinusoidal corner motion.  The
terminal slope approaches N + 1.  A short p-refinement sweep on the
coarsest mesh shows the spectral error decay.

Expect a few minutes of runtime; shrink the level list for a quick look.
"""

from hybriddg.diagnostics import eoc
from hybriddg.verification import _density_wave_error

degree = 4
levels = (2, 4, 8)

errors = []
for n in levels:
    err = _density_wave_error(n, degree, cfl=0.4, t_end=1.0)
    errors.append(err)
    print(f"mesh {n}^3, N = {degree}: L2 error = {err:.4e}")

widths = [2.0 / n for n in levels]
slopes = eoc(errors, widths)
print("EOC slopes:", ", ".join(f"{s:.2f}" for s in slopes),
      f"(target {degree + 1})")

print("\np-refinement on the 4^3 mesh (t = 0.1):")
prev = None
for n in range(1, 7):
    err = _density_wave_error(4, n, cfl=0.4, t_end=0.1)
    note = "" if prev is None else f"  (ratio {prev / err:.1f})"
    print(f"  N = {n}: L2 error = {err:.4e}{note}")
    prev = err
