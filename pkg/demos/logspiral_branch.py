"""Flat surfaces on the b = c = mu a branch are not pointwise 1-type.

The logarithmic-spiral meridian makes the surface flat, yet Delta G picks up
e1^e3 and e2^e4 components that no constant C can absorb.
"""

import numpy as np

from rotsurf4 import classify_theorem1, gaussian_curvature, invariants, laplacian_gauss_closed, rotation_surface
from rotsurf4.pointwise import mu_branch_diagnostics
from rotsurf4.profiles import logspiral
from rotsurf4.surface import gauss_map_closed, laplacian_gauss_fixed

for mu in (0.5, 1.0, 2.0):
    surf = rotation_surface(logspiral(mu, s0=1.0))
    s = np.linspace(*surf.s_range, 50)
    inv = invariants(surf, s)
    K = np.max(np.abs(gaussian_curvature(surf, s)))
    a = inv.a
    expected = np.stack([4 * mu**2 * a**2, 2 * mu * a**2, 0 * a, 0 * a, -2 * mu * a**2, 0 * a], -1)
    err = np.max(np.abs(laplacian_gauss_closed(surf, s) - expected))
    fit = classify_theorem1(surf, shape=(16, 16)).fit
    print(f"mu={mu}: max|K|={K:.1e}  b/a={np.mean(inv.b / a):.3f}  "
          f"Delta G vs (4mu^2a^2, 2mu a^2, 0, 0, -2mu a^2, 0): {err:.1e}  "
          f"fit kind={fit.kind} (residual {fit.residual:.3f})")

# if Delta G = f (G + C) held, C = Delta G / f - G would be constant
surf = rotation_surface(logspiral(1.0, 1.0))
s = np.linspace(0.0, 2.0, 5)
t = np.zeros_like(s)
inv = invariants(surf, s)
f = 4 * (inv.a**2 + inv.b**2)
C = laplacian_gauss_fixed(surf, s, t) / f[:, None] - gauss_map_closed(surf, s, t)
print("\nimplied C along the meridian (mu = 1):")
for si, c in zip(s, C):
    print(f"  s={si:.1f}  " + " ".join(f"{v:+.3f}" for v in c))
d = mu_branch_diagnostics(surf, s[:1], t[:1], C[0], f[:1])
print("branch relations at s=0:", {k: float(np.ravel(v)[0]) for k, v in d.items()})
print(f"C varies by up to {np.max(np.ptp(C, axis=0)):.3f} along t=0, so it is not a constant vector")
