"""Normal curvature on the built-in surfaces.

The theorem only asks one thing of a surface's shape: every normal curvature
stays within [-1, 1].  This script measures that bound on a few surfaces and
shows where it is attained.
"""
import numpy as np

from unitball import curvature_sample, make_perturbed_sphere, make_sphere, make_torus, max_abs_normal_curvature
from unitball.catalog import zonal


def largest(surface):
    best = max((max_abs_normal_curvature(p) + (p,) for p in surface.patches), key=lambda t: t[0])
    value, (u, v), patch = best
    return value, patch.position(np.asarray(u), np.asarray(v))


print("A sphere of radius r bends by 1/r in every direction:")
for r in (0.5, 1.0, 1.5):
    value, where = largest(make_sphere(radius=r))
    print(f"  r = {r}: max |kappa| = {value:.12f}")

print("\nThe torus R = 2, r = 1 reaches 1 on its tube circles and is flatter on the outside:")
torus = make_torus(2.0, 1.0)
cs = curvature_sample(torus.patches[0], np.asarray(0.0), np.asarray(0.0))
print(f"  outer equator principal curvatures: {float(cs.kappa1):.6f}, {float(cs.kappa2):.6f}")
value, where = largest(torus)
print(f"  max |kappa| = {value:.6f} at {np.round(where, 4)}")

print("\nA ripple r = 1 + 0.05 cos(3 theta) on the unit sphere is already too sharp:")
value, where = largest(make_perturbed_sphere(zonal(3), 0.05))
print(f"  max |kappa| = {value:.6f} at {np.round(where, 4)} (a pole)")

print("\nRaising the base radius to 1.3 brings the same ripple back under the bound:")
value, _ = largest(make_perturbed_sphere(zonal(3), 0.05, base_radius=1.3))
print(f"  max |kappa| = {value:.6f}")
