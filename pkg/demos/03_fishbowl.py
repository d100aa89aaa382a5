"""The genus-2 fishbowl: curvature at most 1 but less volume than a unit ball.

Without the radius-2 bound the theorem fails.  The fishbowl is a solid of
revolution whose main body is bounded by the cylinder of radius 1 and two unit
circles, with thin plates and tunnels attached so that every normal curvature
stays within 1.  Its volume is the main body's 22 pi / 3 - 2 pi^2 plus a
thin-shell excess that shrinks with the wall thickness.

Pass an output directory to also write OBJ files of the assembly.
"""
import math
import sys

from unitball import enclosed_volume, euler_characteristic, tessellate
from unitball.fishbowl import (MAIN_BODY_VOLUME, FishbowlParams, build_fishbowl, curvature_audit,
                               export_fishbowl, main_body_volume_quadrature)

print(f"main body 22*pi/3 - 2*pi^2 = {MAIN_BODY_VOLUME:.12f}")
print(f"washer quadrature          = {main_body_volume_quadrature()[0]:.12f}")
print(f"unit ball 4*pi/3           = {4 * math.pi / 3:.12f}")

params = FishbowlParams(mesh_density=96)
surface = build_fishbowl(params)
mesh = tessellate(surface, params.mesh_density)
chi = euler_characteristic(mesh)
volume = enclosed_volume(mesh)
print(f"\nassembly: watertight {mesh.watertight}, chi {chi}, genus {(2 - chi) // 2}")
print(f"enclosed volume {volume:.6f} (shell excess {volume - MAIN_BODY_VOLUME:.4f}), "
      f"below the unit ball by {4 * math.pi / 3 - volume:.4f}")

print("\nLargest |normal curvature| per component:")
for name, row in sorted(curvature_audit(surface, 32).items()):
    print(f"  {name:18s} {row['max_abs_curvature']:.6f}")

print("\nThinner walls give less excess volume:")
for g in (8e-4, 4e-4, 2e-4):
    s = build_fishbowl(FishbowlParams(plate_gap=g, tunnel_delta=g, mesh_density=64))
    print(f"  wall {g:.0e}: excess {enclosed_volume(tessellate(s, 64)) - MAIN_BODY_VOLUME:.4f}")

if len(sys.argv) > 1:
    paths = export_fishbowl(surface, sys.argv[1], params.mesh_density, mesh)
    print(f"\nwrote {len(paths)} OBJ files to {sys.argv[1]}")
