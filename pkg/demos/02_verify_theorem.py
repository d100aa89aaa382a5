"""Walk through the verification pipeline on one admissible surface.

The argument runs in stages.  If the origin lies inside the surface and the
surface sits inside the open radius-2 ball, the surface is star-shaped about
the origin and the radial map onto the radius-2 sphere is short.  The ball
whose diameter joins the origin to the farthest surface point then lies
inside.  A small translation toward that point lets the argument repeat and
grows the enclosed ball until its radius reaches 1.
"""
import numpy as np

from unitball import make_perturbed_sphere, make_sphere
from unitball.verifier import verify_theorem

surface = make_perturbed_sphere([0.4, -0.2, 0.3, 0.1, 0.5, -0.3, 0.2, 0.1], amplitude=0.04,
                                base_radius=1.3, center=(0.1, -0.05, 0.0))
report = verify_theorem(surface)

print("Checks on a perturbed sphere of base radius 1.3:")
for check in report.checks:
    print(f"  {check.name:26s} {'pass' if check.passed else 'FAIL'}   value {check.value:.6f}")
print(f"\nfarthest point {np.round(report.max_distance_point, 4)} at distance {report.max_distance:.6f}")
ball = report.final_ball.ball
print(f"certified ball: centre {np.round(ball.center, 4)}, radius {ball.radius:.6f}")
print(f"exit code {report.exit_code}")

print("\nA unit sphere shifted to (1.05, 0, 0) leaves the radius-2 ball, so the")
print("pipeline stops at the hypotheses and makes no claim:")
shifted = verify_theorem(make_sphere((1.05, 0, 0)))
failed = [c.name for c in shifted.checks if not c.passed]
print(f"  failed checks: {', '.join(failed)}")
print(f"  exit code {shifted.exit_code}, conclusion {shifted.to_dict()['theoremConclusion']}")
