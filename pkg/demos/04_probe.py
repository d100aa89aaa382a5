"""Search for a small admissible volume inside the radius-2 ball.

Whether some surface with curvature at most 1 inside the radius-2 ball can
enclose less volume than the unit ball is an open question.  The probe searches a
low-order family of perturbed spheres with Nelder-Mead and rejects any shape
that breaks a hypothesis.  These are the default settings of
``unitball probe``: eight coefficients and 2000 evaluations.
"""
import math

from unitball.probe import ProbeConfig, probe_min_volume

config = ProbeConfig()
result = probe_min_volume(config)
feasible = sum(e.feasible for e in result.evaluations)
print(f"{len(result.evaluations)} evaluations, {feasible} satisfied both hypotheses")
print(f"best volume {result.best_volume:.6f} vs unit ball {4 * math.pi / 3:.6f} "
      f"(difference {result.best_volume - 4 * math.pi / 3:+.5f})")
print(f"re-checked at grid {result.recheck['grid']}: max |kappa| {result.recheck['max_curvature']:.6f}, "
      f"max radius {result.recheck['max_radius']:.6f}")
print(f"verification of the minimizer: exit code {result.report.exit_code}")
print("\nfirst rows of the trajectory log:")
print("\n".join(result.log_csv().splitlines()[:4]))
