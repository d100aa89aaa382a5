"""Search for an admissible radial graph that encloses less than a unit ball.

The family is ``r(d) = base_radius + sum c_k f_k(d)`` over the low-order
polynomial basis of :func:`unitball.catalog.low_order_basis`; the constant
term comes first, so ``c_0`` simply inflates the sphere.  A Nelder-Mead
search minimizes the enclosed volume.  Infeasible points (some
``|normal curvature| > 1`` or some point at distance ``>= 2`` from the
origin) are rejected outright rather than penalized, so every volume the
search reports belongs to a surface that satisfies the hypotheses.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .catalog import _Q, Polynomial, RadialGraph, _cube_direction_jet, _dot, _radial_surface, low_order_basis
from .errors import NoFeasibleStart
from .geometry import FundamentalForms, _principal
from .verifier import (CONTAINMENT_SLACK, CURVATURE_SLACK_ANALYTIC, VerificationReport,
                       check_bounding_ball, check_curvature_hypothesis, verify_theorem)

UNIT_BALL_VOLUME = 4.0 * math.pi / 3.0
MAX_DIMENSION = 32


@dataclass(frozen=True)
class ProbeConfig:
    """Search settings.

    Parameters
    ----------
    dimension : int
        Number of basis coefficients, at most 32.
    budget : int
        Objective evaluations allowed across all restarts.  Evaluating the
        seeded starts is not charged to the budget.
    seed : int
        Seed for the restart generator.
    restarts : int
        Number of starts: the first is ``start`` and the rest are random
        perturbations of it.
    start : tuple, optional
        First start; by default ``c_0 = start_inflation`` and the rest zero.
    curvature_weight, containment_weight : float
        Weights of the two constraint violations in the logged
        ``violation`` column.  They never enter the objective.
    """

    dimension: int = 8
    budget: int = 2000
    seed: int = 7
    restarts: int = 4
    base_radius: float = 1.0
    start: Optional[tuple] = None
    start_inflation: float = 0.1
    start_spread: float = 0.02
    simplex_step: float = 0.05
    grid: int = 24
    volume_order: int = 24
    curvature_weight: float = 1.0
    containment_weight: float = 1.0

    def __post_init__(self):
        if not 0 <= self.dimension <= MAX_DIMENSION:
            raise ValueError(f"dimension must be in [0, {MAX_DIMENSION}], got {self.dimension}")
        if self.budget < 0:
            raise ValueError(f"budget must be non-negative, got {self.budget}")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not (self.curvature_weight > 0 and self.containment_weight > 0):
            raise ValueError("penalty weights must be positive")
        if self.grid < 2:
            raise ValueError("grid must be >= 2")
        if self.start is not None and len(self.start) != self.dimension:
            raise ValueError(f"start has {len(self.start)} coefficients, expected {self.dimension}")


@dataclass(frozen=True)
class Evaluation:
    iteration: int
    restart: int
    coefficients: tuple
    volume: float
    max_curvature: float
    max_radius: float
    feasible: bool
    violation: float


@dataclass
class ProbeResult:
    config: ProbeConfig
    best_coefficients: tuple
    best_volume: float
    report: VerificationReport
    evaluations: list = field(default_factory=list)
    recheck: dict = field(default_factory=dict)

    @property
    def below_unit_ball(self) -> bool:
        return self.best_volume < UNIT_BALL_VOLUME - 1e-3

    def log_csv(self) -> str:
        return trajectory_csv(self.evaluations, self.config.dimension)

    def summary(self) -> dict:
        return {
            "dimension": self.config.dimension,
            "budget": self.config.budget,
            "seed": self.config.seed,
            "evaluations": len(self.evaluations),
            "feasible_evaluations": sum(e.feasible for e in self.evaluations),
            "best_volume": self.best_volume,
            "unit_ball_volume": UNIT_BALL_VOLUME,
            "best_minus_unit_ball": self.best_volume - UNIT_BALL_VOLUME,
            "below_unit_ball": self.below_unit_ball,
            "best_coefficients": list(self.best_coefficients),
            "recheck": self.recheck,
            "verification": self.report.to_dict() if self.report else None,
        }


def trajectory_csv(evaluations, dimension) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["iteration", "restart", "volume", "feasible", "violation"]
               + [f"c{k}" for k in range(dimension)])
    for e in evaluations:
        w.writerow([e.iteration, e.restart, repr(e.volume), int(e.feasible), repr(e.violation)]
                   + [repr(c) for c in e.coefficients])
    return buf.getvalue()


class RadialFamily:
    """Maps a coefficient vector to a :class:`RadialGraph`."""

    def __init__(self, dimension, base_radius=1.0):
        self.dimension = int(dimension)
        self.base_radius = float(base_radius)
        self.basis = low_order_basis(self.dimension) if self.dimension else []

    def polynomial(self, coefficients) -> Polynomial:
        f = Polynomial([])
        for c, b in zip(coefficients, self.basis):
            if c:
                f = f + b.scaled(float(c))
        return f

    def graph(self, coefficients) -> RadialGraph:
        return RadialGraph(base=self.base_radius, amplitude=1.0, f=self.polynomial(coefficients))

    def surface(self, coefficients):
        return _radial_surface(self.graph(coefficients), f"probe{tuple(float(c) for c in coefficients)}")


class _Screen:
    """Fast hypothesis screen and volume for one family.

    The radial function is linear in the coefficients, so the value and the
    first two derivatives of every basis function are tabulated once on a
    node grid of each chart (for curvature and radius) and on Gauss nodes
    (for volume).  Each evaluation is then a handful of array contractions.
    """

    def __init__(self, family: RadialFamily, grid, order):
        self.base = family.base_radius
        s = np.linspace(-_Q, _Q, grid + 1)
        S, T = np.meshgrid(s, s, indexing="ij")
        x, w = np.polynomial.legendre.leggauss(order)
        GS, GT = np.meshgrid(x * _Q, x * _Q, indexing="ij")
        weights = np.outer(w, w) * _Q * _Q
        self.charts, self.quad = [], []
        for face in range(6):
            dj = _cube_direction_jet(face, S, T)
            self.charts.append((dj, self._basis_jets(family.basis, dj)))
            d, ds, dt = _cube_direction_jet(face, GS, GT)[:3]
            jac = _dot(d, np.cross(ds, dt)) * weights
            vals = np.array([b.value(d) for b in family.basis]).reshape(len(family.basis), jac.size)
            self.quad.append((jac.ravel(), vals))

    @staticmethod
    def _basis_jets(basis, dj):
        d, ds, dt, dss, dst, dtt = dj
        out = []
        for b in basis:
            fv, g, H = b.derivatives(d)
            Hds = np.einsum("...ij,...j->...i", H, ds)
            Hdt = np.einsum("...ij,...j->...i", H, dt)
            out.append((fv, _dot(g, ds), _dot(g, dt), _dot(ds, Hds) + _dot(g, dss),
                        _dot(ds, Hdt) + _dot(g, dst), _dot(dt, Hdt) + _dot(g, dtt)))
        return np.array(out) if out else np.zeros((0, 6) + d.shape[:-1])

    def __call__(self, c):
        """Return ``(max |curvature|, max radius, min radius, volume)``."""
        c = np.asarray(c, float)
        kmax, rmax, rmin = 0.0, 0.0, math.inf
        for (d, ds, dt, dss, dst, dtt), tab in self.charts:
            R, Rs, Rt, Rss, Rst, Rtt = np.tensordot(c, tab, axes=1) if len(c) else np.zeros((6,) + d.shape[:-1])
            R = R + self.base
            rmax, rmin = max(rmax, float(R.max())), min(rmin, float(R.min()))
            if rmin <= 0:
                return math.inf, rmax, rmin, math.nan
            R, Rs, Rt, Rss, Rst, Rtt = (a[..., None] for a in (R, Rs, Rt, Rss, Rst, Rtt))
            qs = Rs * d + R * ds
            qt = Rt * d + R * dt
            qss = Rss * d + 2 * Rs * ds + R * dss
            qst = Rst * d + Rs * dt + Rt * ds + R * dst
            qtt = Rtt * d + 2 * Rt * dt + R * dtt
            n = np.cross(qs, qt)
            n = n / np.linalg.norm(n, axis=-1, keepdims=True)
            ff = FundamentalForms(E=_dot(qs, qs), F=_dot(qs, qt), G=_dot(qt, qt),
                                  L=_dot(qss, n), M=_dot(qst, n), N=_dot(qtt, n),
                                  normal=n, point=R * d)
            k1, k2 = _principal(ff)
            kmax = max(kmax, float(np.max(np.maximum(np.abs(k1), np.abs(k2)))))
        vol = 0.0
        for jac, vals in self.quad:
            R = self.base + c @ vals if len(c) else np.full(jac.shape, self.base)
            vol += float(np.sum(jac * R ** 3)) / 3.0
        return kmax, rmax, rmin, vol


def probe_min_volume(config: ProbeConfig = ProbeConfig(), verify=True, verify_grid=64) -> ProbeResult:
    """Minimize enclosed volume over the family subject to both hypotheses.

    Raises
    ------
    NoFeasibleStart
        If none of the seeded starts satisfies the hypotheses.
    """
    family = RadialFamily(config.dimension, config.base_radius)
    screen = _Screen(family, config.grid, config.volume_order)
    rng = np.random.default_rng(config.seed)
    log: list[Evaluation] = []
    restart_id = [0]

    def evaluate(c, charge=True):
        c = tuple(float(x) for x in c)
        kmax, rmax, rmin, vol = screen(c)
        kv = max(0.0, kmax - 1.0 - CURVATURE_SLACK_ANALYTIC)
        rv = max(0.0, rmax - 2.0 + CONTAINMENT_SLACK)
        violation = config.curvature_weight * kv + config.containment_weight * rv
        e = Evaluation(len(log), restart_id[0], c, float(vol), kmax, rmax, violation == 0.0, float(violation))
        if charge:
            log.append(e)
        return e

    if config.start is not None:
        first = np.array(config.start, float)
    else:
        first = np.zeros(config.dimension)
        if config.dimension:
            first[0] = config.start_inflation
    starts = [first]
    for _ in range(config.restarts - 1):
        s = first + config.start_spread * rng.standard_normal(config.dimension)
        starts.append(s)

    screened = [evaluate(s, charge=False) for s in starts]
    feasible_starts = [(i, s) for i, (s, e) in enumerate(zip(starts, screened)) if e.feasible]
    if not feasible_starts:
        raise NoFeasibleStart(f"none of {len(starts)} seeded starts satisfies the hypotheses")

    best = min((screened[i] for i, _ in feasible_starts), key=lambda e: e.volume)

    class _Budget(Exception):
        pass

    def objective(c):
        if len(log) >= config.budget:
            raise _Budget
        e = evaluate(c)
        return e.volume if e.feasible else math.inf

    if config.dimension and config.budget:
        for k, (i, s) in enumerate(feasible_starts):
            remaining = config.budget - len(log)
            if remaining <= 0:
                break
            restart_id[0] = i
            share = remaining // (len(feasible_starts) - k)
            simplex = np.vstack([s, s + config.simplex_step * np.eye(config.dimension)])
            try:
                minimize(objective, s, method="Nelder-Mead",
                         options={"maxfev": max(share, 1), "initial_simplex": simplex,
                                  "xatol": 1e-10, "fatol": 1e-12, "adaptive": config.dimension > 4})
            except _Budget:
                break

    # the seeded start competes too: with budget 0 it is the only candidate
    candidates = sorted([best] + [e for e in log if e.feasible], key=lambda e: e.volume)
    # the best point must still pass both checks at twice the screening density
    chosen, rejected = None, []
    for e in candidates:
        surf = family.surface(e.coefficients)
        kc = check_curvature_hypothesis(surf, grid=2 * config.grid)
        bc = check_bounding_ball(surf, grid=2 * config.grid)
        if kc.passed and bc.passed:
            chosen = e
            break
        rejected.append(e.iteration)
    if chosen is None:
        raise NoFeasibleStart("no screened point survived the doubled-density recheck")
    recheck = {"grid": 2 * config.grid, "max_curvature": kc.value, "max_radius": bc.value,
               "rejected": rejected}

    surf = family.surface(chosen.coefficients)
    report = verify_theorem(surf, grid=verify_grid) if verify else None
    return ProbeResult(config, chosen.coefficients, chosen.volume, report, log, recheck)
