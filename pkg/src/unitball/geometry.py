"""Numeric differential geometry of parametric patches.

Everything here is vectorized over numpy arrays of parameters: a patch
evaluated at ``u`` and ``v`` of shape ``S`` returns points of shape
``S + (3,)``.  Curvatures use the convex-positive sign convention: with the
outward normal, a round sphere of radius ``r`` has both principal curvatures
equal to ``+1/r``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import DegeneratePatch

REGULARITY_TOL = 1e-12


class ParamPoint(NamedTuple):
    """A parameter point ``(u, v)`` on patch number ``patch`` of a surface."""

    patch: int
    u: float
    v: float


def _dot(a, b):
    return np.einsum("...i,...i->...", a, b)


def _norm(a):
    return np.sqrt(_dot(a, a))


class Patch:
    """A smooth map from the rectangle ``[u0, u1] x [v0, v1]`` into 3-space.

    Parameters
    ----------
    position : callable
        ``position(u, v) -> (..., 3)`` array.
    domain : tuple
        ``(u0, u1, v0, v1)``.
    jet : callable, optional
        ``jet(u, v) -> (r, r_u, r_v, r_uu, r_uv, r_vv)`` in closed form.  When
        omitted, central finite differences of ``position`` are used.
    orientation : int
        ``+1`` if ``r_u x r_v`` points outward, ``-1`` otherwise.
    interior : array_like, optional
        If given, the orientation is chosen so the normal at the domain
        centre points away from this point.
    periodic : (bool, bool)
        Whether parameters wrap around in ``u`` and ``v``.
    inverse : callable, optional
        ``inverse(points) -> (u, v)`` for points on the patch.
    resolution : (float, float)
        Tessellation weights; a density ``n`` gives ``ceil(w * n)`` cells.
    """

    def __init__(
        self,
        position: Callable,
        domain,
        jet: Optional[Callable] = None,
        orientation: int = 1,
        interior=None,
        periodic=(False, False),
        inverse: Optional[Callable] = None,
        resolution=(1.0, 1.0),
        label: str = "",
    ):
        self.position = position
        self.domain = tuple(float(x) for x in domain)
        self._jet = jet
        self.periodic = tuple(periodic)
        self.inverse = inverse
        self.resolution = tuple(resolution)
        self.label = label
        u0, u1, v0, v1 = self.domain
        extent = max(u1 - u0, v1 - v0)
        self.fd_step = max(1e-5, 1e-7 * extent)
        self.orientation = 1
        if interior is not None:
            uc, vc = 0.5 * (u0 + u1), 0.5 * (v0 + v1)
            p, ru, rv = self.jet(uc, vc)[:3]
            side = _dot(p - np.asarray(interior, float), np.cross(ru, rv))
            self.orientation = 1 if side >= 0 else -1
        else:
            self.orientation = 1 if orientation >= 0 else -1

    @property
    def analytic(self) -> bool:
        return self._jet is not None

    def __repr__(self):
        return f"Patch({self.label!r}, domain={self.domain}, orientation={self.orientation})"

    def contains(self, u, v, slack=0.0):
        u0, u1, v0, v1 = self.domain
        return (u0 - slack <= u <= u1 + slack) and (v0 - slack <= v <= v1 + slack)

    def wrap(self, u, v):
        """Reduce periodic parameters into the domain."""
        u0, u1, v0, v1 = self.domain
        if self.periodic[0]:
            u = u0 + np.mod(u - u0, u1 - u0)
        if self.periodic[1]:
            v = v0 + np.mod(v - v0, v1 - v0)
        return u, v

    def jet(self, u, v):
        u = np.asarray(u, float)
        v = np.asarray(v, float)
        if self._jet is not None:
            return self._jet(u, v)
        return self.fd_jet(u, v)

    def fd_jet(self, u, v):
        """Central finite-difference derivatives of ``position``."""
        u = np.asarray(u, float)
        v = np.asarray(v, float)
        h = self.fd_step
        # second differences lose eps/h^2 to cancellation, so they take a 10x wider stencil
        k = 10 * h
        P = self.position
        p = P(u, v)
        ru = (P(u + h, v) - P(u - h, v)) / (2 * h)
        rv = (P(u, v + h) - P(u, v - h)) / (2 * h)
        ruu = (P(u + k, v) - 2 * p + P(u - k, v)) / (k * k)
        rvv = (P(u, v + k) - 2 * p + P(u, v - k)) / (k * k)
        ruv = (P(u + k, v + k) - P(u + k, v - k) - P(u - k, v + k) + P(u - k, v - k)) / (4 * k * k)
        return p, ru, rv, ruu, ruv, rvv

    def with_finite_differences(self) -> "Patch":
        """Copy of this patch that ignores its closed-form derivatives."""
        q = Patch(self.position, self.domain, jet=None, orientation=self.orientation,
                  periodic=self.periodic, inverse=self.inverse,
                  resolution=self.resolution, label=self.label)
        return q

    def flipped(self) -> "Patch":
        q = Patch(self.position, self.domain, jet=self._jet, orientation=-self.orientation,
                  periodic=self.periodic, inverse=self.inverse,
                  resolution=self.resolution, label=self.label)
        return q

    def transformed(self, rotation, translation) -> "Patch":
        """Apply the rigid motion ``x -> R x + t``."""
        R = np.asarray(rotation, float)
        t = np.asarray(translation, float)
        base_pos, base_jet, base_inv = self.position, self._jet, self.inverse

        def position(u, v):
            return base_pos(u, v) @ R.T + t

        jet = None
        if base_jet is not None:
            def jet(u, v):
                p, *rest = base_jet(u, v)
                return (p @ R.T + t,) + tuple(d @ R.T for d in rest)

        inverse = None
        if base_inv is not None:
            def inverse(points):
                return base_inv((np.asarray(points, float) - t) @ R)

        orientation = self.orientation * (1 if np.linalg.det(R) > 0 else -1)
        q = Patch(position, self.domain, jet=jet, orientation=orientation,
                  periodic=self.periodic, inverse=inverse,
                  resolution=self.resolution, label=self.label)
        q.fd_step = self.fd_step
        return q

    def grid(self, n_u, n_v):
        """Node grid of ``n_u x n_v`` parameter values covering the domain."""
        u0, u1, v0, v1 = self.domain
        return np.meshgrid(np.linspace(u0, u1, n_u), np.linspace(v0, v1, n_v), indexing="ij")


@dataclass(frozen=True)
class FundamentalForms:
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    L: np.ndarray
    M: np.ndarray
    N: np.ndarray
    normal: np.ndarray
    point: np.ndarray


@dataclass(frozen=True)
class CurvatureSample:
    point: np.ndarray
    unit_normal: np.ndarray
    kappa1: np.ndarray
    kappa2: np.ndarray

    @property
    def kappa_max_abs(self):
        return np.maximum(np.abs(self.kappa1), np.abs(self.kappa2))


def unit_normal(patch: Patch, u, v, jet=None):
    """Outward unit normal; raises :class:`DegeneratePatch` at singular points."""
    p, ru, rv = (jet or patch.jet(u, v))[:3]
    n = np.cross(ru, rv)
    nn = _norm(n)
    scale = _norm(ru) * _norm(rv)
    if np.any(nn < REGULARITY_TOL * scale) or np.any(scale == 0):
        raise DegeneratePatch(f"|r_u x r_v| vanishes on {patch.label or 'patch'}")
    return patch.orientation * n / nn[..., None]


def fundamental_forms(patch: Patch, u, v) -> FundamentalForms:
    jet = patch.jet(u, v)
    p, ru, rv, ruu, ruv, rvv = jet
    n = unit_normal(patch, u, v, jet)
    return FundamentalForms(
        E=_dot(ru, ru), F=_dot(ru, rv), G=_dot(rv, rv),
        L=_dot(ruu, n), M=_dot(ruv, n), N=_dot(rvv, n),
        normal=n, point=p,
    )


def _principal(ff: FundamentalForms):
    E, F, G, L, M, N = ff.E, ff.F, ff.G, ff.L, ff.M, ff.N
    det = E * G - F ** 2
    # second form in the orthonormal frame (r_u/|r_u|, its in-plane complement):
    # the discriminant is a sum of squares, so umbilics do not lose half the digits
    a = L / E
    b = (E * M - F * L) / (E * np.sqrt(det))
    c = (E * E * N - 2 * E * F * M + F * F * L) / (E * det)
    mean = 0.5 * (a + c)
    root = np.hypot(0.5 * (a - c), b)
    # convex-positive sign convention flips the eigenvalues of the second form
    return -mean - root, -mean + root


def curvature_sample(patch: Patch, u, v) -> CurvatureSample:
    ff = fundamental_forms(patch, u, v)
    k1, k2 = _principal(ff)
    return CurvatureSample(point=ff.point, unit_normal=ff.normal, kappa1=k1, kappa2=k2)


def normal_curvature(patch: Patch, u, v, du, dv):
    """Normal curvature along the tangent direction ``du r_u + dv r_v``."""
    ff = fundamental_forms(patch, u, v)
    first = ff.E * du * du + 2 * ff.F * du * dv + ff.G * dv * dv
    second = ff.L * du * du + 2 * ff.M * du * dv + ff.N * dv * dv
    return -second / first


def maximize_on_patch(patch: Patch, func, n=64, levels=3, factor=4, seeds=3):
    """Maximize ``func(patch, u, v)`` (vectorized) on a grid, then refine.

    The best ``seeds`` grid nodes are each refined ``levels`` times by a
    ``factor``-times finer grid over the neighbouring cells.
    Returns ``(value, u, v)``.
    """
    u0, u1, v0, v1 = patch.domain
    nu = max(2, int(np.ceil(patch.resolution[0] * n))) + 1
    nv = max(2, int(np.ceil(patch.resolution[1] * n))) + 1
    U, V = patch.grid(nu, nv)
    vals = func(patch, U, V)
    order = np.argsort(vals, axis=None)[::-1][:seeds]
    best = (-np.inf, None, None)
    for flat in order:
        i, j = np.unravel_index(flat, vals.shape)
        uc, vc = U[i, j], V[i, j]
        hu, hv = (u1 - u0) / (nu - 1), (v1 - v0) / (nv - 1)
        val = vals[i, j]
        for _ in range(levels):
            ua = np.linspace(uc - hu, uc + hu, 2 * factor + 1)
            va = np.linspace(vc - hv, vc + hv, 2 * factor + 1)
            if not patch.periodic[0]:
                ua = np.clip(ua, u0, u1)
            if not patch.periodic[1]:
                va = np.clip(va, v0, v1)
            UU, VV = np.meshgrid(ua, va, indexing="ij")
            fv = func(patch, UU, VV)
            k = np.unravel_index(np.argmax(fv), fv.shape)
            if fv[k] >= val:
                val, uc, vc = fv[k], UU[k], VV[k]
            hu, hv = hu / factor, hv / factor
        if val > best[0]:
            best = (float(val), float(uc), float(vc))
    return best


def _kmax(patch, u, v):
    return curvature_sample(patch, u, v).kappa_max_abs


def max_abs_normal_curvature(patch: Patch, n=64, levels=3, factor=4):
    """Largest ``max(|k1|, |k2|)`` on the patch and where it is attained."""
    val, u, v = maximize_on_patch(patch, _kmax, n=n, levels=levels, factor=factor)
    return val, (u, v)
