"""Radial profiles for static, spherically symmetric 3-metrics with lapse.

A profile packages the three functions that determine the geometry in the
radial chart::

    g = A(r)^2 dr^2 + Rareal(r)^2 * (round unit-sphere metric),    lapse N(r)

together with a coordinate domain [r_lo, r_hi].  Every analytic profile
carries two exact derivatives of each function, so downstream curvature
formulas never fall back on finite differencing; the independent
finite-difference oracle in :mod:`photonlab.curvature` only ever consumes
function *values*.

Units are geometric (G = c = 1); masses and radii share one length unit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
from scipy.interpolate import CubicSpline

__all__ = [
    "ProfileKind",
    "DomainError",
    "EndpointDegeneracyError",
    "BuchdahlError",
    "RadialFunction",
    "RadialProfile",
    "CompositeProfile",
    "make_schwarzschild_exterior",
    "make_schwarzschild_family",
    "make_schwarzschild_neck",
    "make_interior_fluid",
    "make_tabulated",
    "make_composite_star",
    "buchdahl_ratio",
    "load_profile",
    "dump_profile",
]


class ProfileKind(str, Enum):
    SCHWARZSCHILD_EXTERIOR = "schwarzschild_exterior"
    SCHWARZSCHILD_NECK = "schwarzschild_neck"
    INTERIOR_FLUID = "interior_fluid"
    TABULATED = "tabulated"
    COMPOSITE_REFERENCE = "composite_reference"


class DomainError(ValueError):
    """Evaluation requested outside a profile's coordinate domain."""


class EndpointDegeneracyError(DomainError):
    """Evaluation requested at a domain endpoint where the chart degenerates.

    Quantities may still admit one-sided limits; ``side`` records which
    endpoint was hit so callers can substitute the limit where one exists.
    """

    def __init__(self, message: str, r: float, side: str):
        super().__init__(message)
        self.r = r
        self.side = side  # "lo" or "hi"


class BuchdahlError(ValueError):
    """Compactness 2m/R of a fluid body at or beyond the 8/9 bound."""

    def __init__(self, message: str, ratio: float):
        super().__init__(message)
        self.ratio = ratio


class RadialFunction:
    """A scalar function of the radial coordinate with two derivatives.

    Thin wrapper around three vectorized callables (value, first and second
    derivative).  Calling convention follows scipy's spline API:
    ``f(r, nu)`` returns the ``nu``-th derivative.
    """

    __slots__ = ("_d",)

    def __init__(self, d0, d1, d2):
        self._d = (d0, d1, d2)

    def __call__(self, r, nu: int = 0):
        return self._d[nu](r)

    # -- constructors -------------------------------------------------

    @staticmethod
    def constant(c: float) -> "RadialFunction":
        # r * 0.0 + c preserves shape and floating dtype (incl. longdouble)
        return RadialFunction(
            lambda r: r * 0.0 + c,
            lambda r: r * 0.0,
            lambda r: r * 0.0,
        )

    @staticmethod
    def coordinate() -> "RadialFunction":
        return RadialFunction(
            lambda r: r,
            lambda r: r * 0.0 + 1.0,
            lambda r: r * 0.0,
        )

    @staticmethod
    def from_spline(spline: CubicSpline) -> "RadialFunction":
        return RadialFunction(
            lambda r: spline(r),
            lambda r: spline(r, 1),
            lambda r: spline(r, 2),
        )

    # -- calculus combinators -----------------------------------------

    def product(self, other: "RadialFunction") -> "RadialFunction":
        u, v = self, other
        return RadialFunction(
            lambda r: u(r) * v(r),
            lambda r: u(r, 1) * v(r) + u(r) * v(r, 1),
            lambda r: u(r, 2) * v(r) + 2.0 * u(r, 1) * v(r, 1) + u(r) * v(r, 2),
        )

    def quotient(self, other: "RadialFunction") -> "RadialFunction":
        u, v = self, other

        def d1(r):
            vv = v(r)
            return (u(r, 1) * vv - u(r) * v(r, 1)) / (vv * vv)

        def d2(r):
            vv, dv = v(r), v(r, 1)
            return (
                u(r, 2) * vv * vv
                - u(r) * v(r, 2) * vv
                - 2.0 * u(r, 1) * dv * vv
                + 2.0 * u(r) * dv * dv
            ) / (vv * vv * vv)

        return RadialFunction(lambda r: u(r) / v(r), d1, d2)

    def scaled(self, c: float) -> "RadialFunction":
        u = self
        return RadialFunction(
            lambda r: c * u(r), lambda r: c * u(r, 1), lambda r: c * u(r, 2)
        )

    def shifted(self, c: float) -> "RadialFunction":
        u = self
        return RadialFunction(lambda r: u(r) + c, lambda r: u(r, 1), lambda r: u(r, 2))

    def plus(self, other: "RadialFunction") -> "RadialFunction":
        u, v = self, other
        return RadialFunction(
            lambda r: u(r) + v(r),
            lambda r: u(r, 1) + v(r, 1),
            lambda r: u(r, 2) + v(r, 2),
        )

    def compose(self, inner: "RadialFunction") -> "RadialFunction":
        """(f o inner)(x) = f(inner(x)), derivatives by the chain rule."""
        f, g = self, inner

        def d1(x):
            return f(g(x), 1) * g(x, 1)

        def d2(x):
            gx, dg = g(x), g(x, 1)
            return f(gx, 2) * dg * dg + f(gx, 1) * g(x, 2)

        return RadialFunction(lambda x: f(g(x)), d1, d2)

    def compose_inverse(self) -> "RadialFunction":
        """Pull back along the coordinate inversion x -> 1/x.

        Returns g with g(x) = f(1/x); derivatives follow from the chain rule.
        Used to study asymptotic ends near x = 0.
        """
        f = self

        def d1(x):
            return -f(1.0 / x, 1) / (x * x)

        def d2(x):
            ix = 1.0 / x
            return f(ix, 2) / (x ** 4) + 2.0 * f(ix, 1) / (x ** 3)

        return RadialFunction(lambda x: f(1.0 / x), d1, d2)


def _reciprocal(f: RadialFunction) -> RadialFunction:
    return RadialFunction.constant(1.0).quotient(f)


@dataclass(frozen=True)
class RadialProfile:
    """A static spherically symmetric geometry in the radial chart.

    Attributes
    ----------
    kind : ProfileKind
        Construction family; drives a few fused evaluation shortcuts.
    r_lo, r_hi : float
        Coordinate domain (closed interval).
    N, A, Rareal : RadialFunction
        Lapse, radial metric factor (g_rr = A^2) and areal radius of the
        coordinate spheres.
    mass : float or None
        Mass parameter of closed-form kinds (the neck stores its own mass
        parameter here).
    degenerate_lo, degenerate_hi : bool
        Marks a domain endpoint where the chart degenerates (horizon at
        A -> infinity, or the center r = 0); direct evaluation there raises
        :class:`EndpointDegeneracyError`.
    meta : dict
        Extra construction data (star radius, density, node arrays, ...).
    """

    kind: ProfileKind
    r_lo: float
    r_hi: float
    N: RadialFunction
    A: RadialFunction
    Rareal: RadialFunction
    mass: float | None = None
    degenerate_lo: bool = False
    degenerate_hi: bool = False
    meta: dict = field(default_factory=dict)

    # -- domain management --------------------------------------------

    def contains(self, r) -> bool:
        return bool(np.all((np.asarray(r) >= self.r_lo) & (np.asarray(r) <= self.r_hi)))

    def ensure_evaluable(self, r, *, open_interior: bool = False) -> None:
        """Validate sample points, raising on domain or degeneracy faults."""
        arr = np.atleast_1d(np.asarray(r, dtype=float))
        if np.any(arr < self.r_lo) or np.any(arr > self.r_hi):
            raise DomainError(
                f"radius outside profile domain [{self.r_lo}, {self.r_hi}]"
            )
        hit_lo = np.any(arr == self.r_lo)
        hit_hi = np.any(arr == self.r_hi)
        if hit_lo and (self.degenerate_lo or open_interior):
            if self.degenerate_lo:
                raise EndpointDegeneracyError(
                    "chart degenerates at r_lo; only the one-sided limit from "
                    "above is defined",
                    self.r_lo,
                    "lo",
                )
            raise DomainError("operation requires the open interior; r == r_lo")
        if hit_hi and (self.degenerate_hi or open_interior):
            if self.degenerate_hi:
                raise EndpointDegeneracyError(
                    "chart degenerates at r_hi; only the one-sided limit from "
                    "below is defined",
                    self.r_hi,
                    "hi",
                )
            raise DomainError("operation requires the open interior; r == r_hi")

    def interior_window(self, pad: float = 0.0) -> tuple[float, float]:
        """Largest closed window avoiding degenerate endpoints by ``pad``."""
        lo, hi = self.r_lo, self.r_hi
        span = hi - lo
        if self.degenerate_lo:
            lo = lo + max(pad, 1e-9) * span
        if self.degenerate_hi:
            hi = hi - max(pad, 1e-9) * span
        return lo, hi

    def restricted(self, r_lo: float, r_hi: float) -> "RadialProfile":
        """Same geometry on a narrower domain; moved endpoints lose
        degeneracy flags."""
        if not (self.r_lo <= r_lo < r_hi <= self.r_hi):
            raise DomainError("restriction must be a subinterval of the domain")
        return replace(
            self,
            r_lo=float(r_lo),
            r_hi=float(r_hi),
            degenerate_lo=self.degenerate_lo and r_lo == self.r_lo,
            degenerate_hi=self.degenerate_hi and r_hi == self.r_hi,
        )

    # -- fused evaluations that survive horizon endpoints --------------

    def nu_N(self, r):
        """Outward-normal derivative of the lapse, N'(r)/A(r).

        Uses a per-kind fused form where the raw quotient is indeterminate
        (neck horizon: N' and A both diverge while the ratio stays finite).
        """
        if self.kind in (
            ProfileKind.SCHWARZSCHILD_EXTERIOR,
            ProfileKind.SCHWARZSCHILD_NECK,
        ):
            # N = sqrt(1 - 2m/r), A = 1/N  =>  N'/A = m/r^2 exactly.
            return self.mass / (np.asanyarray(r) ** 2 if np.ndim(r) else r * r)
        if self.kind is ProfileKind.INTERIOR_FLUID:
            # N' = k r / (2 w), A = 1/w  =>  N'/A = k r / 2.
            return 0.5 * self.meta["curvature_k"] * r
        return self.N(r, 1) / self.A(r)

    def sphere_mean_curvature(self, r):
        """Mean curvature 2 Rareal'/(A Rareal) of the r = const sphere.

        Fused per kind so horizon endpoints give an exact 0 instead of a
        division by an infinite radial factor.
        """
        if self.kind in (
            ProfileKind.SCHWARZSCHILD_EXTERIOR,
            ProfileKind.SCHWARZSCHILD_NECK,
        ):
            return 2.0 * self.N(r) / r
        if self.kind is ProfileKind.INTERIOR_FLUID:
            k = self.meta["curvature_k"]
            return 2.0 * np.sqrt(1.0 - k * r * r) / r
        return 2.0 * self.Rareal(r, 1) / (self.A(r) * self.Rareal(r))


# ---------------------------------------------------------------------------
# Closed-form constructors
# ---------------------------------------------------------------------------


def _schwarzschild_functions(m: float):
    """Lapse / radial factor / areal radius triple for mass parameter m."""

    def n0(r):
        return np.sqrt(1.0 - 2.0 * m / r)

    def n1(r):
        return m / (r * r * n0(r))

    def n2(r):
        n = n0(r)
        return -2.0 * m / (r ** 3 * n) - m * m / (r ** 4 * n ** 3)

    lapse = RadialFunction(n0, n1, n2)

    def a0(r):
        return 1.0 / n0(r)

    def a1(r):
        n = n0(r)
        return -n1(r) / (n * n)

    def a2(r):
        n = n0(r)
        dn = n1(r)
        return -n2(r) / (n * n) + 2.0 * dn * dn / (n ** 3)

    radial = RadialFunction(a0, a1, a2)
    return lapse, radial, RadialFunction.coordinate()


def make_schwarzschild_family(
    mass: float, r_lo: float, r_hi: float
) -> RadialProfile:
    """Schwarzschild profile for any mass sign (reference family).

    The domain must avoid the horizon when ``mass > 0`` and must be positive
    in every case.  Negative and zero masses give horizonless profiles used
    as no-photon-sphere controls.
    """
    if not (r_lo < r_hi):
        raise DomainError("require r_lo < r_hi")
    if r_lo <= 0.0:
        raise DomainError("require r_lo > 0")
    if mass > 0.0 and r_lo <= 2.0 * mass:
        raise DomainError("domain must stay outside the horizon r = 2m")
    lapse, radial, areal = _schwarzschild_functions(mass)
    return RadialProfile(
        kind=ProfileKind.SCHWARZSCHILD_EXTERIOR,
        r_lo=float(r_lo),
        r_hi=float(r_hi),
        N=lapse,
        A=radial,
        Rareal=areal,
        mass=float(mass),
    )


def make_schwarzschild_exterior(
    mass: float, r_lo: float, r_hi: float
) -> RadialProfile:
    """Vacuum exterior of positive mass; rejects domains touching r <= 2m."""
    if mass <= 0.0:
        raise DomainError("exterior constructor requires mass > 0")
    return make_schwarzschild_family(mass, r_lo, r_hi)


def make_schwarzschild_neck(mu: float, r_glue: float | None = None) -> RadialProfile:
    """Neck piece of mass parameter mu on [2 mu, r_glue], default r_glue = 3 mu.

    The lapse slot stores the raw collar factor sqrt(1 - 2 mu / r); the
    physical collar scaling is applied by the gluing layer.  The left
    endpoint is the horizon (A diverges there) and is flagged degenerate.
    ``r_glue`` different from 3 mu only occurs in deliberately corrupted
    gluings used as negative controls.
    """
    if mu <= 0.0:
        raise DomainError("neck mass parameter must be positive")
    r_lo = 2.0 * mu
    r_hi = 3.0 * mu if r_glue is None else float(r_glue)
    if not (r_hi > r_lo):
        raise DomainError("neck gluing radius must exceed the horizon radius")
    lapse, radial, areal = _schwarzschild_functions(mu)
    return RadialProfile(
        kind=ProfileKind.SCHWARZSCHILD_NECK,
        r_lo=r_lo,
        r_hi=r_hi,
        N=lapse,
        A=radial,
        Rareal=areal,
        mass=float(mu),
        degenerate_lo=True,
        meta={"mu": float(mu)},
    )


def buchdahl_ratio(mass: float, star_radius: float) -> float:
    return 2.0 * mass / star_radius


def make_interior_fluid(mass: float, star_radius: float) -> RadialProfile:
    """Constant-density fluid ball matching an exterior of mass ``mass``.

    Compactness must satisfy 2m/R < 8/9 strictly (central lapse positive);
    otherwise :class:`BuchdahlError` is raised with the offending ratio.
    The slice metric is a round cap, g_rr = 1/(1 - k r^2) with
    k = 2m/R^3, and the lapse interpolates between a positive center value
    and the exterior lapse at the boundary.  Density and central/boundary
    pressure are stored in ``meta`` for source-term verification.
    """
    if mass <= 0.0 or star_radius <= 0.0:
        raise DomainError("mass and star radius must be positive")
    ratio = buchdahl_ratio(mass, star_radius)
    if ratio >= 8.0 / 9.0:
        raise BuchdahlError(
            f"compactness 2m/R = {ratio:.6f} >= 8/9; no static fluid ball exists",
            ratio,
        )
    k = 2.0 * mass / star_radius ** 3
    f_b = np.sqrt(1.0 - ratio)  # boundary lapse value

    def w0(r):
        return np.sqrt(1.0 - k * r * r)

    def n0(r):
        return 1.5 * f_b - 0.5 * w0(r)

    def n1(r):
        return 0.5 * k * r / w0(r)

    def n2(r):
        w = w0(r)
        return 0.5 * k / w + 0.5 * (k * r) ** 2 / w ** 3

    def a0(r):
        return 1.0 / w0(r)

    def a1(r):
        return k * r / w0(r) ** 3

    def a2(r):
        w = w0(r)
        return k / w ** 3 + 3.0 * (k * r) ** 2 / w ** 5

    density = 3.0 * mass / (4.0 * np.pi * star_radius ** 3)

    def pressure(r):
        w = w0(r)
        return density * (w - f_b) / (3.0 * f_b - w)

    return RadialProfile(
        kind=ProfileKind.INTERIOR_FLUID,
        r_lo=0.0,
        r_hi=float(star_radius),
        N=RadialFunction(n0, n1, n2),
        A=RadialFunction(a0, a1, a2),
        Rareal=RadialFunction.coordinate(),
        mass=float(mass),
        degenerate_lo=True,  # coordinate spheres collapse at the center
        meta={
            "star_radius": float(star_radius),
            "curvature_k": k,
            "density": float(density),
            "pressure": pressure,
            "buchdahl_ratio": ratio,
        },
    )


# ---------------------------------------------------------------------------
# Tabulated profiles
# ---------------------------------------------------------------------------


def make_tabulated(r, N, A, Rareal) -> RadialProfile:
    """Profile interpolated from sampled nodes.

    Each channel becomes a not-a-knot cubic spline: nodes are reproduced
    exactly and the interpolant has continuous second derivatives, which is
    the minimum smoothness the curvature formulas consume.
    """
    r = np.asarray(r, dtype=float)
    if r.ndim != 1 or r.size < 4:
        raise DomainError("tabulated profile needs at least 4 nodes")
    if np.any(np.diff(r) <= 0.0):
        raise DomainError("tabulated nodes must be strictly increasing")
    cols = {}
    for name, vals in (("N", N), ("A", A), ("Rareal", Rareal)):
        v = np.asarray(vals, dtype=float)
        if v.shape != r.shape:
            raise DomainError(f"channel {name} shape does not match node array")
        cols[name] = v
    if np.any(cols["N"] <= 0.0) or np.any(cols["A"] <= 0.0):
        raise DomainError("tabulated N and A must be positive on all nodes")
    if np.any(cols["Rareal"] <= 0.0):
        raise DomainError("tabulated areal radius must be positive")
    funcs = {
        name: RadialFunction.from_spline(CubicSpline(r, v))
        for name, v in cols.items()
    }
    return RadialProfile(
        kind=ProfileKind.TABULATED,
        r_lo=float(r[0]),
        r_hi=float(r[-1]),
        N=funcs["N"],
        A=funcs["A"],
        Rareal=funcs["Rareal"],
        meta={
            "nodes": r.copy(),
            "values": {k: v.copy() for k, v in cols.items()},
        },
    )


def interpolation_error_bound(profile: RadialProfile) -> dict:
    """Crude per-channel error model for a tabulated profile.

    Estimates the fourth derivative of each channel from jumps of the
    spline's third derivative across interior nodes, then applies the
    classical cubic-interpolation bounds ~ h^4 |f''''|/384 for values and
    ~ h^2 |f''''|/12 for second derivatives (a safety factor of 8 absorbs
    constants the model drops).  Only meaningful for TABULATED profiles.
    """
    if profile.kind is not ProfileKind.TABULATED:
        raise DomainError("interpolation error model applies to tabulated profiles")
    nodes = profile.meta["nodes"]
    h = float(np.max(np.diff(nodes)))
    out = {}
    for name, fn in (("N", profile.N), ("A", profile.A), ("Rareal", profile.Rareal)):
        mids = nodes[1:-1]
        eps = 1e-7 * max(h, 1.0)
        jump3 = np.abs(
            np.asarray(fn(mids + eps, 2) - fn(mids - eps, 2)) / (2.0 * eps)
        )
        f4 = float(np.max(jump3)) / h if mids.size else 0.0
        out[name] = {
            "value": 8.0 * f4 * h ** 4 / 384.0,
            "d1": 8.0 * f4 * h ** 3 / 24.0,
            "d2": 8.0 * f4 * h ** 2 / 12.0,
        }
    out["spacing"] = h
    return out


# ---------------------------------------------------------------------------
# Composite (piecewise) profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CompositeProfile:
    """Piecewise radial geometry: contiguous profiles sharing breakpoints.

    Evaluation dispatches on the region containing r; breakpoints belong to
    the left piece (their right limits are reachable through the pieces
    directly).  Used for matter interiors matched to vacuum exteriors.
    """

    pieces: tuple[RadialProfile, ...]
    breakpoints: tuple[float, ...]

    def __post_init__(self):
        if len(self.pieces) < 2 or len(self.breakpoints) != len(self.pieces) - 1:
            raise DomainError("need n pieces and n-1 interior breakpoints")
        for left, right, b in zip(
            self.pieces[:-1], self.pieces[1:], self.breakpoints
        ):
            if not np.isclose(left.r_hi, b) or not np.isclose(right.r_lo, b):
                raise DomainError("pieces must abut exactly at each breakpoint")

    @property
    def r_lo(self) -> float:
        return self.pieces[0].r_lo

    @property
    def r_hi(self) -> float:
        return self.pieces[-1].r_hi

    def piece_at(self, r: float) -> RadialProfile:
        if not (self.r_lo <= r <= self.r_hi):
            raise DomainError("radius outside composite domain")
        for piece, b in zip(self.pieces[:-1], self.breakpoints):
            if r <= b:
                return piece
        return self.pieces[-1]

    def vacuum_piece(self) -> RadialProfile:
        return self.pieces[-1]


def make_composite_star(
    mass: float, star_radius: float, r_hi: float | None = None
) -> CompositeProfile:
    """Constant-density ball matched to its vacuum exterior at the surface.

    Raises :class:`BuchdahlError` when the body is too compact to be static.
    The matching is continuous in N and A by construction; the radial
    derivative of A jumps at the surface together with the density.
    """
    interior = make_interior_fluid(mass, star_radius)
    if r_hi is None:
        r_hi = 100.0 * mass
    exterior = make_schwarzschild_exterior(mass, star_radius, r_hi)
    return CompositeProfile(
        pieces=(interior, exterior), breakpoints=(float(star_radius),)
    )


# ---------------------------------------------------------------------------
# Profile (de)serialization — JSON document with a "kind" discriminator
# ---------------------------------------------------------------------------


def load_profile(source) -> RadialProfile:
    """Build a profile from a JSON document (path, file object, or dict).

    Supported kinds::

        {"kind": "schwarzschild", "mass": 1.0, "r_lo": 3.0, "r_hi": 100.0}
        {"kind": "tabulated", "r": [...], "N": [...], "A": [...], "Rareal": [...]}
    """
    if isinstance(source, dict):
        doc = source
    elif hasattr(source, "read"):
        doc = json.load(source)
    else:
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    if not isinstance(doc, dict) or "kind" not in doc:
        raise DomainError("profile document must be an object with a 'kind' key")
    kind = doc["kind"]
    if kind == "schwarzschild":
        try:
            return make_schwarzschild_family(
                float(doc["mass"]), float(doc["r_lo"]), float(doc["r_hi"])
            )
        except KeyError as exc:
            raise DomainError(f"schwarzschild profile missing key {exc}") from exc
    if kind == "tabulated":
        try:
            return make_tabulated(doc["r"], doc["N"], doc["A"], doc["Rareal"])
        except KeyError as exc:
            raise DomainError(f"tabulated profile missing key {exc}") from exc
    raise DomainError(f"unsupported profile kind {kind!r}")


def dump_profile(profile: RadialProfile) -> dict:
    """Serialize a profile to the JSON document format of :func:`load_profile`."""
    if profile.kind is ProfileKind.SCHWARZSCHILD_EXTERIOR:
        return {
            "kind": "schwarzschild",
            "mass": profile.mass,
            "r_lo": profile.r_lo,
            "r_hi": profile.r_hi,
        }
    if profile.kind is ProfileKind.TABULATED:
        vals = profile.meta["values"]
        return {
            "kind": "tabulated",
            "r": profile.meta["nodes"].tolist(),
            "N": vals["N"].tolist(),
            "A": vals["A"].tolist(),
            "Rareal": vals["Rareal"].tolist(),
        }
    raise DomainError(f"no document form for profile kind {profile.kind.value}")
