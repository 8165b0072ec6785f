"""Null geodesics, the optical (Fermat) rescaling, and photon-sphere search.

A photon sphere of a static profile shows up two independent ways:

* geometrically — the sphere is minimal in the optical metric obtained by
  dividing the spatial metric by N^2, so the rescaled mean curvature
  crosses zero there (:func:`fermat_geodesy_residual`); and
* dynamically — a tangentially launched null geodesic stays on the sphere
  (:func:`trapping_report`), while nearby launches peel off exponentially.

The residual root search is the primary detector; trapping corroborates it.
Trajectories integrate the full second-order geodesic system in
(t, r, phi) with an embedded Dormand-Prince 5(4) stepper, so the energy
E = N^2 dt/dl and angular momentum L = R^2 dphi/dl are *measured*
conserved quantities, not inputs held fixed by construction.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .radial import DomainError, ProfileKind, RadialProfile

__all__ = [
    "fermat_profile",
    "fermat_geodesy_residual",
    "photon_sphere_search",
    "impact_parameter",
    "NullGeodesicState",
    "GeodesicResult",
    "integrate_null_geodesic",
    "tangential_launch",
    "launch_with_momenta",
    "TrappingReport",
    "trapping_report",
    "write_trajectory_csv",
]


def fermat_profile(profile: RadialProfile) -> RadialProfile:
    """Optical rescaling: divide the spatial metric by N^2.

    Returns a profile with A -> A/N and Rareal -> Rareal/N and unit lapse
    (the optical metric is Riemannian data only).  Requires N > 0 on the
    whole domain, so horizon-touching profiles must be truncated first.
    """
    lo, hi = profile.r_lo, profile.r_hi
    if profile.degenerate_lo or profile.degenerate_hi:
        raise DomainError("optical rescaling requires N > 0 up to the boundary")
    probe = np.linspace(lo, hi, 64)
    if np.any(profile.N(probe) <= 0.0):
        raise DomainError("optical rescaling requires a positive lapse")
    from .radial import RadialFunction

    return RadialProfile(
        kind=ProfileKind.COMPOSITE_REFERENCE,
        r_lo=lo,
        r_hi=hi,
        N=RadialFunction.constant(1.0),
        A=profile.A.quotient(profile.N),
        Rareal=profile.Rareal.quotient(profile.N),
        mass=profile.mass,
        meta={"optical_of": profile.kind.value},
    )


def fermat_geodesy_residual(profile: RadialProfile, r):
    """Mean curvature of the r = const sphere in the optical metric.

    Simplifies to 2 (R' N - R N') / (A R); the N^2 factors of the rescaled
    profile cancel.  Zero exactly at photon spheres, positive where spheres
    bulge outward in the optical geometry.
    """
    n, dn = profile.N(r), profile.N(r, 1)
    a = profile.A(r)
    rr, drr = profile.Rareal(r), profile.Rareal(r, 1)
    return 2.0 * (drr * n - rr * dn) / (a * rr)


def impact_parameter(profile: RadialProfile, r):
    """Critical impact parameter Rareal/N of a tangential null ray at r."""
    return profile.Rareal(r) / profile.N(r)


def _refine_root(fun, lo, hi, flo, fhi, rtol):
    """Polish a sign-change bracket down to the requested tolerance.

    Brent's method runs until the bracket collapses to floating-point
    resolution (or the requested relative tolerance if looser), so
    downstream identity checks see roots accurate to the last few ulps.
    """
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    rtol = max(rtol, 4.0 * np.finfo(float).eps)
    return float(
        brentq(fun, lo, hi, xtol=rtol * max(abs(lo), abs(hi), 1.0), rtol=rtol)
    )


def photon_sphere_search(
    profile: RadialProfile,
    r_lo: float | None = None,
    r_hi: float | None = None,
    n_scan: int = 1024,
    rtol: float = 1e-14,
) -> list[float]:
    """All roots of the optical mean curvature on the (sub)domain.

    Scans ``n_scan`` radii for sign changes and refines each bracket with
    bisection + secant steps down to floating-point resolution.  Returns an
    increasing list of radii; an empty list is the definitive "no photon
    sphere" answer for profiles where the residual keeps one sign.
    """
    lo0, hi0 = profile.interior_window(pad=1e-7)
    lo = lo0 if r_lo is None else max(float(r_lo), lo0)
    hi = hi0 if r_hi is None else min(float(r_hi), hi0)
    if not (lo < hi):
        raise DomainError("empty search window")
    grid = np.linspace(lo, hi, int(n_scan))
    vals = np.asarray(fermat_geodesy_residual(profile, grid), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise DomainError("optical residual not finite on the search window")
    roots: list[float] = []

    def fun(x):
        return float(fermat_geodesy_residual(profile, x))

    for i in range(len(grid) - 1):
        f0, f1 = vals[i], vals[i + 1]
        if f0 == 0.0:
            roots.append(float(grid[i]))
            continue
        if f0 * f1 < 0.0:
            roots.append(
                float(
                    _refine_root(fun, float(grid[i]), float(grid[i + 1]), f0, f1, rtol)
                )
            )
    if vals[-1] == 0.0:
        roots.append(float(grid[-1]))
    # collapse near-duplicates from roots landing on scan nodes
    out: list[float] = []
    for root in sorted(roots):
        if not out or abs(root - out[-1]) > 1e-9 * max(1.0, abs(root)):
            out.append(root)
    return out


# ---------------------------------------------------------------------------
# Null geodesic integration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NullGeodesicState:
    """One accepted integrator step of an equatorial null geodesic."""

    lam: float
    r: float
    phi: float
    p_r: float
    E: float
    L: float
    constraint: float


@dataclass(frozen=True)
class GeodesicResult:
    states: list[NullGeodesicState]
    termination: str  # "window" | "domain_exit_outer" | "domain_exit_inner" | "step_underflow"
    max_constraint: float
    E_drift: float
    L_drift: float

    @property
    def radii(self) -> np.ndarray:
        return np.array([s.r for s in self.states])


# Dormand-Prince 5(4) tableau
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (
    5179 / 57600,
    0.0,
    7571 / 16695,
    393 / 640,
    -92097 / 339200,
    187 / 2100,
    1 / 40,
)


def _geodesic_rhs(profile: RadialProfile, y):
    """Second-order geodesic system in (t, r, phi, dt, dr, dphi)."""
    _, r, _, td, rd, pd = y
    n, dn = profile.N(r), profile.N(r, 1)
    a, da = profile.A(r), profile.A(r, 1)
    rr, drr = profile.Rareal(r), profile.Rareal(r, 1)
    inv_a2 = 1.0 / (a * a)
    return np.array(
        [
            td,
            rd,
            pd,
            -2.0 * (dn / n) * td * rd,
            (rr * drr * pd * pd - n * dn * td * td) * inv_a2 - (da / a) * rd * rd,
            -2.0 * (drr / rr) * rd * pd,
        ]
    )


def _observables(profile: RadialProfile, lam, y):
    _, r, phi, td, rd, pd = y
    n = profile.N(r)
    a = profile.A(r)
    rr = profile.Rareal(r)
    e = n * n * td
    ell = rr * rr * pd
    constraint = -(n * td) ** 2 + (a * rd) ** 2 + (rr * pd) ** 2
    return NullGeodesicState(
        lam=float(lam),
        r=float(r),
        phi=float(phi),
        p_r=float(a * a * rd),
        E=float(e),
        L=float(ell),
        constraint=float(constraint),
    )


def tangential_launch(
    profile: RadialProfile, r0: float, E: float = 1.0, L: float | None = None
):
    """Initial condition for a null ray launched tangent to the r0 sphere.

    When ``L`` is omitted it is set to E * Rareal/N at the launch radius
    (the tangency condition); passing it explicitly lets callers reproduce
    book values exactly.
    """
    profile.ensure_evaluable(r0, open_interior=True)
    n = float(profile.N(r0))
    rr = float(profile.Rareal(r0))
    if L is None:
        L = E * rr / n
    td = E / (n * n)
    pd = L / (rr * rr)
    return np.array([0.0, float(r0), 0.0, td, 0.0, pd])


def launch_with_momenta(
    profile: RadialProfile, r0: float, E: float, L: float, outgoing: bool = True
):
    """Initial condition with radial motion fixed by the null constraint."""
    profile.ensure_evaluable(r0, open_interior=True)
    n = float(profile.N(r0))
    a = float(profile.A(r0))
    rr = float(profile.Rareal(r0))
    rd_sq = ((E / n) ** 2 - (L / rr) ** 2) / (a * a)
    if rd_sq < 0.0:
        raise DomainError("E, L incompatible with a null ray at this radius")
    rd = math.sqrt(rd_sq) * (1.0 if outgoing else -1.0)
    return np.array([0.0, float(r0), 0.0, E / (n * n), rd, L / (rr * rr)])


def integrate_null_geodesic(
    profile: RadialProfile,
    y0,
    lam_max: float,
    tol: float = 1e-12,
    inner_margin: float = 1e-6,
    max_steps: int = 2_000_000,
) -> GeodesicResult:
    """Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) trajectory.

    Steps are accepted on the mixed error norm at relative/absolute
    tolerance ``tol``; every accepted step records the state with its
    measured null-constraint violation.  Integration stops at the affine
    window ``lam_max``, on leaving the radial domain (outward or within
    ``inner_margin`` of the inner boundary, where horizons live), or on
    step-size underflow, which is reported in ``termination`` rather than
    silently swallowed.
    """
    lo, hi = profile.r_lo, profile.r_hi
    inner_stop = lo + inner_margin * max(1.0, abs(lo))
    lam = 0.0
    y = np.array(y0, dtype=float)
    states = [_observables(profile, lam, y)]
    e0, l0 = states[0].E, states[0].L
    max_con = abs(states[0].constraint)
    if max_con > 1e-10 * max(e0 * e0, 1e-30):
        raise DomainError(
            f"initial data is not null: constraint {states[0].constraint:.3e} "
            f"relative to E^2"
        )
    e_drift = l_drift = 0.0
    scale_e = max(abs(e0), 1e-30)
    scale_l = max(abs(l0), abs(e0) * max(abs(states[0].r), 1.0))

    h = min(1e-3 * max(1.0, abs(y[1])), lam_max / 10.0)
    termination = "window"
    k = np.zeros((7, 6))
    steps = 0
    while lam < lam_max:
        if steps >= max_steps:
            termination = "step_underflow"
            break
        steps += 1
        h = min(h, lam_max - lam)
        if h < 1e-14 * max(1.0, lam):
            termination = "step_underflow"
            break
        try:
            k[0] = _geodesic_rhs(profile, y)
            for i in range(1, 7):
                yi = y + h * sum(
                    aij * k[j] for j, aij in enumerate(_DP_A[i]) if aij != 0.0
                )
                if not (lo < yi[1] < hi):
                    raise _LeftDomain(yi[1])
                k[i] = _geodesic_rhs(profile, yi)
        except _LeftDomain as exc:
            # A stage left the chart: either terminate (at the true edge) or
            # shrink the step and retry.
            if h <= 1e-12 * max(1.0, lam):
                termination = (
                    "domain_exit_outer" if exc.r >= hi else "domain_exit_inner"
                )
                break
            h *= 0.25
            continue
        y5 = y + h * sum(b * k[i] for i, b in enumerate(_DP_B5) if b != 0.0)
        y4 = y + h * sum(b * k[i] for i, b in enumerate(_DP_B4) if b != 0.0)
        scale = tol + tol * np.maximum(np.abs(y), np.abs(y5))
        err = float(np.sqrt(np.mean(((y5 - y4) / scale) ** 2)))
        if err <= 1.0:
            lam += h
            y = y5
            if not (inner_stop < y[1] < hi):
                termination = (
                    "domain_exit_outer" if y[1] >= hi else "domain_exit_inner"
                )
                states.append(_observables(profile, lam, y))
                break
            st = _observables(profile, lam, y)
            states.append(st)
            max_con = max(max_con, abs(st.constraint))
            e_drift = max(e_drift, abs(st.E - e0) / scale_e)
            l_drift = max(l_drift, abs(st.L - l0) / scale_l)
        h *= min(5.0, max(0.2, 0.9 * (1.0 / err) ** 0.2 if err > 0.0 else 5.0))
    return GeodesicResult(
        states=states,
        termination=termination,
        max_constraint=max_con,
        E_drift=e_drift,
        L_drift=l_drift,
    )


class _LeftDomain(Exception):
    def __init__(self, r):
        self.r = r


# ---------------------------------------------------------------------------
# Trapping verdicts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrappingReport:
    r0: float
    verdict: str  # "trapped" | "escaped" | "fell_in"
    max_radial_deviation: float
    affine_window: float
    trap_tol: float
    termination: str
    max_constraint: float


def trapping_report(
    profile: RadialProfile,
    r0: float,
    affine_window: float | None = None,
    trap_tol: float | None = None,
    tol: float = 1e-12,
    E: float = 1.0,
) -> TrappingReport:
    """Integrate a tangential launch and classify the orbit.

    Defaults scale with the launch radius: the affine window is 50 and the
    deviation budget 1e-3 in units of r0/3 (the mass of the profile whose
    photon sphere sits at r0).  The budget is deliberately loose enough
    that integrator noise at tol = 1e-12 cannot fake an escape, yet tight
    against the exponential peel-off of off-sphere launches.
    """
    scale = r0 / 3.0
    window = 50.0 * scale if affine_window is None else float(affine_window)
    budget = 1e-3 * scale if trap_tol is None else float(trap_tol)
    y0 = tangential_launch(profile, r0, E=E)
    res = integrate_null_geodesic(profile, y0, window, tol=tol)
    dev = float(np.max(np.abs(res.radii - r0)))
    if res.termination == "domain_exit_inner":
        verdict = "fell_in"
    elif res.termination == "window" and dev <= budget:
        verdict = "trapped"
    else:
        verdict = "escaped"
    return TrappingReport(
        r0=float(r0),
        verdict=verdict,
        max_radial_deviation=dev,
        affine_window=window,
        trap_tol=budget,
        termination=res.termination,
        max_constraint=res.max_constraint,
    )


def write_trajectory_csv(path, result: GeodesicResult) -> None:
    """Emit one row per accepted step: lambda, r, phi, p_r, constraint."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lambda", "r", "phi", "p_r", "constraint"])
        for s in result.states:
            writer.writerow(
                [
                    f"{s.lam:.17g}",
                    f"{s.r:.17g}",
                    f"{s.phi:.17g}",
                    f"{s.p_r:.17g}",
                    f"{s.constraint:.17g}",
                ]
            )
