"""Curvature of radial profiles plus an independent finite-difference oracle.

Two routes to the same tensors, deliberately kept apart:

* :func:`curvature_at` evaluates closed-form expressions built from the
  profile's analytic derivatives.
* :func:`fd_curvature_oracle` rebuilds everything from centered finite
  differences of metric *values* — numerically assembled Christoffel
  symbols, nested differencing for their derivatives — so agreement between
  the two is a genuine cross-check, not a tautology.

The oracle works internally in extended precision (``np.longdouble``) so
its truncation error, not roundoff, dominates down to step sizes of 1e-4.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .radial import (
    DomainError,
    ProfileKind,
    RadialFunction,
    RadialProfile,
)

__all__ = [
    "CurvatureSample",
    "SurfaceGeometry",
    "curvature_at",
    "fd_curvature_oracle",
    "surface_geometry",
    "identity_residuals",
    "convergence_study",
]

_FIELDS = (
    "ric_nn",
    "ric_tt",
    "scalar",
    "hess_nn",
    "hess_tt",
    "lap_N",
    "vac_residual_nn",
    "vac_residual_tt",
    "scalar_residual",
    "lap_residual",
)


@dataclass(frozen=True)
class CurvatureSample:
    """Orthonormal-frame curvature and lapse-Hessian data at one radius.

    ``ric_nn``/``ric_tt`` are the Ricci components on the unit normal and a
    unit sphere-tangent vector; ``hess_*`` the matching lapse Hessian
    components; the four residual fields certify the static vacuum system
    N * Ric = Hess N, Lap N = 0, Scal = 0 (they are the amounts by which the
    sample fails it, so matter interiors report their source terms here).
    """

    r: float
    ric_nn: float
    ric_tt: float
    scalar: float
    hess_nn: float
    hess_tt: float
    lap_N: float
    vac_residual_nn: float
    vac_residual_tt: float
    scalar_residual: float
    lap_residual: float

    def max_vacuum_residual(self) -> float:
        return max(
            abs(self.vac_residual_nn),
            abs(self.vac_residual_tt),
            abs(self.scalar_residual),
            abs(self.lap_residual),
        )

    def difference(self, other: "CurvatureSample") -> float:
        """Largest field-wise deviation from another sample (same radius)."""
        return max(
            abs(getattr(self, f) - getattr(other, f)) for f in _FIELDS
        )


@dataclass(frozen=True)
class SurfaceGeometry:
    """First/second fundamental form data of one coordinate sphere.

    ``tracefree_h_norm`` is computed from the actual frame components of the
    second fundamental form rather than assumed zero, so asymmetry bugs
    would surface here.  ``minimal_surface`` marks a horizon endpoint where
    H has the one-sided limit 0.
    """

    r: float
    area: float
    area_radius: float
    H: float
    tracefree_h_norm: float
    nu_N: float
    sigma_scalar: float
    N_val: float
    minimal_surface: bool = False


def _frame_data(profile: RadialProfile, r):
    """Common proper-radial derivatives: everything downstream reads these."""
    n, dn, d2n = profile.N(r), profile.N(r, 1), profile.N(r, 2)
    a, da = profile.A(r), profile.A(r, 1)
    rr, drr, d2rr = profile.Rareal(r), profile.Rareal(r, 1), profile.Rareal(r, 2)
    r_s = drr / a
    r_ss = (d2rr - drr * da / a) / (a * a)
    n_s = dn / a
    n_ss = (d2n - dn * da / a) / (a * a)
    return n, a, da, rr, r_s, r_ss, n_s, n_ss, dn, d2n, drr, d2rr


def curvature_at(profile: RadialProfile, r: float) -> CurvatureSample:
    """Closed-form curvature sample at radius r (open interior only)."""
    profile.ensure_evaluable(r, open_interior=True)
    n, a, da, rr, r_s, r_ss, n_s, n_ss, dn, d2n, drr, d2rr = _frame_data(profile, r)

    ric_nn = -2.0 * r_ss / rr
    ric_tt = (1.0 - r_s * r_s - rr * r_ss) / (rr * rr)
    # Direct scalar formula; the trace identity scalar = ric_nn + 2 ric_tt is
    # asserted in tests rather than used for assembly.
    scalar = 2.0 / rr ** 2 - 2.0 * r_s ** 2 / rr ** 2 - 4.0 * r_ss / rr

    hess_nn = n_ss
    hess_tt = n_s * r_s / rr
    # Divergence-form Laplacian (independent grouping from hess_nn + 2 hess_tt).
    lap_n = (d2n + 2.0 * drr * dn / rr - dn * da / a) / (a * a)

    return CurvatureSample(
        r=float(r),
        ric_nn=float(ric_nn),
        ric_tt=float(ric_tt),
        scalar=float(scalar),
        hess_nn=float(hess_nn),
        hess_tt=float(hess_tt),
        lap_N=float(lap_n),
        vac_residual_nn=float(n * ric_nn - hess_nn),
        vac_residual_tt=float(n * ric_tt - hess_tt),
        scalar_residual=float(scalar),
        lap_residual=float(lap_n),
    )


# ---------------------------------------------------------------------------
# Finite-difference oracle
# ---------------------------------------------------------------------------


def _metric_lapse(profile: RadialProfile, r, th):
    """Coordinate metric diag(A^2, R^2, R^2 sin^2 th) and lapse, values only."""
    a = profile.A(r)
    rr = profile.Rareal(r)
    s = np.sin(th)
    return np.array([a * a, rr * rr, rr * rr * s * s]), profile.N(r)


def _christoffel(profile, r, th, h):
    """Christoffel symbols at (r, th) from centered differences of the metric.

    Returns gamma[c, a, b]; coordinate order (r, th, ph).  The metric is
    diagonal, so the inverse is taken entrywise.
    """
    g0, _ = _metric_lapse(profile, r, th)
    gr_p, _ = _metric_lapse(profile, r + h, th)
    gr_m, _ = _metric_lapse(profile, r - h, th)
    gt_p, _ = _metric_lapse(profile, r, th + h)
    gt_m, _ = _metric_lapse(profile, r, th - h)
    dg = np.zeros((3, 3, 3), dtype=g0.dtype)  # dg[e, a, a] = d_e g_aa
    for i in range(3):
        dg[0, i, i] = (gr_p[i] - gr_m[i]) / (2.0 * h)
        dg[1, i, i] = (gt_p[i] - gt_m[i]) / (2.0 * h)
    ginv = 1.0 / g0
    gamma = np.zeros((3, 3, 3), dtype=g0.dtype)
    for c in range(3):
        for a in range(3):
            for b in range(3):
                # diagonal metric: only the d-th = c-th inverse entry acts
                gamma[c, a, b] = (
                    0.5
                    * ginv[c]
                    * (
                        (dg[a, b, c] if b == c else 0.0)
                        + (dg[b, a, c] if a == c else 0.0)
                        - (dg[c, a, b] if a == b else 0.0)
                    )
                )
    return gamma


def fd_curvature_oracle(
    profile: RadialProfile, r: float, h: float = 1e-3
) -> CurvatureSample:
    """Curvature sample rebuilt from finite differences of metric values.

    Centered differences everywhere: Christoffel symbols from first
    differences of the metric, their derivatives from differences of
    Christoffel symbols at displaced stencils, the lapse Hessian from
    second differences of N.  Requires [r - 2h, r + 2h] inside the domain.
    Truncation error is O(h^2); internals run in extended precision so the
    O(eps/h^2) roundoff floor sits well below truncation for h >= 1e-4.
    """
    profile.ensure_evaluable(r, open_interior=True)
    if not (profile.r_lo < r - 2.0 * h and r + 2.0 * h < profile.r_hi):
        raise DomainError("finite-difference stencil leaves the profile domain")

    ld = np.longdouble
    rl, hl = ld(r), ld(h)
    th = ld(np.pi) / 2.0

    g0, _ = _metric_lapse(profile, rl, th)
    ginv = 1.0 / g0

    gam = _christoffel(profile, rl, th, hl)
    gam_rp = _christoffel(profile, rl + hl, th, hl)
    gam_rm = _christoffel(profile, rl - hl, th, hl)
    gam_tp = _christoffel(profile, rl, th + hl, hl)
    gam_tm = _christoffel(profile, rl, th - hl, hl)
    dgam = np.zeros((3, 3, 3, 3), dtype=g0.dtype)  # dgam[e, c, a, b]
    dgam[0] = (gam_rp - gam_rm) / (2.0 * hl)
    dgam[1] = (gam_tp - gam_tm) / (2.0 * hl)

    ric = np.zeros((3, 3), dtype=g0.dtype)
    for a in range(3):
        for b in range(3):
            s = ld(0.0)
            for c in range(3):
                s += dgam[c, c, a, b] if c < 2 else 0.0
                s -= dgam[a, c, c, b] if a < 2 else 0.0
                for d in range(3):
                    s += gam[c, c, d] * gam[d, a, b]
                    s -= gam[c, a, d] * gam[d, c, b]
            ric[a, b] = s

    # Lapse derivatives on the same stencils (theta-differences vanish by
    # symmetry but are computed, not assumed).
    def lapse(rv, tv):
        return _metric_lapse(profile, rv, tv)[1]

    n0 = lapse(rl, th)
    dn = np.array(
        [
            (lapse(rl + hl, th) - lapse(rl - hl, th)) / (2.0 * hl),
            (lapse(rl, th + hl) - lapse(rl, th - hl)) / (2.0 * hl),
            ld(0.0),
        ]
    )
    d2n = np.zeros((3, 3), dtype=g0.dtype)
    d2n[0, 0] = (lapse(rl + hl, th) - 2.0 * n0 + lapse(rl - hl, th)) / (hl * hl)
    d2n[1, 1] = (lapse(rl, th + hl) - 2.0 * n0 + lapse(rl, th - hl)) / (hl * hl)
    d2n[0, 1] = d2n[1, 0] = (
        lapse(rl + hl, th + hl)
        - lapse(rl + hl, th - hl)
        - lapse(rl - hl, th + hl)
        + lapse(rl - hl, th - hl)
    ) / (4.0 * hl * hl)

    hess = np.zeros((3, 3), dtype=g0.dtype)
    for a in range(3):
        for b in range(3):
            hess[a, b] = d2n[a, b] - sum(gam[c, a, b] * dn[c] for c in range(3))

    ric_nn = ric[0, 0] * ginv[0]
    ric_tt = ric[1, 1] * ginv[1]
    scalar = sum(ric[i, i] * ginv[i] for i in range(3))
    hess_nn = hess[0, 0] * ginv[0]
    hess_tt = hess[1, 1] * ginv[1]
    lap_n = sum(hess[i, i] * ginv[i] for i in range(3))

    return CurvatureSample(
        r=float(r),
        ric_nn=float(ric_nn),
        ric_tt=float(ric_tt),
        scalar=float(scalar),
        hess_nn=float(hess_nn),
        hess_tt=float(hess_tt),
        lap_N=float(lap_n),
        vac_residual_nn=float(n0 * ric_nn - hess_nn),
        vac_residual_tt=float(n0 * ric_tt - hess_tt),
        scalar_residual=float(scalar),
        lap_residual=float(lap_n),
    )


def convergence_study(
    profile: RadialProfile, r: float, steps=(1e-2, 1e-3, 1e-4)
) -> dict:
    """Measure the oracle's convergence against the closed form.

    Returns the per-step worst field errors, the least-squares convergence
    rate in log-log, and the implied constant C of the error model C h^2
    taken at the middle step.
    """
    exact = curvature_at(profile, r)
    steps = tuple(float(h) for h in steps)
    errors = [fd_curvature_oracle(profile, r, h).difference(exact) for h in steps]
    logs_h = np.log(np.asarray(steps))
    logs_e = np.log(np.asarray(errors))
    rate = float(np.polyfit(logs_h, logs_e, 1)[0])
    mid = len(steps) // 2
    return {
        "steps": steps,
        "errors": tuple(errors),
        "rate": rate,
        "constant": errors[mid] / steps[mid] ** 2,
    }


# ---------------------------------------------------------------------------
# Coordinate spheres
# ---------------------------------------------------------------------------


def surface_geometry(profile: RadialProfile, r: float) -> SurfaceGeometry:
    """Fundamental forms of the sphere r = const.

    At a degenerate horizon endpoint the mean curvature has one-sided limit
    0; the sample is returned with ``minimal_surface`` set instead of
    raising, because every quantity reported here stays finite there.
    The center r = 0 has no sphere and still raises.
    """
    if r == profile.r_lo and profile.degenerate_lo:
        if profile.kind is ProfileKind.INTERIOR_FLUID:
            profile.ensure_evaluable(r)  # raises: sphere degenerates to a point
        area_radius = float(profile.Rareal(r))
        return SurfaceGeometry(
            r=float(r),
            area=float(4.0 * np.pi * area_radius ** 2),
            area_radius=area_radius,
            H=0.0,
            tracefree_h_norm=0.0,
            nu_N=float(profile.nu_N(r)),
            sigma_scalar=float(2.0 / area_radius ** 2),
            N_val=float(profile.N(r)),
            minimal_surface=True,
        )
    profile.ensure_evaluable(r)
    a = profile.A(r)
    rr = profile.Rareal(r)
    drr = profile.Rareal(r, 1)
    k = drr / (a * rr)  # common frame eigenvalue of the shape operator
    h_frame = np.array([k, k])
    H = float(h_frame.sum())
    tracefree = h_frame - 0.5 * H
    return SurfaceGeometry(
        r=float(r),
        area=float(4.0 * np.pi * rr * rr),
        area_radius=float(rr),
        H=H,
        tracefree_h_norm=float(np.sqrt(np.sum(tracefree ** 2))),
        nu_N=float(profile.nu_N(r)),
        sigma_scalar=float(2.0 / (rr * rr)),
        N_val=float(profile.N(r)),
    )


def identity_residuals(
    profile: RadialProfile, r: float, f: RadialFunction | None = None
) -> dict:
    """Residuals of two chart-independent identities at radius r.

    * contracted Gauss:  Scal - 2 Ric(nu, nu) =
      (sphere scalar) - H^2 + |h|^2, with |h|^2 summed from the actual
      frame components;
    * surface splitting of the Laplacian for a radial test function f:
      Lap f = Hess f(nu, nu) + H nu(f)  (the sphere Laplacian of a radial
      function vanishes).

    ``f`` defaults to the lapse; pass e.g. the coordinate function or its
    square for independent checks.
    """
    sample = curvature_at(profile, r)
    geom = surface_geometry(profile, r)
    a = profile.A(r)
    rr = profile.Rareal(r)
    drr = profile.Rareal(r, 1)
    k = drr / (a * rr)
    h_sq = 2.0 * k * k
    gauss = (sample.scalar - 2.0 * sample.ric_nn) - (
        geom.sigma_scalar - geom.H ** 2 + h_sq
    )

    if f is None:
        f = profile.N
    df, d2f = f(r, 1), f(r, 2)
    da = profile.A(r, 1)
    # divergence form of the full Laplacian for a radial function
    lap_f = (d2f + 2.0 * drr * df / rr - df * da / a) / (a * a)
    hess_f_nn = (d2f - df * da / a) / (a * a)
    surf = lap_f - (hess_f_nn + geom.H * df / a)

    return {"gauss": float(gauss), "surface_laplacian": float(surf)}
