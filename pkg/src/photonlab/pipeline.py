"""End-to-end rigidity run: glue, double, rescale, certify, reconstruct.

Given an exterior radial profile whose inner boundary claims to be a photon
sphere, the pipeline attaches the matched neck, doubles across the neck
horizon, applies the conformal rescaling by u = (1 + psi)/2, and then
certifies everything that makes the result recognizably Schwarzschild:
C^1 matching at every gluing surface, the strict bound |psi| < 1,
harmonicity of psi, scalar-flatness of the rescaled metric, the mass pair
(physical ADM mass on the outward end, zero mass on the compactified
reflected end), the compactification limit, and full flatness.  The verdict
is ``schwarzschild_rigid`` exactly when the flatness certificate and every
match jump pass their tolerances; reconstruction then reads the mass back
from the neck and cross-checks it against the boundary audit.

Stage order matters: the gluing audit runs first and refuses boundaries
that are not photon spheres (:class:`~photonlab.gluing.GluingRefusal`), so
later certificates never see malformed data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .audit import IdentityReport, audit_sphere
from .conformal import (
    CompactificationReport,
    adm_mass_estimate,
    compactification_check,
    conformal_scalar_residual,
    conformal_transform,
    flatness_check,
)
from .gluing import (
    MATCH_TOL,
    MatchReport,
    PsiBoundReport,
    double,
    glue_neck,
    match_report,
    psi_bound_check,
    psi_harmonicity_max,
)
from .radial import DomainError, RadialProfile

__all__ = [
    "FLAT_TOL",
    "MASS_TOL",
    "PipelineReport",
    "run_rigidity_pipeline",
    "reconstruct_schwarzschild",
]

FLAT_TOL = 1e-6
MASS_TOL = 1e-3

VERDICT_RIGID = "schwarzschild_rigid"
VERDICT_NOT_RIGID = "not_rigid"


@dataclass(frozen=True)
class PipelineReport:
    """Everything the rigidity run measured, plus the verdict.

    ``reconstructed_mass`` is the neck mass parameter mu_1; it equals the
    boundary component mass whenever the gluing audit passed.  The verdict
    depends only on the flatness certificate and the match jumps; the other
    certificates are reported for independent scrutiny.
    """

    boundary_audit: IdentityReport
    match_reports: tuple[MatchReport, ...]
    psi_bound: PsiBoundReport
    psi_harmonicity: float
    conformal_scalar_max: float
    conformal_scalar_argmax: tuple
    adm_exterior: dict
    adm_conformal_end: dict
    compactification: CompactificationReport
    flatness_max_curvature: float
    reconstructed_mass: float
    verdict: str
    tolerances: dict
    n_samples: int

    @property
    def max_match_jump(self) -> float:
        return max(r.max_jump for r in self.match_reports)

    @property
    def psi_bound_ok(self) -> bool:
        return self.psi_bound.strict_bound

    @property
    def rigid(self) -> bool:
        return self.verdict == VERDICT_RIGID


def run_rigidity_pipeline(
    exterior: RadialProfile,
    match_tol: float = MATCH_TOL,
    flat_tol: float = FLAT_TOL,
    mass_tol: float = MASS_TOL,
    n_samples: int = 512,
) -> PipelineReport:
    """Run every stage on an exterior profile bounded by a photon sphere.

    The candidate sphere is the profile's inner boundary; the gluing audit
    decides whether it qualifies and refuses otherwise.  Mass and
    compactification schedules scale with the audited component mass, so
    the same call covers any mass without retuning.
    """
    r0 = float(exterior.r_lo)
    glued = glue_neck(exterior, r0, match_tol=match_tol)
    boundary_audit = audit_sphere(exterior, r0)
    doubled = double(glued)

    matches = tuple(match_report(doubled, g.surface_id) for g in doubled.gluings)
    bound = psi_bound_check(doubled)
    harmonicity = psi_harmonicity_max(doubled)

    conformal = conformal_transform(doubled)
    scalar = conformal_scalar_residual(conformal, n_samples=n_samples)

    mass_i = float(boundary_audit.mass_i)
    schedule = tuple(50.0 * mass_i * 2.0 ** k for k in range(4))
    outward_end = next(
        e for e in doubled.ends if doubled.chart(e).orientation == "outward"
    )
    reflected_end = next(
        e for e in doubled.ends if doubled.chart(e).orientation == "reflected"
    )
    adm_ext = adm_mass_estimate(doubled, outward_end, schedule)
    adm_conf = adm_mass_estimate(conformal, reflected_end, schedule)
    compact = compactification_check(conformal)
    flat = flatness_check(conformal, n_samples=n_samples)

    mu_1 = float(doubled.chart("neck").profile.mass)
    worst_jump = max(m.max_jump for m in matches)
    rigid = flat["max_curvature"] <= flat_tol and worst_jump <= match_tol
    return PipelineReport(
        boundary_audit=boundary_audit,
        match_reports=matches,
        psi_bound=bound,
        psi_harmonicity=float(harmonicity),
        conformal_scalar_max=float(scalar["max_abs_scalar"]),
        conformal_scalar_argmax=tuple(scalar["argmax"]),
        adm_exterior=adm_ext,
        adm_conformal_end=adm_conf,
        compactification=compact,
        flatness_max_curvature=float(flat["max_curvature"]),
        reconstructed_mass=mu_1,
        verdict=VERDICT_RIGID if rigid else VERDICT_NOT_RIGID,
        tolerances={
            "match_tol": float(match_tol),
            "flat_tol": float(flat_tol),
            "mass_tol": float(mass_tol),
        },
        n_samples=int(n_samples),
    )


def reconstruct_schwarzschild(report: PipelineReport) -> tuple[float, float, float]:
    """Read (mass, photon-sphere radius, spacetime mean curvature) back.

    Only a rigid verdict licenses reconstruction.  The returned triple is
    (m, 3m, 1/(sqrt(3) m)); each entry is cross-checked against the
    independent boundary-audit values (component mass, audited area
    radius, audited spacetime mean curvature) to 1e-10 and the call fails
    loudly on disagreement.
    """
    if report.verdict != VERDICT_RIGID:
        raise DomainError(
            f"reconstruction requires verdict {VERDICT_RIGID!r}, "
            f"got {report.verdict!r}"
        )
    mass = float(report.reconstructed_mass)
    r_photon = 3.0 * mass
    spacetime_h = 1.0 / (math.sqrt(3.0) * mass)
    audit = report.boundary_audit
    checks = (
        abs(mass - audit.mass_i),
        abs(mass - audit.mass_from_H),
        abs(r_photon - audit.area_radius),
        abs(spacetime_h - audit.spacetime_H),
    )
    scale = max(1.0, mass)
    if max(checks) > 1e-10 * scale:
        raise DomainError(
            "reconstructed values disagree with the boundary audit: "
            f"max gap {max(checks):.3e}"
        )
    return mass, r_photon, spacetime_h
