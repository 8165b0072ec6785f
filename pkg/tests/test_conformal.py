"""Conformal rescaling by u^4, the scalar-curvature law it obeys, and the
asymptotic certificates (ADM masses, inverted-end compactification)."""

from __future__ import annotations

import numpy as np
import pytest

from photonlab.conformal import (
    adm_mass_estimate,
    compactification_check,
    conformal_scalar_prediction,
    conformal_scalar_residual,
    conformal_transform,
    extend_exterior_chart,
    flatness_check,
    richardson_limit,
)
from photonlab.curvature import fd_curvature_oracle
from photonlab.gluing import Chart, PiecewiseManifold
from photonlab.radial import (
    DomainError,
    RadialFunction,
    make_schwarzschild_family,
    make_tabulated,
)

# double-precision evaluations of (1 +/- N(100))/2 at m = 1
U_EXTERIOR_100 = 0.9949747468305833
U_REFLECTED_100 = 0.005025253169416733


def _flat_manifold(r_hi: float = 20.0) -> PiecewiseManifold:
    flat = make_schwarzschild_family(0.0, 1.0, r_hi)
    chart = Chart(
        chart_id="exterior",
        profile=flat,
        orientation=1.0,
        psi_sign=1.0,
        collar_scale=1.0,
        role="exterior",
    )
    return PiecewiseManifold(charts=(chart,), gluings=(), ends=("exterior",), boundary=None)


def _quadratic(eps: float) -> RadialFunction:
    return RadialFunction(
        lambda r: eps * r * r,
        lambda r: 2.0 * eps * r,
        lambda r: 0.0 * r + 2.0 * eps,
    )


# ---------------------------------------------------------------------------
# The conformal factor itself
# ---------------------------------------------------------------------------


def test_factor_values(conformal_m1):
    assert abs(float(conformal_m1.chart("exterior").u(100.0)) - U_EXTERIOR_100) <= 1e-15
    assert abs(float(conformal_m1.chart("exterior_reflected").u(100.0)) - U_REFLECTED_100) <= 1e-15
    # u = (1 + psi)/2 hits exactly 1/2 at the minimal boundary where psi = 0
    assert float(conformal_m1.chart("neck").u(2.0)) == 0.5
    assert float(conformal_m1.chart("neck_reflected").u(2.0)) == 0.5


def test_factor_reflection_complement(conformal_m1, rng):
    rs = rng.uniform(3.0, 100.0, size=400)
    u = np.asarray(conformal_m1.chart("exterior").u(rs), dtype=float)
    u_m = np.asarray(conformal_m1.chart("exterior_reflected").u(rs), dtype=float)
    assert np.max(np.abs(u + u_m - 1.0)) <= 1e-15


def test_hat_metric_is_u4_rescaling(conformal_m1):
    cc = conformal_m1.chart("exterior")
    for r in (3.5, 10.0, 50.0):
        u = float(cc.u(r))
        assert abs(float(cc.hat.A(r)) - u * u * float(cc.base.profile.A(r))) <= 1e-14
        assert (
            abs(float(cc.hat.Rareal(r)) - u * u * float(cc.base.profile.Rareal(r)))
            <= 1e-12
        )


def test_factor_must_stay_positive(doubled_m1):
    with pytest.raises(DomainError):
        conformal_transform(doubled_m1, perturbation=RadialFunction.constant(-0.6))


# ---------------------------------------------------------------------------
# Scalar-curvature law:  scal_hat = u^-5 (scal u - 8 lap u)
# ---------------------------------------------------------------------------


def test_scalar_law_sign_on_flat_base():
    # flat base, u = 1 + eps r^2: the law predicts -48 eps / u^5, and the
    # finite-difference oracle on the rescaled metric must agree — this
    # pins the sign of the lap-u term
    eps = 1e-3
    conf = conformal_transform(_flat_manifold(), perturbation=_quadratic(eps))
    cc = conf.chart("exterior")
    for r in (2.0, 5.0, 10.0, 15.0):
        u = float(cc.u(r))
        closed = -48.0 * eps / u**5
        pred = conformal_scalar_prediction(cc.base.profile, cc.u, r)
        assert abs(pred - closed) <= 1e-12 * abs(closed)
        measured = fd_curvature_oracle(cc.hat, r, h=1e-4).scalar
        assert abs(measured - closed) <= 1e-6


def test_sealed_double_is_scalar_flat(conformal_m1):
    rep = conformal_scalar_residual(conformal_m1, n_samples=512)
    assert rep["max_abs_scalar"] <= 1e-8
    assert rep["n_samples"] >= 500
    # every chart is scanned; the reflected end's window stops where the
    # inverted-coordinate step loses conditioning (the far region is
    # certified in closed form by the flatness check instead)
    assert set(rep["fd_coverage"]) == {
        "exterior",
        "exterior_reflected",
        "neck",
        "neck_reflected",
    }
    lo, hi = rep["fd_coverage"]["exterior_reflected"]
    assert lo <= 3.1 and hi >= 6.0


def test_non_harmonic_perturbation_is_flagged(doubled_m1):
    bad = conformal_transform(doubled_m1, perturbation=_quadratic(1e-3 / 9.0))
    rep = conformal_scalar_residual(bad, n_samples=128)
    assert rep["max_abs_scalar"] >= 1e-3


def test_constant_shift_is_invisible_to_the_scalar(doubled_m1):
    # 1 and psi are both harmonic, so u + 0.01 still solves lap u = 0 and
    # the scalar residual cannot see the corruption ...
    shifted = conformal_transform(
        doubled_m1, perturbation=RadialFunction.constant(0.01)
    )
    rep = conformal_scalar_residual(shifted, n_samples=128)
    assert rep["max_abs_scalar"] <= 1e-8
    # ... but the compactified end detects it: the inverted-coordinate
    # metric diverges instead of tending to (m/2)^4
    comp = compactification_check(shifted)
    assert not comp.converged


def test_flatness_certificate(conformal_m1):
    rep = flatness_check(conformal_m1, n_samples=256)
    assert rep["max_curvature"] <= 1e-6


# ---------------------------------------------------------------------------
# ADM masses
# ---------------------------------------------------------------------------


def test_adm_mass_of_outward_end(doubled_m1):
    rep = adm_mass_estimate(doubled_m1, "exterior", radii=(50.0, 100.0, 200.0, 400.0))
    assert abs(rep["mass"] - 1.0) <= 1e-3
    assert rep["error"] <= 1e-3
    assert rep["radii"] == [50.0, 100.0, 200.0, 400.0]


def test_adm_mass_of_sealed_reflected_end(conformal_m1):
    rep = adm_mass_estimate(conformal_m1, "exterior_reflected")
    assert abs(rep["mass"] - 0.0) <= 1e-3
    # kappa is the sphere-radius normalization r_hat / x near the puncture
    assert abs(rep["kappa"] - 0.25) <= 1e-3


def test_adm_mass_of_flat_space_is_zero():
    rep = adm_mass_estimate(_flat_manifold(500.0), "exterior")
    assert rep["mass"] == 0.0
    assert rep["error"] == 0.0


def test_adm_mass_scale(doubled_m2=None):
    ext = make_schwarzschild_family(2.0, 6.0, 200.0)
    from photonlab.gluing import double, glue_neck

    dbl = double(glue_neck(ext, 6.0))
    rep = adm_mass_estimate(dbl, "exterior", radii=(100.0, 200.0, 400.0, 800.0))
    assert abs(rep["mass"] - 2.0) <= 2e-3


def test_adm_schedule_validation(doubled_m1):
    with pytest.raises(DomainError):
        adm_mass_estimate(doubled_m1, "exterior", radii=(50.0, 100.0))
    with pytest.raises(DomainError):
        adm_mass_estimate(doubled_m1, "exterior", radii=(50.0, 40.0, 30.0))
    with pytest.raises(KeyError):
        adm_mass_estimate(doubled_m1, "nowhere")


# ---------------------------------------------------------------------------
# Compactification of the reflected end
# ---------------------------------------------------------------------------


def test_compactification_limit(conformal_m1):
    rep = compactification_check(conformal_m1)
    assert rep.end_id == "exterior_reflected"
    assert rep.converged
    assert abs(rep.limit - 0.0625) <= 1e-5  # (m/2)^4 at m = 1
    assert abs(rep.rate - 1.0) <= 0.25
    assert abs(rep.mass_hat - 1.0) <= 1e-4
    assert rep.mass_gap <= 1e-4


def test_compactification_error_is_linear_in_radius(conformal_m1):
    # halving the control radius halves the distance to the limit
    rep = compactification_check(conformal_m1, R_schedule=(0.02, 0.01, 0.005, 0.0025))
    for factors in (rep.radial_factor, rep.tangential_factor):
        errs = [abs(f - 0.0625) for f in factors]
        for a, b in zip(errs, errs[1:]):
            assert 0.4 <= b / a <= 0.6


def test_compactification_scale():
    from photonlab.gluing import double, glue_neck

    ext = make_schwarzschild_family(2.0, 6.0, 200.0)
    conf = conformal_transform(double(glue_neck(ext, 6.0)))
    rep = compactification_check(conf)
    assert rep.converged
    assert abs(rep.limit - 1.0) <= 2e-4  # (m/2)^4 at m = 2
    assert abs(rep.mass_hat - 2.0) <= 1e-3


# ---------------------------------------------------------------------------
# Support machinery: chart extension and Richardson extrapolation
# ---------------------------------------------------------------------------


def test_extend_exterior_chart_consistency():
    ext = make_schwarzschild_family(1.0, 3.0, 100.0)
    chart = Chart("exterior", ext, 1.0, 1.0, 1.0, "exterior")
    big = extend_exterior_chart(chart, 500.0)
    assert big.profile.r_hi >= 500.0
    for r in (10.0, 50.0, 99.0):
        assert float(big.profile.N(r)) == float(ext.N(r))
    assert extend_exterior_chart(chart, 50.0) is chart  # already long enough


def test_extend_exterior_chart_refuses_tabulated():
    ext = make_schwarzschild_family(1.0, 3.0, 100.0)
    r = np.linspace(3.0, 100.0, 500)
    tab = make_tabulated(
        r,
        np.asarray(ext.N(r), dtype=float),
        np.asarray(ext.A(r), dtype=float),
        np.asarray(ext.Rareal(r), dtype=float),
    )
    with pytest.raises(DomainError):
        extend_exterior_chart(Chart("exterior", tab, 1.0, 1.0, 1.0, "exterior"), 500.0)


def test_richardson_limit_strips_leading_order():
    x = 0.1 * 0.5 ** np.arange(5)
    vals = 3.0 + 2.0 * x + 5.0 * x * x
    limit, err = richardson_limit(x, vals)
    assert abs(limit - 3.0) <= 1e-10
    assert err <= 1e-6


def test_richardson_limit_requires_geometric_schedule():
    with pytest.raises(DomainError):
        richardson_limit(np.array([1.0, 0.5, 0.3]), np.zeros(3))
