"""Null geodesics: the optical rescaling, root search, orbit integration,
trapping verdicts, and trajectory export."""

from __future__ import annotations

import math

import numpy as np
import pytest

from photonlab.geodesics import (
    fermat_geodesy_residual,
    fermat_profile,
    impact_parameter,
    integrate_null_geodesic,
    photon_sphere_search,
    tangential_launch,
    trapping_report,
    write_trajectory_csv,
)
from photonlab.radial import DomainError, make_schwarzschild_family

B_CRIT = 3.0 * math.sqrt(3.0)  # 5.196152422706632


@pytest.fixture(scope="module")
def wide_m1():
    return make_schwarzschild_family(1.0, 2.1, 100.0)


# ---------------------------------------------------------------------------
# Optical rescaling
# ---------------------------------------------------------------------------


def test_fermat_profile_values(wide_m1):
    opt = fermat_profile(wide_m1)
    assert abs(float(opt.Rareal(3.0)) - B_CRIT) <= 1e-14
    assert abs(float(opt.Rareal(3.0, 1))) <= 1e-14  # critical point at 3m
    flat = make_schwarzschild_family(0.0, 1.0, 50.0)
    opt_flat = fermat_profile(flat)
    assert float(opt_flat.A(7.0)) == float(flat.A(7.0))
    assert float(opt_flat.Rareal(7.0)) == float(flat.Rareal(7.0))


def test_impact_parameter(wide_m1):
    assert abs(impact_parameter(wide_m1, 3.0) - B_CRIT) <= 1e-14
    flat = make_schwarzschild_family(0.0, 1.0, 50.0)
    assert impact_parameter(flat, 7.0) == 7.0
    # stationary exactly at the photon sphere
    h = 1e-6
    db = (impact_parameter(wide_m1, 3.0 + h) - impact_parameter(wide_m1, 3.0 - h)) / (
        2.0 * h
    )
    assert abs(db) <= 1e-9


# ---------------------------------------------------------------------------
# Root search
# ---------------------------------------------------------------------------


def test_search_finds_photon_sphere(wide_m1):
    roots = photon_sphere_search(wide_m1)
    assert len(roots) == 1
    assert abs(roots[0] - 3.0) <= 1e-10
    assert abs(fermat_geodesy_residual(wide_m1, roots[0])) <= 1e-12


def test_search_empty_for_nonpositive_mass():
    assert photon_sphere_search(make_schwarzschild_family(0.0, 1.0, 100.0)) == []
    assert photon_sphere_search(make_schwarzschild_family(-1.0, 1.0, 100.0)) == []


def test_search_scale_covariance():
    base = photon_sphere_search(make_schwarzschild_family(1.0, 2.1, 100.0))
    for m in (0.5, 2.0, 3.7):
        scaled = photon_sphere_search(
            make_schwarzschild_family(m, 2.1 * m, 100.0 * m)
        )
        assert len(scaled) == len(base) == 1
        assert abs(scaled[0] - m * base[0]) <= 1e-9 * m


def test_search_window_validation(wide_m1):
    with pytest.raises(DomainError):
        photon_sphere_search(wide_m1, r_lo=50.0, r_hi=10.0)
    assert photon_sphere_search(wide_m1, r_lo=5.0, r_hi=50.0) == []


# ---------------------------------------------------------------------------
# Integration
# ---------------------------------------------------------------------------


def test_circular_orbit_conservation(wide_m1):
    y0 = tangential_launch(wide_m1, 3.0, E=1.0)
    res = integrate_null_geodesic(wide_m1, y0, 100.0, tol=1e-12)
    assert res.termination == "window"
    assert res.max_constraint <= 1e-10  # null constraint, units of E^2
    assert res.E_drift <= 1e-10
    assert res.L_drift <= 1e-10
    # The circular orbit is exponentially unstable, so the tight radial
    # budget applies on the calibrated affine window, not arbitrarily far.
    res50 = integrate_null_geodesic(wide_m1, y0, 50.0, tol=1e-12)
    assert float(np.max(np.abs(res50.radii - 3.0))) <= 1e-3


def test_trapping_verdicts(wide_m1):
    on = trapping_report(wide_m1, 3.0)
    assert on.verdict == "trapped"
    assert on.max_radial_deviation <= 1e-3
    off = trapping_report(wide_m1, 4.0)
    assert off.verdict != "trapped"
    assert off.max_radial_deviation > 0.1
    inner = trapping_report(wide_m1, 2.5)
    assert inner.verdict == "fell_in"


def test_flat_space_ray_escapes():
    flat = make_schwarzschild_family(0.0, 1.0, 1000.0)
    rep = trapping_report(flat, 7.0, affine_window=100.0)
    assert rep.verdict == "escaped"
    y0 = tangential_launch(flat, 7.0)
    res = integrate_null_geodesic(flat, y0, 100.0, tol=1e-12)
    radii = res.radii
    turn = int(np.argmin(radii))
    assert np.all(np.diff(radii[turn:]) >= -1e-12)  # monotone after approach


def test_non_null_initial_data_rejected(wide_m1):
    y0 = tangential_launch(wide_m1, 3.0)
    y0[3] *= 1.5  # break the null constraint
    with pytest.raises(DomainError):
        integrate_null_geodesic(wide_m1, y0, 10.0, tol=1e-12)


def test_trajectory_csv_shape(tmp_path, wide_m1):
    y0 = tangential_launch(wide_m1, 3.0)
    res = integrate_null_geodesic(wide_m1, y0, 5.0, tol=1e-10)
    out = tmp_path / "orbit.csv"
    write_trajectory_csv(out, res)
    lines = out.read_text().splitlines()
    assert lines[0] == "lambda,r,phi,p_r,constraint"
    assert len(lines) == len(res.states) + 1
