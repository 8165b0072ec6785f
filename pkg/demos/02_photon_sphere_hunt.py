"""Finding photon spheres two independent ways: a root search on the
optical-metric mean curvature, then direct null-geodesic integration that
shows the sphere trapping a tangentially launched ray.

Run:  python3 demos/02_photon_sphere_hunt.py
"""

import math

from photonlab import (
    fermat_geodesy_residual,
    impact_parameter,
    integrate_null_geodesic,
    make_schwarzschild_family,
    photon_sphere_search,
    tangential_launch,
    trapping_report,
)


def section(title):
    print(f"\n== {title} ==")


def main():
    section("optical-metric residual changes sign at the photon sphere")
    profile = make_schwarzschild_family(1.0, 2.1, 100.0)
    for r in (2.2, 2.6, 3.0, 3.5, 5.0):
        print(f"  r = {r:4.1f}   residual = {fermat_geodesy_residual(profile, r):+.6f}")

    section("root search across masses (expect r = 3 mass)")
    for m in (0.5, 1.0, 2.0, 3.7):
        p = make_schwarzschild_family(m, 2.1 * m, 30.0 * m)
        roots = photon_sphere_search(p)
        print(f"  mass {m:3.1f}  ->  {[f'{r:.12f}' for r in roots]}")
    for m in (0.0, -1.0):
        p = make_schwarzschild_family(m, 1.0, 100.0)
        print(f"  mass {m:4.1f}  ->  {photon_sphere_search(p)}  (no sphere, as it must be)")

    section("critical impact parameter")
    b_crit = impact_parameter(profile, 3.0)
    print(f"  b(3.0) = {b_crit:.12f}   3*sqrt(3) = {3.0 * math.sqrt(3.0):.12f}")

    section("a tangential ray launched AT the sphere stays on it")
    state = tangential_launch(profile, 3.0)
    result = integrate_null_geodesic(profile, state, lam_max=50.0)
    print(f"  max |r - 3| over the run  = {max(abs(r - 3.0) for r in result.radii):.2e}")
    print(f"  energy drift              = {result.E_drift:.2e}")
    print(f"  angular-momentum drift    = {result.L_drift:.2e}")
    print(f"  null-constraint drift     = {result.max_constraint:.2e}")

    section("nearby launches peel off: the trapping verdicts")
    for r0 in (3.0, 4.0, 2.5):
        rep = trapping_report(profile, r0)
        print(f"  launch at r = {r0:3.1f}:  verdict = {rep.verdict:10s}  "
              f"(max deviation {rep.max_radial_deviation:.3e})")


if __name__ == "__main__":
    main()
