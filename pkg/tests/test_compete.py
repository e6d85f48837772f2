import math

import numpy as np
import pytest

from slidecal import compete, geom

SQ2 = math.sqrt(2.0)
SQ3 = math.sqrt(3.0)
X_TOP = SQ2 / 3.0
J_CONE = 4.0 * SQ2 / 3.0


def test_profile_cone_limit():
    for x in (0.05, 0.2, X_TOP):
        z, dz = compete.profile(x, 0.0)
        assert z == pytest.approx(x / SQ2, abs=1e-15)
        assert dz == pytest.approx(1 / SQ2, abs=1e-15)


def test_profile_outer_edge_value():
    for c in (0.0, 0.01, 0.3):
        z, _ = compete.profile(X_TOP, c)
        assert z == pytest.approx(1.0 / 3.0, abs=1e-15)


def test_profile_frozen():
    z, dz = compete.profile(0.2, 0.05)
    assert z == pytest.approx(0.09855139553501134, abs=1e-15)
    assert dz == pytest.approx(0.9571067811865475, abs=1e-15)


def test_profile_domain():
    with pytest.raises(ValueError):
        compete.profile(0.0, 0.1)
    with pytest.raises(ValueError):
        compete.profile(0.1, -0.1)


def test_c_from_x0_log_is_minus_one():
    x0 = X_TOP * math.exp(-1.0)
    assert compete.c_from_x0(x0) == pytest.approx(x0 / SQ2, rel=1e-15)


def test_c_from_x0_roundtrip():
    for x0 in np.logspace(-6, math.log10(0.4), 20):
        c = compete.c_from_x0(x0)
        assert compete.solve_x0(c) == pytest.approx(x0, abs=1e-10)


def test_c_from_x0_diverges_at_edge():
    assert compete.c_from_x0(X_TOP * (1 - 1e-12)) > 1e9
    with pytest.raises(ValueError):
        compete.c_from_x0(X_TOP)


def test_solve_x0_monotone_limit():
    assert compete.solve_x0(1e-6) < compete.solve_x0(1e-3)
    assert compete.solve_x0(1e-6) > 0.0


def test_solve_x0_domain():
    with pytest.raises(ValueError):
        compete.solve_x0(0.0)


def test_solve_x0_value():
    c = compete.c_from_x0(0.1)
    assert compete.solve_x0(c) == pytest.approx(0.1, abs=1e-10)


def test_params_validation():
    p = compete.params_from_x0(0.07)
    z0, _ = compete.profile(p.x0, p.c)
    assert abs(z0) <= 1e-12
    with pytest.raises(ValueError):
        compete.CompetitorParams(x0=0.07, c=0.01)


def test_cone_energy_from_fold_integrals():
    # as the pinch closes the competitor energy tends to 12 sqrt(2) * the
    # integral of x over a fold, i.e. the cone's (4/3) sqrt(2)
    rep = compete.competitor_energy(1e-6, 0.5)
    assert rep.j_competitor_quadrature == pytest.approx(J_CONE, abs=1e-8)


def test_area_bound_holds():
    for x0 in (0.01, 0.05, 0.1, 0.2, 0.4):
        areas = compete.fold_areas(x0)
        assert areas.area_B <= areas.area_B_bound


def test_area_v_quadrature_matches_antiderivative():
    for x0 in (0.01, 0.05, 0.1, 0.2, 0.4):
        areas = compete.fold_areas(x0)
        assert abs(areas.area_V - areas.area_V_closed) <= 1e-11


def test_gap_bracket_frozen_values():
    # scalar evaluations of the closed-form bracket
    rep = compete.competitor_energy(0.01, 0.6)
    assert rep.gap_bound == pytest.approx(-2.386e-6, rel=2e-3)
    assert rep.gap_bound < 0
    bracket = compete.gap_bracket(0.01, 0.75)
    assert bracket == pytest.approx(0.2519, rel=1e-3)
    assert compete.competitor_energy(0.01, 0.75).gap_bound > 0


def test_gap_report_invariants():
    for x0 in (0.01, 0.05, 0.15):
        for alpha in (0.2, 0.6, 0.8):
            rep = compete.competitor_energy(x0, alpha)
            assert rep.j_competitor_quadrature <= rep.j_competitor_bound + 1e-10
            assert rep.gap_bound == pytest.approx(
                rep.j_competitor_bound - rep.j_cone, abs=1e-10)


def test_gap_bound_increasing_in_alpha():
    for x0 in np.logspace(-4, math.log10(0.4), 12):
        gaps = [compete.competitor_energy(x0, a).gap_bound
                for a in np.linspace(0.0, 1.0, 9)]
        assert all(b > a for a, b in zip(gaps, gaps[1:]))


def test_threshold_function_monotone_to_limit():
    # decreasing x0 raises the beatable alpha toward the threshold;
    # evaluated in log space far below the underflow point of x0 itself
    exps = [-1, -3, -10, -30, -100, -300, -1e4, -1e6, -1e7]
    vals = [compete.threshold_alpha_log10(e) for e in exps]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert all(v < compete.ALPHA_THRESHOLD for v in vals)
    assert compete.ALPHA_THRESHOLD - vals[-1] < 1e-6


def test_threshold_log10_consistent_with_direct():
    for x0 in (1e-3, 1e-8, 0.3):
        assert compete.threshold_alpha(x0) == pytest.approx(
            compete.threshold_alpha_log10(math.log10(x0)), rel=1e-14)


def test_find_better_competitor_below_threshold():
    found = compete.find_better_competitor(0.5)
    assert found is not None and found.certified_by == "quadrature"
    assert 0.01 < found.x0 < 0.1
    assert found.report.gap_bound < 0
    assert found.report.j_competitor_quadrature < J_CONE


def test_find_better_competitor_above_threshold():
    assert compete.find_better_competitor(0.9) is None
    assert compete.find_better_competitor(compete.ALPHA_THRESHOLD) is None
    assert compete.find_better_competitor(1.0) is None


def test_find_better_competitor_near_threshold_bracket():
    found = compete.find_better_competitor(0.81)
    assert found is not None and found.certified_by == "bracket"
    assert compete.gap_bracket_log10(found.log10_x0, 0.81) < 0


def test_bracket_gap_implies_quadrature_gap():
    # on the grid: negative closed-form gap forces the quadrature energy
    # below the cone's (the inequality chain is verified numerically)
    for x0 in np.logspace(-4, -1, 8):
        for alpha in (0.3, 0.6, 0.75):
            rep = compete.competitor_energy(x0, alpha)
            if rep.gap_bound < -1e-12 * J_CONE:
                assert rep.j_competitor_quadrature < J_CONE


def test_competitor_mesh_energy_matches_quadrature():
    for x0 in (0.02, 0.1, 0.3):
        rep = compete.competitor_energy(x0, 0.6)
        mesh = compete.competitor_mesh(x0, radial=400)
        e = geom.energy(mesh, 0.6)
        assert abs(e.j_alpha - rep.j_competitor_quadrature) <= 1e-6
        assert e.area_on_gamma == pytest.approx(3 * SQ3 * x0 * x0, rel=1e-12)


def test_competitor_mesh_is_valid():
    mesh = compete.competitor_mesh(0.05, radial=200)
    assert mesh.gamma.sum() == 3
    assert mesh.vertices[:, 2].min() >= 0.0
