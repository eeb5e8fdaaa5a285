import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from npelastic.asymptotics import (
    coeff_AB,
    coeff_Cpm,
    coeff_C_total,
    coefficients_json,
    counting_curve,
    counting_curve_csv,
    asymptotic_coefficients,
    fit_tau_minus2,
    json_17g,
    sphere_exact_eigs,
    sphere_slope_limit,
    tr_pm_squared,
)
from npelastic.elastic import derived_constants
from npelastic.geometry import ellipsoid, make_surface, sphere, torus, union_of

MAT01 = derived_constants(0.0, 1.0)
MAT11 = derived_constants(1.0, 1.0)
MAT32 = derived_constants(3.0, 2.0)
SPHERE = make_surface(sphere(1.0))


# ---------------------------------------------------------------------------
# Tr_pm^2

def test_tr_pm_squared_diagonal():
    assert tr_pm_squared(np.diag([2.0, -3.0, 0.0])) == (4.0, 9.0)
    assert tr_pm_squared(np.zeros((3, 3))) == (0.0, 0.0)


def test_tr_pm_squared_sums_to_trace_square():
    rng = np.random.default_rng(2)
    for _ in range(20):
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        h = 0.5 * (a + a.conj().T)
        p, m = tr_pm_squared(h)
        assert p + m == pytest.approx(np.trace(h @ h).real, abs=1e-12)


def test_tr_pm_squared_rejects_complex_spectrum():
    rot = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    with pytest.raises(ValueError, match="complex eigenvalues"):
        tr_pm_squared(rot)


# ---------------------------------------------------------------------------
# sphere series

def test_sphere_series_first_values():
    spec = sphere_exact_eigs(MAT01, 5)
    assert spec.lam0[0] == pytest.approx(0.5, abs=1e-15)
    assert spec.lam_plus[1] == pytest.approx(3.0 / 10.0, abs=1e-15)
    assert spec.lam_minus[1] == pytest.approx(-1.0 / 30.0, abs=1e-15)
    assert list(spec.mult[:3]) == [3, 5, 7]


@settings(max_examples=30, deadline=None)
@given(
    st.floats(min_value=-0.5, max_value=20.0),
    st.floats(min_value=0.1, max_value=10.0),
)
def test_sphere_first_minus_eigenvalue_is_half(lam, mu):
    if lam + mu <= 1e-3:
        return
    spec = sphere_exact_eigs(derived_constants(lam, mu), 1)
    assert spec.lam_minus[0] == pytest.approx(0.5, abs=1e-13)


def test_sphere_series_limits():
    spec = sphere_exact_eigs(MAT11, 50000)
    assert spec.lam0[-1] == pytest.approx(0.0, abs=1e-4)
    assert spec.lam_minus[-1] == pytest.approx(-MAT11.kappa, abs=1e-4)
    assert spec.lam_plus[-1] == pytest.approx(MAT11.kappa, abs=1e-4)


def test_sphere_slope_limit_is_kappa():
    for mat in (MAT01, MAT11, MAT32):
        for iota in (-1, 1):
            assert sphere_slope_limit(mat, iota) == pytest.approx(
                mat.kappa, rel=1e-8
            )


# ---------------------------------------------------------------------------
# counting curves

def test_counting_direct_enumeration_example():
    # zero-series only, tau = 0.1: values above 0.1 are n = 1..6, total 48
    spec = sphere_exact_eigs(MAT01, 100)
    curve = counting_curve(
        spec.pairs(names=("zero",)), 0.0, "above", [0.1], tau_ref=1.0
    )
    assert curve.counts[0] == 48


def test_counting_empty_when_tau_too_large():
    spec = sphere_exact_eigs(MAT01, 100)
    curve = counting_curve(
        spec.pairs(names=("zero",)), 0.0, "above", [0.6], tau_ref=1.0
    )
    assert curve.counts[0] == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_counting_monotone_as_tau_decreases(seed):
    rng = np.random.default_rng(seed)
    vals = rng.uniform(-0.2, 0.2, size=50)
    pairs = [(float(v), int(m)) for v, m in zip(vals, rng.integers(1, 5, size=50))]
    taus = np.geomspace(0.1, 1e-4, 12)
    curve = counting_curve(pairs, 0.0, "above", taus, tau_ref=0.3)
    assert np.all(np.diff(curve.counts) >= 0)


def test_counting_window_guard():
    spec = sphere_exact_eigs(MAT01, 10)
    with pytest.raises(ValueError, match="overlaps"):
        counting_curve(
            spec, 0.0, "above", [0.01], tau_ref=0.3,
            guard_points=[-0.25, 0.0, 0.25],
        )
    with pytest.raises(ValueError, match="descending"):
        counting_curve(spec, 0.0, "above", [0.01, 0.02], tau_ref=0.1)


def _sphere_fit(mat, omega, side, nmax=2000, tau_ref=None):
    spec = sphere_exact_eigs(mat, nmax)
    taus = np.geomspace(3e-2, 3e-4, 25)
    guards = [i * mat.kappa for i in (-1, 0, 1)]
    if tau_ref is None:
        tau_ref = mat.kappa / 8.0
    return counting_curve(spec, omega, side, taus, tau_ref, guard_points=guards)


def test_fit_sphere_zero_point():
    curve = _sphere_fit(MAT01, 0.0, "above", tau_ref=0.1)
    fit = fit_tau_minus2(curve)
    assert fit.coefficient == pytest.approx(9.0 / 16.0, rel=0.05)
    below = _sphere_fit(MAT01, 0.0, "below", tau_ref=MAT01.kappa / 8.0)
    assert np.all(below.counts == 0)


def test_fit_sphere_kappa_points_match_slope_oracle():
    for iota in (-1, 1):
        omega = MAT01.omega(iota)
        curve = _sphere_fit(MAT01, omega, "above")
        fit = fit_tau_minus2(curve)
        oracle = sphere_slope_limit(MAT01, iota) ** 2
        assert fit.coefficient == pytest.approx(oracle, rel=0.05)
        # the printed coefficient (4 kappa)^2 disagrees with the series slope
        assert abs(fit.coefficient - (4 * MAT01.kappa) ** 2) > 10 * oracle


def test_fit_preconditions():
    curve = counting_curve(
        [(0.05, 1)], 0.0, "above", np.geomspace(1e-2, 1e-3, 5), tau_ref=0.1
    )
    with pytest.raises(ValueError, match="10 grid points"):
        fit_tau_minus2(curve)
    curve = counting_curve(
        [(0.05, 1)], 0.0, "above", np.geomspace(1e-2, 1e-3, 12), tau_ref=0.1
    )
    with pytest.raises(ValueError, match="decades"):
        fit_tau_minus2(curve)


# ---------------------------------------------------------------------------
# coefficient pipelines

def test_sphere_coefficients_match_counting_oracle():
    cp, cm = coeff_Cpm(SPHERE, 0, MAT01, n_surface=1024, n_theta=128)
    assert cp == pytest.approx(9.0 / 16.0, rel=1e-9)
    assert cm <= 1e-12
    for iota in (-1, 1):
        cp, cm = coeff_Cpm(SPHERE, iota, MAT01, n_surface=1024, n_theta=128)
        assert cp == pytest.approx(MAT01.kappa**2, rel=1e-9)
        assert cm <= 1e-12


def test_sphere_zero_coefficient_is_material_independent():
    for mat in (MAT11, MAT32):
        cp, _ = coeff_Cpm(SPHERE, 0, mat, n_surface=1024, n_theta=128)
        assert cp == pytest.approx(9.0 / 16.0, rel=1e-9)


def test_convex_preset_has_positive_cplus():
    surf = make_surface(ellipsoid(1.5, 1.0, 0.7))
    for iota in (-1, 0, 1):
        cp, cm = coeff_Cpm(surf, iota, MAT11, n_surface=1024, n_theta=128)
        assert cp > 0.01
        assert cm <= 1e-12


def test_cavity_union_has_positive_cminus():
    surf = make_surface(union_of((sphere(2.0), "outer"), (sphere(1.0), "cavity")))
    for iota in (-1, 0, 1):
        cp, cm = coeff_Cpm(surf, iota, MAT11, n_surface=1024, n_theta=128)
        assert cp > 0.01
        assert cm > 0.01


def test_total_equals_split_sum():
    for spec in (sphere(1.0), torus(2.0, 1.0), ellipsoid(1.5, 1.0, 0.7)):
        surf = make_surface(spec)
        cp, cm = coeff_Cpm(surf, 1, MAT11, n_surface=1024, n_theta=128)
        ct = coeff_C_total(surf, 1, MAT11, n_surface=1024, n_theta=128)
        assert ct == pytest.approx(cp + cm, abs=1e-9)


def test_coeff_AB_closed_forms():
    # frozen values of the exact circle integrals
    a0, b0 = coeff_AB(0, MAT11)
    assert a0 == pytest.approx(27.0 / (128.0 * np.pi), abs=1e-14)
    assert b0 == pytest.approx(-9.0 / 64.0, abs=1e-14)
    for mat in (MAT01, MAT32):
        for iota in (-1, 1):
            a, b = coeff_AB(iota, mat)
            assert a == pytest.approx(3.0 * mat.kappa**2 / (8.0 * np.pi), abs=1e-14)
            assert b == pytest.approx(-mat.kappa**2 / 4.0, abs=1e-14)
    with pytest.raises(ValueError, match="256"):
        coeff_AB(0, MAT11, n_theta=128)


def test_two_path_consistency_on_ellipsoid():
    surf = make_surface(ellipsoid(1.5, 1.0, 0.7))
    ac = asymptotic_coefficients(surf, 0, MAT11, n_surface=4096, n_theta=256)
    assert ac.Ctotal == pytest.approx(ac.A * ac.W + ac.B * ac.chi, rel=1e-6)


def test_three_surface_cross_validation():
    # solve (A, B) from direct totals on sphere and torus, check ellipsoid
    surfaces = {
        "sphere": make_surface(sphere(1.0)),
        "torus": make_surface(torus(2.0, 1.0)),
        "ellipsoid": make_surface(ellipsoid(1.5, 1.0, 0.7)),
    }
    import npelastic.geometry as geo

    rows, rhs = [], []
    for name in ("sphere", "torus"):
        s = surfaces[name]
        rows.append([geo.willmore_energy(s, 64), geo.euler_characteristic_gb(s, 64)])
        rhs.append(coeff_C_total(s, 1, MAT11, n_surface=4096, n_theta=256))
    a, b = np.linalg.solve(np.array(rows), np.array(rhs))
    s = surfaces["ellipsoid"]
    pred = a * geo.willmore_energy(s, 64) + b * geo.euler_characteristic_gb(s, 64)
    got = coeff_C_total(s, 1, MAT11, n_surface=4096, n_theta=256)
    assert got == pytest.approx(pred, rel=1e-5)
    # chi(torus) = 0 recovers A alone from the torus
    a_alone, _ = coeff_AB(1, MAT11)
    st = surfaces["torus"]
    assert coeff_C_total(st, 1, MAT11, 4096, 256) / geo.willmore_energy(st, 64) == (
        pytest.approx(a_alone, rel=1e-9)
    )


def test_upsilon_material_dependence():
    pairs = [(1.0, 1.0), (0.0, 1.0), (2.0, 1.0), (3.0, 2.0)]
    gammas = []
    for lam, mu in pairs:
        mat = derived_constants(lam, mu)
        a, b = coeff_AB(1, mat)
        gammas.append((2.0 / np.pi * a + 2.0 * b) / mat.kappa**2)
    assert np.ptp(gammas) <= 1e-8
    ups0 = []
    for lam, mu in pairs:
        mat = derived_constants(lam, mu)
        a, b = coeff_AB(0, mat)
        ups0.append(2.0 / np.pi * a + 2.0 * b)
    assert np.ptp(ups0) <= 1e-10


def test_scale_invariance_and_mirror():
    big = make_surface(sphere(2.0))
    for iota in (0, 1):
        c1 = coeff_C_total(SPHERE, iota, MAT11, 1024, 128)
        c2 = coeff_C_total(big, iota, MAT11, 1024, 128)
        assert c2 == pytest.approx(c1, abs=1e-9)
    surf = make_surface(ellipsoid(1.5, 1.0, 0.7))
    cm = coeff_C_total(surf, -1, MAT11, 1024, 128)
    cp = coeff_C_total(surf, 1, MAT11, 1024, 128)
    assert cm == pytest.approx(cp, abs=1e-9)


# ---------------------------------------------------------------------------
# emission

def test_counting_csv_format_and_roundtrip():
    curve = _sphere_fit(MAT01, 0.0, "above", nmax=50, tau_ref=0.1)
    text = counting_curve_csv(curve)
    lines = text.strip().split("\n")
    assert lines[0] == "tau,count,count_times_tau2"
    first = lines[1].split(",")
    assert float(first[0]) == pytest.approx(curve.taus[0])
    assert int(first[1]) == curve.counts[0]


def test_coefficients_json_roundtrip():
    ac = asymptotic_coefficients(SPHERE, 0, MAT01, n_surface=256, n_theta=64)
    text = coefficients_json(ac)
    data = json.loads(text)
    assert data["iota"] == 0
    assert data["Cplus"] == pytest.approx(9.0 / 16.0, rel=1e-6)
    assert data["chi"] == pytest.approx(2.0, abs=1e-9)
    # 17 significant digits survive the round trip bit-exactly
    assert data["Cplus"] == float(format(ac.Cplus, ".17g"))


def test_json_17g_determinism():
    obj = {"b": 1.0 / 3.0, "a": [1, 2.5, None, True]}
    assert json_17g(obj) == json_17g(dict(obj))
    assert json.loads(json_17g(obj)) == {
        "a": [1, 2.5, None, True],
        "b": float(format(1.0 / 3.0, ".17g")),
    }
