import itertools

import numpy as np
import pytest

from npelastic.elastic import cylinder_kernel_expansion, derived_constants
from npelastic.symbols import (
    V_SWAP,
    assemble_F,
    assemble_G,
    cylinder_kernel_monomials,
    dk0_dx1_cylinder,
    dk0_dxi1,
    dk0_dxi2,
    effective_symbol,
    ft_homogeneous,
    hermitian_reduce,
    iota_multiset,
    k0,
    k0_eigensystem,
    p_prime,
    q_symbol,
    single_layer_symbol,
    spectral_projector,
    subsymbol_cylinder,
    universal_matrix,
    universal_xy,
    z_symbol,
)

MAT11 = derived_constants(1.0, 1.0)
MAT01 = derived_constants(0.0, 1.0)
MAT21 = derived_constants(2.0, 1.0)
MAT32 = derived_constants(3.0, 2.0)
ALL_IOTAS = (-1, 0, 1)
RNG = np.random.default_rng(42)
THETAS = RNG.uniform(0.0, 2 * np.pi, 20)


# ---------------------------------------------------------------------------
# principal symbol

def test_k0_at_theta0():
    val = k0(0.0, MAT01).value
    expect = 0.25j * np.array([[0, 0, -1], [0, 0, 0], [1, 0, 0]])
    assert np.allclose(val, expect, atol=1e-16)
    assert k0(0.0, MAT01).degree == 0


def test_k0_eigenvalues_everywhere():
    for mat in (MAT11, MAT01, MAT32):
        for th in THETAS:
            w = np.linalg.eigvalsh(k0(th, mat).value)
            assert np.allclose(w, [-mat.kappa, 0.0, mat.kappa], atol=1e-14)


def test_k0_plus_eigenvector():
    for th in THETAS[:8]:
        e_plus = np.array([np.cos(th), np.sin(th), 1j]) / np.sqrt(2)
        v = k0(th, MAT11).value
        assert np.linalg.norm(v @ e_plus - MAT11.kappa * e_plus) <= 1e-14


def test_eigensystem_null_vector_and_orthogonality():
    vals, vecs = k0_eigensystem(0.0, MAT11)
    assert np.allclose(vals, [-MAT11.kappa, 0.0, MAT11.kappa])
    assert np.allclose(vecs[:, 1], [0.0, 1.0, 0.0], atol=1e-15)
    for th in THETAS[:8]:
        vals, vecs = k0_eigensystem(th, MAT11)
        assert abs(vecs[:, 2].conj() @ vecs[:, 0]) <= 1e-15  # <e+, e-> = 0
        assert np.abs(vecs.conj().T @ vecs - np.eye(3)).max() <= 1e-14
        kv = k0(th, MAT11).value
        for i in range(3):
            assert np.linalg.norm(kv @ vecs[:, i] - vals[i] * vecs[:, i]) <= 1e-14


def test_printed_null_direction_is_not_in_kernel():
    # the direction (phi1, -phi2, 0) sometimes quoted for the zero eigenvalue
    # is not annihilated by k0 at generic angles; the computed kernel is
    # (-phi2, phi1, 0)
    th = 0.9
    kv = k0(th, MAT11).value
    quoted = np.array([np.cos(th), -np.sin(th), 0.0])
    assert np.linalg.norm(kv @ quoted) > 1e-3
    computed = np.array([-np.sin(th), np.cos(th), 0.0])
    assert np.linalg.norm(kv @ computed) <= 1e-16


# ---------------------------------------------------------------------------
# derivatives of the principal symbol

def _fd_dk0(th, mat, axis, h=1e-5):
    def at(xi):
        n = np.hypot(*xi)
        c, s = xi[0] / n, xi[1] / n
        return 1j * mat.kappa * np.array([[0, 0, -c], [0, 0, -s], [c, s, 0]])

    xi = np.array([np.cos(th), np.sin(th)])
    e = np.zeros(2)
    e[axis] = h
    return (at(xi + e) - at(xi - e)) / (2 * h)


def test_dxi_derivatives_match_finite_differences():
    for th in THETAS:
        fd1 = _fd_dk0(th, MAT11, 0)
        fd2 = _fd_dk0(th, MAT11, 1)
        assert np.abs(fd1 - dk0_dxi1(th, MAT11).value).max() <= 1e-8
        assert np.abs(fd2 - dk0_dxi2(th, MAT11).value).max() <= 1e-8


def test_dxi1_structure_at_pi_half():
    val = dk0_dxi1(np.pi / 2, MAT11).value
    mask = np.ones((3, 3), dtype=bool)
    mask[0, 2] = mask[2, 0] = False
    assert np.allclose(val[mask], 0.0, atol=1e-16)
    assert val[0, 2] != 0 and val[2, 0] != 0


def test_dxi1_is_hermitian_like_k0():
    for th in THETAS[:8]:
        v = dk0_dxi1(th, MAT11).value
        assert np.abs(v - v.conj().T).max() <= 1e-15


def test_dx1_cylinder_properties():
    assert np.allclose(dk0_dx1_cylinder(0.7, MAT11, 0.0).value, 0.0)
    v1 = dk0_dx1_cylinder(0.7, MAT11, -1.0).value
    v2 = dk0_dx1_cylinder(0.7, MAT11, -2.0).value
    assert np.allclose(v2, 2 * v1, atol=1e-16)
    # vanishes along the flat direction theta = 0 in this fixed-frame form
    assert np.allclose(dk0_dx1_cylinder(0.0, MAT11, -1.0).value, 0.0, atol=1e-16)


# ---------------------------------------------------------------------------
# Fourier table: re-derive each entry with sympy's derivative trick

def test_ft_table_against_sympy_derivative_trick():
    import sympy as sp
    from scipy.special import gamma

    x1, x2 = sp.symbols("xi1 xi2", real=True, positive=False)
    norm = sp.sqrt(x1**2 + x2**2)

    def base_constant(p):
        # FT[(2 pi)^-1 |w|^-p] = 2^(2-p) pi Gamma((2-p)/2) / Gamma(p/2) / (2 pi)
        return 2.0 ** (2 - p) * np.pi * gamma((2 - p) / 2) / gamma(p / 2) / (2 * np.pi)

    assert base_constant(1) == pytest.approx(1.0, rel=1e-12)
    assert base_constant(3) == pytest.approx(-1.0, rel=1e-12)
    assert base_constant(5) == pytest.approx(1.0 / 9.0, rel=1e-12)

    base_power = {1: norm**-1, 3: norm, 5: norm**3}
    for (a, b, p) in [
        (2, 0, 3), (1, 1, 3), (0, 2, 3), (1, 0, 3), (0, 1, 3),
        (4, 0, 5), (3, 1, 5), (2, 2, 5), (0, 0, 1),
    ]:
        # FT[w^alpha f] = (i d/dxi)^alpha FT[f] for the e^{-i w.xi} transform
        expr = base_constant(p) * sp.diff(base_power[p], x1, a, x2, b) * sp.I ** (a + b)
        fn = sp.lambdify((x1, x2), expr, "numpy")
        poly = ft_homogeneous(a, b, p)
        for th in THETAS[:10]:
            ref = complex(fn(np.cos(th), np.sin(th)))
            assert abs(poly(th) - ref) <= 1e-12, (a, b, p)


def test_ft_rejects_unsupported_triple():
    with pytest.raises(ValueError, match="unsupported"):
        ft_homogeneous(5, 0, 7)


# ---------------------------------------------------------------------------
# subsymbol

def test_subsymbol_vanishes_flat():
    assert np.allclose(subsymbol_cylinder(1.1, MAT11, 0.0).value, 0.0)


def test_subsymbol_isotropic_entry():
    kappa = -0.8
    v = subsymbol_cylinder(np.pi / 2, MAT11, kappa).value
    assert v[2, 2] == pytest.approx(-0.5 * MAT11.kappa * kappa, abs=1e-15)
    v0 = subsymbol_cylinder(0.0, MAT11, kappa).value
    assert v0[2, 2] == pytest.approx(0.0, abs=1e-16)


def test_subsymbol_linear_in_curvature_and_material():
    th = 1.3
    a = subsymbol_cylinder(th, MAT11, -1.0).value
    b = subsymbol_cylinder(th, MAT11, -2.5).value
    assert np.allclose(b, 2.5 * a, atol=1e-15)
    # linear in (k, m): value = k U + m V must interpolate across materials
    u = (MAT01.em * subsymbol_cylinder(th, MAT11, -1.0).value
         - MAT11.em * subsymbol_cylinder(th, MAT01, -1.0).value) / (
        MAT11.kappa * MAT01.em - MAT11.em * MAT01.kappa
    )
    vmat = (subsymbol_cylinder(th, MAT11, -1.0).value - MAT11.kappa * u) / MAT11.em
    pred = MAT32.kappa * u + MAT32.em * vmat
    assert np.abs(pred - subsymbol_cylinder(th, MAT32, -1.0).value).max() <= 1e-15


def test_monomial_table_matches_kernel_expansion():
    """The exact table re-derives exactly the order -1 kernel terms."""
    rng = np.random.default_rng(3)
    for mat in (MAT11, MAT32):
        for _ in range(8):
            y = rng.normal(size=2)
            kappa = rng.uniform(-2.0, -0.2)
            k1, k2 = cylinder_kernel_expansion(mat, kappa, y)
            k1_flat, _ = cylinder_kernel_expansion(mat, 0.0, y)
            order_m1 = (k1 - k1_flat) + k2
            table_val = np.zeros((3, 3))
            r = np.linalg.norm(y)
            for p, q, sym, coeff, a, b, pw in cylinder_kernel_monomials():
                c = mat.kappa if sym == "kk" else mat.em
                table_val[p, q] += (
                    float(coeff) * c * kappa * y[0] ** a * y[1] ** b
                    / (2 * np.pi * r**pw)
                )
            assert np.abs(order_m1 - table_val).max() <= 1e-14 * max(
                np.abs(order_m1).max(), 1.0
            )


# ---------------------------------------------------------------------------
# polynomial assembly

def test_p_prime_values():
    kk = MAT11.kappa
    assert p_prime(1, MAT11) == pytest.approx(4 * kk**4, rel=1e-14)
    assert p_prime(0, MAT11) == pytest.approx(kk**4, rel=1e-14)
    assert p_prime(-1, MAT11) == pytest.approx(4 * kk**4, rel=1e-14)


def test_assemble_F_scalar_subsymbol_gives_projector():
    th = 0.6
    kv = k0(th, MAT11).value
    c = 0.37
    for iota in ALL_IOTAS:
        got = assemble_F(iota, kv, c * np.eye(3), MAT11)
        expect = c * p_prime(iota, MAT11) * spectral_projector(iota, th, MAT11)
        assert np.abs(got - expect).max() <= 1e-12
    assert np.allclose(assemble_F(0, kv, np.zeros((3, 3)), MAT11), 0.0)


def test_assemble_G_zero_cases():
    th = 0.6
    kv = k0(th, MAT11).value
    g = dk0_dxi1(th, MAT11).value
    h = dk0_dx1_cylinder(th, MAT11, -1.0).value
    zero = np.zeros((3, 3))
    for iota in ALL_IOTAS:
        assert np.allclose(assemble_G(iota, kv, g, zero, MAT11), 0.0)
        assert np.allclose(assemble_G(iota, kv, zero, h, MAT11), 0.0)
    # linear in curvature through the single x-derivative factor
    g1 = assemble_G(0, kv, g, dk0_dx1_cylinder(th, MAT11, -1.0).value, MAT11)
    g2 = assemble_G(0, kv, g, dk0_dx1_cylinder(th, MAT11, -2.0).value, MAT11)
    assert np.abs(g2 - 2 * g1).max() <= 1e-15


def test_assembly_sum_is_order_invariant():
    th = 0.83
    kv = k0(th, MAT11).value
    ks = subsymbol_cylinder(th, MAT11, -1.0).value
    g = dk0_dxi1(th, MAT11).value
    h = dk0_dx1_cylinder(th, MAT11, -1.0).value
    for iota in ALL_IOTAS:
        base = assemble_F(iota, kv, ks, MAT11) + assemble_G(iota, kv, g, h, MAT11)
        for perm in itertools.islice(
            set(itertools.permutations(iota_multiset(iota))), 10
        ):
            alt = assemble_F(iota, kv, ks, MAT11, order=perm) + assemble_G(
                iota, kv, g, h, MAT11, order=perm
            )
            assert np.abs(alt - base).max() <= 1e-13


# ---------------------------------------------------------------------------
# universal matrix and effective symbol

def test_universal_matrix_curvature_independent():
    for iota in ALL_IOTAS:
        a = universal_matrix(iota, 0.7, MAT21, curvature=-1.0)
        b = universal_matrix(iota, 0.7, MAT21, curvature=-2.0)
        assert np.abs(a - b).max() <= 1e-12


def test_universal_matrix_periodic():
    for iota in ALL_IOTAS:
        a = universal_matrix(iota, 0.3, MAT11)
        b = universal_matrix(iota, 0.3 + 2 * np.pi, MAT11)
        assert np.abs(a - b).max() <= 1e-12


def test_material_linearity_three_point_prediction():
    mats = (MAT11, MAT01, MAT21)
    for iota in ALL_IOTAS:
        for th in np.linspace(0, 2 * np.pi, 8, endpoint=False):
            rows = np.array([[m.kappa, m.em] for m in mats])
            vals = np.stack([universal_matrix(iota, th, m) for m in mats])
            coef, *_ = np.linalg.lstsq(rows, vals.reshape(3, 9), rcond=None)
            pred = (MAT32.kappa * coef[0] + MAT32.em * coef[1]).reshape(3, 3)
            got = universal_matrix(iota, th, MAT32)
            assert np.abs(pred - got).max() <= 1e-10


def test_universal_xy_reproduces_other_materials():
    for iota in ALL_IOTAS:
        for th in (0.2, 1.7, 4.4):
            x, y = universal_xy(iota, th)
            for m in (MAT21, MAT32):
                pred = m.kappa * x + m.em * y
                assert np.abs(pred - universal_matrix(iota, th, m)).max() <= 1e-12


def test_effective_symbol_plane_is_zero():
    assert np.allclose(effective_symbol(0, 0.0, 0.0, 1.1, MAT11), 0.0)


def test_effective_symbol_sphere_combination():
    th = 0.9
    for iota in ALL_IOTAS:
        m1 = universal_matrix(iota, th, MAT11)
        m2 = universal_matrix(iota, np.pi / 2 - th, MAT11)
        expect = -(m1 + V_SWAP @ m2 @ V_SWAP)
        got = effective_symbol(iota, -1.0, -1.0, th, MAT11)
        assert np.abs(got - expect).max() <= 1e-14


def test_effective_symbol_swap_identity():
    rng = np.random.default_rng(8)
    for iota in ALL_IOTAS:
        for _ in range(5):
            k1, k2 = rng.normal(size=2)
            th = rng.uniform(0, 2 * np.pi)
            lhs = effective_symbol(iota, k1, k2, th, MAT11)
            rhs = V_SWAP @ effective_symbol(iota, k2, k1, np.pi / 2 - th, MAT11) @ V_SWAP
            assert np.abs(lhs - rhs).max() <= 1e-13


def test_effective_symbol_curvature_linearity():
    th = 2.2
    iota = 1
    a = effective_symbol(iota, 1.0, 0.0, th, MAT11)
    b = effective_symbol(iota, 0.0, 1.0, th, MAT11)
    for k1, k2 in [(-1.0, -0.5), (0.7, -0.3), (2.0, 2.0)]:
        got = effective_symbol(iota, k1, k2, th, MAT11)
        assert np.abs(got - (k1 * a + k2 * b)).max() <= 1e-13


# ---------------------------------------------------------------------------
# symmetrizer symbols and the Hermitian reduction

def test_single_layer_symbol_value():
    s = single_layer_symbol(0.0, MAT01).value
    assert np.allclose(s, np.diag([3 / 8, 1 / 2, 3 / 8]), atol=1e-15)
    assert single_layer_symbol(0.0, MAT01).degree == -1


def test_block_projector_idempotent_and_q_squares():
    for th in THETAS[:10]:
        s = single_layer_symbol(th, MAT11).value
        q = q_symbol(th, MAT11).value
        z = z_symbol(th, MAT11).value
        assert np.abs(q @ q - s).max() <= 1e-15
        assert np.abs(q @ z - np.eye(3)).max() <= 1e-14
        assert np.abs(z @ s @ z - np.eye(3)).max() <= 1e-13
    lb = np.array(
        [
            [np.cos(0.4) ** 2, np.cos(0.4) * np.sin(0.4), 0],
            [np.cos(0.4) * np.sin(0.4), np.sin(0.4) ** 2, 0],
            [0, 0, 1],
        ]
    )
    assert np.abs(lb @ lb - lb).max() <= 1e-15


def test_hermitian_reduce_preserves_spectrum():
    rng = np.random.default_rng(31)
    for iota in ALL_IOTAS:
        for _ in range(6):
            th = rng.uniform(0, 2 * np.pi)
            k1, k2 = rng.normal(size=2)
            m = effective_symbol(iota, k1, k2, th, MAT21)
            b = hermitian_reduce(m, th, MAT21)
            wm = np.sort(np.linalg.eigvals(m).real)
            wb = np.sort(np.linalg.eigvalsh(b))
            assert np.abs(wm - wb).max() <= 1e-10 * max(np.abs(wb).max(), 1.0)
    assert np.allclose(hermitian_reduce(np.zeros((3, 3)), 0.3, MAT11), 0.0)


def test_hermitian_reduce_sphere_positive_semidefinite():
    for iota in ALL_IOTAS:
        for th in np.linspace(0, 2 * np.pi, 32, endpoint=False):
            m = effective_symbol(iota, -1.0, -1.0, th, MAT11)
            b = hermitian_reduce(m, th, MAT11)
            assert np.linalg.eigvalsh(b).min() >= -1e-12


def test_hermitian_reduce_flags_inconsistent_symbol():
    # assembling with the rotating-frame x-derivative variant breaks the
    # reduction, which is exactly the diagnostic this operation provides
    th = 0.8
    kv = k0(th, MAT11).value
    c = np.cos(th)
    bad_h = 1j * MAT11.kappa * (-1.0) * np.diag([c, 0.0, c])
    f = assemble_F(0, kv, subsymbol_cylinder(th, MAT11, -1.0).value, MAT11)
    g = assemble_G(0, kv, dk0_dxi1(th, MAT11).value, bad_h, MAT11)
    bad_m = (f + g) / (p_prime(0, MAT11) * -1.0)
    m_sphere = -(bad_m + V_SWAP @ bad_m @ V_SWAP)
    with pytest.raises(RuntimeError, match="asymmetry"):
        hermitian_reduce(m_sphere, th, MAT11)


def test_effective_symbol_real_eigenvalues():
    rng = np.random.default_rng(12)
    for iota in ALL_IOTAS:
        for mat in (MAT11, MAT32):
            for _ in range(5):
                th = rng.uniform(0, 2 * np.pi)
                k1, k2 = rng.normal(size=2)
                m = effective_symbol(iota, k1, k2, th, mat)
                w = np.linalg.eigvals(m)
                assert np.abs(w.imag).max() <= 1e-10 * max(np.abs(w).max(), 1e-10)


def test_theta_integral_frame_invariance():
    n = 256
    thetas = 2 * np.pi * np.arange(n) / n
    k1, k2 = -1.0, 0.4
    for iota in ALL_IOTAS:
        tot_a = tot_b = 0.0
        for th in thetas:
            for kk1, kk2, acc in ((k1, k2, "a"), (k2, k1, "b")):
                m = effective_symbol(iota, kk1, kk2, th, MAT11)
                b = hermitian_reduce(m, th, MAT11)
                w = np.linalg.eigvalsh(b)
                val = float(np.sum(w[w > 0] ** 2))
                if acc == "a":
                    tot_a += val
                else:
                    tot_b += val
        assert tot_a * 2 * np.pi / n == pytest.approx(
            tot_b * 2 * np.pi / n, abs=1e-9
        )
