"""Symbol-level calculus for the elastic double-layer operator.

Everything here works at a fixed boundary point in its curvature-adapted
chart: coordinate axes along the principal directions, third frame vector
along the outward normal, covector direction xi = (cos theta, sin theta)
on the unit circle.  All evaluators take unit directions; callers apply
|xi|^degree for other radii.

Conventions, fixed once and validated end to end by the closed-form sphere
spectrum: the symbol of an integral kernel is its Fourier transform in the
difference variable w = y - x with the e^{-i w.xi} sign, which makes the
principal symbol

    k0(xi) = (i k / |xi|) [[0, 0, -xi1], [0, 0, -xi2], [xi1, xi2, 0]],

Hermitian with eigenvalues {-k, 0, +k}.  The order -1 subsymbol on the
standard cylinder is re-derived here from the kernel expansion with exact
rational coefficients (see :func:`subsymbol_cylinder`); printed variants of
these closed forms circulate with inconsistent signs and factors, and
:mod:`npelastic.audit` documents every mismatch term by term.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._trigpoly import TrigMat, TrigPoly
from .elastic import ESSENTIAL_IOTAS

__all__ = [
    "CircleDirection",
    "Symbol3",
    "UniversalMatrix",
    "V_SWAP",
    "k0",
    "k0_eigensystem",
    "spectral_projector",
    "dk0_dxi1",
    "dk0_dxi2",
    "dk0_dx1_cylinder",
    "ft_homogeneous",
    "subsymbol_cylinder",
    "subsymbol_trig_mats",
    "cylinder_kernel_monomials",
    "p_prime",
    "iota_multiset",
    "assemble_F",
    "assemble_G",
    "universal_matrix",
    "universal_matrix_grid",
    "effective_symbol",
    "single_layer_symbol",
    "q_symbol",
    "z_symbol",
    "hermitian_reduce",
    "universal_xy",
]

#: row/column swap involution exchanging the two tangent directions
V_SWAP = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])


@dataclass(frozen=True)
class CircleDirection:
    """Unit covector direction on the cotangent circle."""

    theta: float

    @property
    def phi1(self):
        return float(np.cos(self.theta))

    @property
    def phi2(self):
        return float(np.sin(self.theta))


def _theta(direction):
    if isinstance(direction, CircleDirection):
        return direction.theta
    return float(direction)


@dataclass(frozen=True)
class Symbol3:
    """A 3x3 symbol value at a unit direction plus its homogeneity degree."""

    value: np.ndarray
    degree: int
    frame: str = "C-frame"

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.value, dtype=dtype)

    def at_radius(self, r):
        """Value at the scaled covector r * xi, using the degree contract."""
        return self.value * float(r) ** self.degree


# ---------------------------------------------------------------------------
# principal symbol and its derivatives

def k0(direction, material):
    """Principal (order 0) symbol; Hermitian, eigenvalues {-k, 0, k}."""
    th = _theta(direction)
    c, s = np.cos(th), np.sin(th)
    kk = material.kappa
    m = 1j * kk * np.array([[0, 0, -c], [0, 0, -s], [c, s, 0]], dtype=complex)
    return Symbol3(m, degree=0)


def k0_eigensystem(direction, material):
    """Eigenpairs of k0: values (-k, 0, k) with orthonormal column vectors.

    The null vector is the computed kernel of k0, which is
    (-phi2, phi1, 0); the vectors for +-k are 2^{-1/2} (phi1, phi2, +-i).
    """
    th = _theta(direction)
    c, s = np.cos(th), np.sin(th)
    kk = material.kappa
    r = 1.0 / np.sqrt(2.0)
    vecs = np.array(
        [
            [r * c, -s, r * c],
            [r * s, c, r * s],
            [-1j * r, 0.0, 1j * r],
        ],
        dtype=complex,
    )
    vals = np.array([-kk, 0.0, kk])
    return vals, vecs


def spectral_projector(iota, direction, material):
    """Orthogonal projector of k0 onto the eigenvalue iota * kappa."""
    vals, vecs = k0_eigensystem(direction, material)
    idx = {-1: 0, 0: 1, 1: 2}[iota]
    e = vecs[:, idx]
    return np.outer(e, e.conj())


def dk0_dxi1(direction, material):
    """d k0 / d xi1 at |xi| = 1 (degree -1).

    Direct differentiation of k0; matches central finite differences.  A
    printed variant of this matrix circulates with the (1,3)/(3,1) pair
    flipped in sign, which fails the finite-difference check.
    """
    th = _theta(direction)
    c, s = np.cos(th), np.sin(th)
    kk = material.kappa
    m = 1j * kk * np.array(
        [[0, 0, -s * s], [0, 0, c * s], [s * s, -c * s, 0]], dtype=complex
    )
    return Symbol3(m, degree=-1)


def dk0_dxi2(direction, material):
    """d k0 / d xi2 at |xi| = 1 (degree -1)."""
    th = _theta(direction)
    c, s = np.cos(th), np.sin(th)
    kk = material.kappa
    m = 1j * kk * np.array(
        [[0, 0, c * s], [0, 0, -c * c], [-c * s, c * c, 0]], dtype=complex
    )
    return Symbol3(m, degree=-1)


def dk0_dx1_cylinder(direction, material, curvature):
    """x1-derivative of the principal symbol on the standard cylinder.

    Computed in one fixed chart with one fixed frame (the curvature-adapted
    system of the base point): the symbol at a nearby cross-section point is
    the frame rotation of k0 conjugated back, and its first variation is the
    commutator of k0 with the rotation generator, linear in the curvature.
    """
    th = _theta(direction)
    s = np.sin(th)
    kk = material.kappa
    m = 1j * kk * curvature * np.array(
        [[0, -s, 0], [s, 0, 0], [0, 0, 0]], dtype=complex
    )
    return Symbol3(m, degree=-1)


# ---------------------------------------------------------------------------
# Fourier transforms of homogeneous kernels and the subsymbol re-derivation

_HALF = Fraction(1, 2)
_FT_TABLE = {
    # (a, b, p) of w1^a w2^b / (2 pi |w|^p)  ->  exact TrigPoly at |xi| = 1,
    # for the transform integral of K(w) e^{-i w.xi} dw
    (0, 0, 1): TrigPoly.mono(0, 0, 1),
    (1, 0, 3): TrigPoly.mono(1, 0, 0, -1),
    (0, 1, 3): TrigPoly.mono(0, 1, 0, -1),
    (2, 0, 3): TrigPoly.mono(0, 2, 1),
    (1, 1, 3): TrigPoly.mono(1, 1, -1),
    (0, 2, 3): TrigPoly.mono(2, 0, 1),
    (4, 0, 5): TrigPoly.mono(0, 4, 1),
    (3, 1, 5): TrigPoly.mono(1, 3, -1),
    (2, 2, 5): TrigPoly.mono(2, 2, 1),
}


def ft_homogeneous(a, b, p):
    """Distributional Fourier transform of w1^a w2^b / (2 pi |w|^p).

    Returns a callable theta -> complex scalar on the unit circle.  The
    transforms are the derivative-trick values (for p = 5, derivatives of
    |xi|^3 / 9); note that the powers swap slots, w1-powers becoming
    xi2-powers, and that the odd-odd entries (1,1,3) and (3,1,5) are
    negative, unlike some tabulated versions.
    """
    try:
        poly = _FT_TABLE[(a, b, p)]
    except KeyError:
        raise ValueError(f"unsupported homogeneous-kernel triple {(a, b, p)}") from None
    return poly


def cylinder_kernel_monomials():
    """Exact monomial table of the order -1 kernel terms on the cylinder.

    Each record is (p, q, material_symbol, coeff, a, b, pw) meaning the
    kernel entry (p, q) contains

        coeff * {k or m} * kappa * y1^a y2^b / (2 pi |y|^pw),

    with y the chart coordinate of the source point relative to the base
    point.  These monomials agree entry by entry with
    :func:`npelastic.elastic.cylinder_kernel_expansion`.
    """
    table = []
    # antisymmetric curvature term of the odd leading part
    table.append((0, 1, "kk", Fraction(1), 1, 1, 3))
    table.append((1, 0, "kk", Fraction(-1), 1, 1, 3))
    # isotropic part of the normal-projection term
    for d in range(3):
        table.append((d, d, "kk", -_HALF, 2, 0, 3))
    # anisotropic part of the normal-projection term
    table.append((0, 0, "mm", Fraction(-3, 2), 4, 0, 5))
    table.append((0, 1, "mm", Fraction(-3, 2), 3, 1, 5))
    table.append((1, 0, "mm", Fraction(-3, 2), 3, 1, 5))
    table.append((1, 1, "mm", Fraction(-3, 2), 2, 2, 5))
    return table


def _derive_subsymbol_mats():
    u_mat, v_mat = TrigMat(), TrigMat()
    for p, q, sym, coeff, a, b, pw in cylinder_kernel_monomials():
        target = u_mat if sym == "kk" else v_mat
        target.set(p, q, target.m[p][q] + ft_homogeneous(a, b, pw).scaled(coeff))
    return u_mat, v_mat


_U_MAT, _V_MAT = _derive_subsymbol_mats()


def subsymbol_trig_mats():
    """Exact (U, V) with subsymbol = kappa (k U(theta) + m V(theta))."""
    return _U_MAT, _V_MAT


def subsymbol_cylinder(direction, material, curvature):
    """Order -1 subsymbol on the standard cylinder (degree -1 at |xi| = 1).

    Re-derived from the exact kernel monomials through the Fourier table,
    so the value is linear in the curvature and linear in (k, m):

        k_sub = kappa * (k U(theta) + m V(theta)).

    The result is not Hermitian (it has a real antisymmetric part); only
    the reduced symbol b = z m q downstream is.
    """
    th = _theta(direction)
    m = curvature * (
        material.kappa * _U_MAT(th) + material.em * _V_MAT(th)
    )
    return Symbol3(m, degree=-1)


# ---------------------------------------------------------------------------
# polynomial assembly

_IOTA_MULTISETS = {-1: (-1, 0, 0, 1, 1), 0: (-1, -1, 0, 1, 1), 1: (-1, -1, 0, 0, 1)}


def iota_multiset(iota):
    """The five shifts (iota' repeated twice except iota) in nondecreasing order."""
    return _IOTA_MULTISETS[iota]


def p_prime(iota, material):
    """Derivative of the spectral polynomial at its simple root omega_iota."""
    if iota not in ESSENTIAL_IOTAS:
        raise ValueError(f"iota must be -1, 0 or 1, got {iota}")
    kk = material.kappa
    out = 1.0
    for j in ESSENTIAL_IOTAS:
        if j != iota:
            out *= (iota * kk - j * kk) ** 2
    return out


def _factors(iota, k0_value, material, order=None):
    kk = material.kappa
    eye = np.eye(3, dtype=complex)
    shifts = _IOTA_MULTISETS[iota] if order is None else tuple(order)
    if sorted(shifts) != sorted(_IOTA_MULTISETS[iota]):
        raise ValueError(f"order must permute the multiset {_IOTA_MULTISETS[iota]}")
    return [np.asarray(k0_value) - (s * kk) * eye for s in shifts]


def assemble_F(iota, k0_value, ksub_value, material, order=None):
    """Sum of the five one-subsymbol insertions into the factor product.

    Slot l of the ordered five-factor product (k0 - omega_s) is replaced by
    the subsymbol; the sum is independent of the factor ordering (``order``
    lets tests permute the multiset).  With a scalar subsymbol c E this
    collapses to c p'(omega_iota) P_iota.
    """
    fac = _factors(iota, k0_value, material, order)
    ks = np.asarray(ksub_value, dtype=complex)
    out = np.zeros((3, 3), dtype=complex)
    for l in range(5):
        term = np.eye(3, dtype=complex)
        for j in range(l):
            term = term @ fac[j]
        term = term @ ks
        for j in range(l + 1, 5):
            term = term @ fac[j]
        out += term
    return out


def assemble_G(iota, k0_value, dxi_value, dx_value, material, order=None):
    """Sum of the ten two-derivative insertions, with the 1/i prefactor.

    For positions l < m in the ordered five-factor product, slot l takes
    the xi-derivative and slot m the x-derivative of the principal symbol;
    the three untouched factors stay in place.
    """
    fac = _factors(iota, k0_value, material, order)
    g = np.asarray(dxi_value, dtype=complex)
    h = np.asarray(dx_value, dtype=complex)
    out = np.zeros((3, 3), dtype=complex)
    for l in range(5):
        for m in range(l + 1, 5):
            term = np.eye(3, dtype=complex)
            for j in range(l):
                term = term @ fac[j]
            term = term @ g
            for j in range(l + 1, m):
                term = term @ fac[j]
            term = term @ h
            for j in range(m + 1, 5):
                term = term @ fac[j]
            out += term
    return out / 1j


def universal_matrix(iota, theta, material, curvature=-1.0):
    """Geometry-free order -1 coefficient matrix M_iota(theta).

    Evaluates the effective symbol on the standard cylinder of the given
    curvature and divides the curvature back out; the result is
    curvature-independent and an exact linear form k X(theta) + m Y(theta)
    in the material constants.
    """
    th = _theta(theta)
    kv = k0(th, material).value
    f = assemble_F(iota, kv, subsymbol_cylinder(th, material, curvature).value, material)
    g = assemble_G(
        iota,
        kv,
        dk0_dxi1(th, material).value,
        dk0_dx1_cylinder(th, material, curvature).value,
        material,
    )
    return (f + g) / (p_prime(iota, material) * curvature)


@dataclass(frozen=True)
class UniversalMatrix:
    """Callable theta -> M_iota(theta) for one essential-spectrum point."""

    iota: int
    material: object

    def __call__(self, theta):
        return universal_matrix(self.iota, theta, self.material)


def universal_matrix_grid(iota, material, n_theta):
    """M_iota stacked on the uniform theta grid (n_theta, 3, 3)."""
    thetas = 2.0 * np.pi * np.arange(n_theta) / n_theta
    return np.stack([universal_matrix(iota, t, material) for t in thetas])


def effective_symbol(iota, kappa1, kappa2, theta, material):
    """Order -1 effective symbol at a surface point.

    kappa1, kappa2 are the principal curvatures in the curvature-adapted
    frame with theta measured from the kappa1 direction:

        m = kappa1 M(theta) + kappa2 V M(pi/2 - theta) V.

    All three eigenvalues are real (the symbol is similar to the Hermitian
    reduction b = z m q).
    """
    th = _theta(theta)
    m1 = universal_matrix(iota, th, material)
    m2 = universal_matrix(iota, np.pi / 2.0 - th, material)
    return kappa1 * m1 + kappa2 * (V_SWAP @ m2 @ V_SWAP)


# ---------------------------------------------------------------------------
# symmetrizer symbols and the Hermitian reduction

def _block_projector(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array(
        [[c * c, c * s, 0.0], [c * s, s * s, 0.0], [0.0, 0.0, 1.0]], dtype=complex
    )


def single_layer_symbol(direction, material):
    """Principal symbol of the single-layer operator at |xi| = 1 (degree -1).

    s = (2 mu)^{-1} (E - m L(xi)) with L the rank-two block projector built
    from the in-plane direction projector; L^2 = L makes the square roots
    below closed forms.
    """
    th = _theta(direction)
    lb = _block_projector(th)
    m = (np.eye(3, dtype=complex) - material.em * lb) / (2.0 * material.mu)
    return Symbol3(m, degree=-1)


def q_symbol(direction, material):
    """Positive square root of the single-layer symbol (degree -1/2)."""
    th = _theta(direction)
    lb = _block_projector(th)
    c = 1.0 - np.sqrt(1.0 - material.em)
    m = (np.eye(3, dtype=complex) - c * lb) / np.sqrt(2.0 * material.mu)
    return Symbol3(m, degree=Fraction(-1, 2))


def z_symbol(direction, material):
    """Inverse of q (degree +1/2); z s z = E with the degree bookkeeping."""
    th = _theta(direction)
    lb = _block_projector(th)
    c = 1.0 / np.sqrt(1.0 - material.em) - 1.0
    m = (np.eye(3, dtype=complex) + c * lb) * np.sqrt(2.0 * material.mu)
    return Symbol3(m, degree=Fraction(1, 2))


def hermitian_reduce(m, direction, material, tol=1e-10, atol=1e-13):
    """Similarity b = z m q with the same spectrum, Hermitian by construction.

    Raises when the computed b fails Hermiticity beyond ``tol`` relative,
    which flags an upstream symbol bug rather than a property of m.  The
    absolute floor ``atol`` keeps matrices at roundoff scale (the universal
    matrix vanishes identically at theta in {0, pi}) from tripping the
    relative check on noise.
    """
    th = _theta(direction)
    q = q_symbol(th, material).value
    z = z_symbol(th, material).value
    b = z @ np.asarray(m, dtype=complex) @ q
    scale = max(np.abs(b).max(), atol)
    asym = np.abs(b - b.conj().T).max()
    if asym > tol * scale:
        raise RuntimeError(
            f"Hermitian reduction failed: relative asymmetry {asym / scale:.3e} "
            f"exceeds {tol:.1e}; the input symbol is inconsistent"
        )
    return 0.5 * (b + b.conj().T)


# ---------------------------------------------------------------------------
# material-linearity extraction

def universal_xy(iota, theta):
    """Universal matrices (X, Y) with M_iota = k X + m Y for any material.

    Solved from two reference materials; the linearity is exact, so any
    other Lame pair reproduces M_iota from these two matrices.
    """
    from .elastic import LameMaterial

    mat_a = LameMaterial(1.0, 1.0)   # k = 1/6, m = 1/3
    mat_b = LameMaterial(0.0, 1.0)   # k = 1/4, m = 1/4
    ma = universal_matrix(iota, theta, mat_a)
    mb = universal_matrix(iota, theta, mat_b)
    ka, ea = mat_a.kappa, mat_a.em
    kb, eb = mat_b.kappa, mat_b.em
    det = ka * eb - ea * kb
    x = (eb * ma - ea * mb) / det
    y = (-kb * ma + ka * mb) / det
    return x, y
