"""Counting-function machinery and the tau^-2 coefficient pipelines.

Two independent routes to the same numbers live here.  The closed-form
route evaluates the exact sphere eigenvalue series, counts eigenvalues in
one-sided windows and fits the tau^-2 law.  The symbol route integrates
squared eigenvalue sums of the effective symbol over the cosphere bundle:

    C+-(omega_iota) = 1/2 (2 pi)^-2  int_Gamma int_S1
                      Tr^2_{+-}( m_iota(x, theta) ) dtheta dS(x),

and the two-sided total also splits as C = A W(Gamma) + B chi(Gamma) with
material-only coefficients A, B re-derived here from the same definition
(the bookkeeping constants are fixed by the identity, not transcribed).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .numerics import hermitian_eigvals3_batch
from .symbols import V_SWAP, hermitian_reduce, universal_matrix_grid

__all__ = [
    "tr_pm_squared",
    "SphereSpectrum",
    "sphere_exact_eigs",
    "sphere_slope_limit",
    "CountingCurve",
    "counting_curve",
    "FitResult",
    "fit_tau_minus2",
    "AsymptoticCoefficients",
    "coeff_Cpm",
    "coeff_C_total",
    "coeff_AB",
    "asymptotic_coefficients",
    "counting_curve_csv",
    "coefficients_json",
    "json_17g",
]


def tr_pm_squared(h, tol=1e-8):
    """Sums of squares of the positive and negative eigenvalues of h.

    ``h`` must be Hermitian, or at least have a real spectrum within
    ``tol`` relative to the spectral radius (e.g. after
    :func:`npelastic.symbols.hermitian_reduce`); otherwise it is rejected.
    """
    h = np.asarray(h, dtype=complex)
    scale = max(np.abs(h).max(), 1e-300)
    if np.abs(h - h.conj().T).max() <= 1e-12 * scale:
        w = np.linalg.eigvalsh(h)
    else:
        w = np.linalg.eigvals(h)
        radius = max(np.abs(w).max(), 1e-300)
        if np.abs(w.imag).max() > tol * radius:
            raise ValueError(
                f"matrix has complex eigenvalues (max imag {np.abs(w.imag).max():.3e}); "
                "reduce it to Hermitian form first"
            )
        w = np.sort(w.real)
    plus = float(np.sum(w[w > 0] ** 2))
    minus = float(np.sum(w[w < 0] ** 2))
    return plus, minus


# ---------------------------------------------------------------------------
# sphere closed forms

@dataclass
class SphereSpectrum:
    """The three closed-form eigenvalue series of the unit-ball operator.

    Series n = 1..nmax: ``lam0`` converges to 0, ``lam_minus`` to -kappa,
    ``lam_plus`` to +kappa, each value carrying multiplicity 2n + 1.
    """

    material: object
    nmax: int
    n: np.ndarray
    lam0: np.ndarray
    lam_minus: np.ndarray
    lam_plus: np.ndarray
    mult: np.ndarray

    def series(self, name):
        return {"zero": self.lam0, "minus": self.lam_minus, "plus": self.lam_plus}[name]

    def pairs(self, names=("zero", "minus", "plus")):
        """Flatten the requested series into (eigenvalue, multiplicity) pairs."""
        out = []
        for name in names:
            vals = self.series(name)
            out.extend(zip(vals.tolist(), self.mult.tolist()))
        return out


def sphere_exact_eigs(material, nmax):
    """Exact eigenvalue series of the double-layer operator on the unit sphere."""
    if nmax < 1:
        raise ValueError("nmax must be at least 1")
    lam, mu = material.lam, material.mu
    n = np.arange(1, nmax + 1, dtype=float)
    den = 2.0 * (lam + 2.0 * mu) * (4.0 * n**2 - 1.0)
    lam0 = 3.0 / (2.0 * (2.0 * n + 1.0))
    lam_minus = (3.0 * lam - 2.0 * mu * (2.0 * n**2 - 2.0 * n - 3.0)) / den
    lam_plus = (-3.0 * lam + 2.0 * mu * (2.0 * n**2 + 2.0 * n - 3.0)) / den
    return SphereSpectrum(
        material=material,
        nmax=int(nmax),
        n=n,
        lam0=lam0,
        lam_minus=lam_minus,
        lam_plus=lam_plus,
        mult=(2 * n + 1).astype(int),
    )


def sphere_slope_limit(material, iota, nmax=200000):
    """Numeric limit of n (Lambda_n - omega_iota) from the closed-form series.

    Independent slope oracle for the +-kappa counting coefficients: the
    fitted tau^-2 coefficient must equal this limit squared.  Uses one
    Richardson step to remove the 1/n correction.
    """
    spec = sphere_exact_eigs(material, nmax)
    omega = material.omega(iota)
    series = {0: spec.lam0, -1: spec.lam_minus, 1: spec.lam_plus}[iota]
    s_half = (nmax // 2) * (series[nmax // 2 - 1] - omega)
    s_full = nmax * (series[nmax - 1] - omega)
    return 2.0 * s_full - s_half


# ---------------------------------------------------------------------------
# counting curves and fits

@dataclass
class CountingCurve:
    """Eigenvalue counts in nested one-sided windows at a spectral point."""

    omega: float
    side: str
    taus: np.ndarray
    counts: np.ndarray
    tau_ref: float

    def count_times_tau2(self):
        return self.counts * self.taus**2


def counting_curve(spectrum, omega, side, taus, tau_ref, guard_points=()):
    """Count eigenvalues in (omega + tau, omega + tau_ref), or the mirror.

    ``spectrum`` is an iterable of (eigenvalue, multiplicity) pairs or a
    :class:`SphereSpectrum`.  Windows are open, so exact hits at either end
    are excluded.  Any point of ``guard_points`` other than omega must stay
    outside the reference window, else the window is rejected.
    """
    if isinstance(spectrum, SphereSpectrum):
        spectrum = spectrum.pairs()
    if side not in ("above", "below"):
        raise ValueError(f"side must be 'above' or 'below', got {side!r}")
    taus = np.asarray(taus, dtype=float)
    if taus.ndim != 1 or len(taus) == 0 or np.any(taus <= 0):
        raise ValueError("taus must be a nonempty positive grid")
    if np.any(np.diff(taus) >= 0):
        raise ValueError("taus must be strictly descending")
    if not tau_ref > taus[0]:
        raise ValueError("tau_ref must exceed the largest tau")
    for g in guard_points:
        if g != omega and abs(g - omega) <= tau_ref:
            raise ValueError(
                f"reference window of half-width {tau_ref} around omega={omega} "
                f"overlaps the essential-spectrum point {g}"
            )
    vals = np.array([v for v, _ in spectrum], dtype=float)
    mult = np.array([m for _, m in spectrum], dtype=float)
    if side == "above":
        dist = vals - omega
    else:
        dist = omega - vals
    inside_ref = (dist > 0) & (dist < tau_ref)
    vals_in, mult_in = dist[inside_ref], mult[inside_ref]
    counts = np.array([mult_in[vals_in > t].sum() for t in taus])
    return CountingCurve(
        omega=float(omega), side=side, taus=taus, counts=counts, tau_ref=float(tau_ref)
    )


@dataclass
class FitResult:
    coefficient: float
    lo: float
    hi: float
    spread: float
    low_confidence: bool


def fit_tau_minus2(curve):
    """Median-of-count*tau^2 fit over the grid's lower decade.

    Requires at least 10 grid points spanning at least 1.5 decades.  The
    staircase nature of counting functions makes the median robust where a
    least-squares fit is not; a min/max spread above 25 percent flags the
    result as low confidence.
    """
    taus, counts = curve.taus, curve.counts
    if len(taus) < 10:
        raise ValueError("fit requires at least 10 grid points")
    if taus[0] / taus[-1] < 10**1.5:
        raise ValueError("fit requires a grid spanning at least 1.5 decades")
    lower = taus <= 10.0 * taus[-1]
    vals = (counts * taus**2)[lower]
    coeff = float(np.median(vals))
    lo, hi = float(vals.min()), float(vals.max())
    spread = (hi - lo) / coeff if coeff > 0 else 0.0
    return FitResult(
        coefficient=coeff, lo=lo, hi=hi, spread=spread, low_confidence=spread > 0.25
    )


# ---------------------------------------------------------------------------
# cosphere-bundle quadrature of the counting coefficients

@dataclass
class AsymptoticCoefficients:
    """tau^-2 coefficients and their geometric decomposition for one iota."""

    iota: int
    Cplus: float
    Cminus: float
    Ctotal: float
    A: float
    B: float
    W: float
    chi: float
    sum_residual: float = field(default=float("nan"))
    ab_residual: float = field(default=float("nan"))


def _hat_indices(n_theta):
    if n_theta % 4:
        raise ValueError("n_theta must be divisible by 4 (theta -> pi/2 - theta grid map)")
    j = np.arange(n_theta)
    return (n_theta // 4 - j) % n_theta


def _reduced_blocks(iota, material, n_theta):
    """Hermitian stacks P, R with b(x, theta_j) = kappa1 P_j + kappa2 R_j."""
    thetas = 2.0 * np.pi * np.arange(n_theta) / n_theta
    ms = universal_matrix_grid(iota, material, n_theta)
    hat = _hat_indices(n_theta)
    p = np.empty_like(ms)
    r = np.empty_like(ms)
    for j, th in enumerate(thetas):
        p[j] = hermitian_reduce(ms[j], th, material)
        r[j] = hermitian_reduce(V_SWAP @ ms[hat[j]] @ V_SWAP, th, material)
    return p, r


def _grid_axis(n_surface):
    m = int(round(math.sqrt(n_surface)))
    if m * m != int(n_surface):
        m = max(int(math.sqrt(n_surface)), geometry.MIN_RESOLUTION)
    return max(m, geometry.MIN_RESOLUTION)


def coeff_Cpm(surface, iota, material, n_surface=4096, n_theta=256, chunk=2048):
    """One-sided coefficients (C+, C-) by cosphere-bundle quadrature.

    ``n_surface`` is the per-component node budget (an m x m chart grid
    with m = sqrt(n_surface)); ``n_theta`` the size of the uniform circle
    grid (at least 64, divisible by 4).  Components of a union surface sum,
    with cavity components carrying their flipped curvature signs.
    """
    if n_theta < 64:
        raise ValueError("n_theta must be at least 64")
    quad = geometry.surface_quadrature(surface, _grid_axis(n_surface))
    p, r = _reduced_blocks(iota, material, n_theta)
    w_theta = 2.0 * np.pi / n_theta
    cplus = cminus = 0.0
    for start in range(0, len(quad.weights), chunk):
        sl = slice(start, start + chunk)
        k1 = quad.kappa1[sl][:, None, None, None]
        k2 = quad.kappa2[sl][:, None, None, None]
        b = k1 * p[None] + k2 * r[None]
        ev = hermitian_eigvals3_batch(b)
        sq = ev * ev
        plus = np.sum(np.where(ev > 0, sq, 0.0), axis=(1, 2)) * w_theta
        minus = np.sum(np.where(ev < 0, sq, 0.0), axis=(1, 2)) * w_theta
        cplus += float(np.sum(quad.weights[sl] * plus))
        cminus += float(np.sum(quad.weights[sl] * minus))
    pref = 0.5 / (2.0 * np.pi) ** 2
    return pref * cplus, pref * cminus


def _theta_trace_integrals(iota, material, n_theta):
    ms = universal_matrix_grid(iota, material, n_theta)
    hat = _hat_indices(n_theta)
    w_theta = 2.0 * np.pi / n_theta
    t1 = np.einsum("jpq,jqp->j", ms, ms).real
    mhat = V_SWAP @ ms[hat] @ V_SWAP
    t12 = np.einsum("jpq,jqp->j", ms, mhat).real
    return float(t1.sum() * w_theta), float(t12.sum() * w_theta)


def coeff_C_total(surface, iota, material, n_surface=4096, n_theta=256):
    """Two-sided coefficient from the trace of the squared effective symbol.

    Pointwise, tr(m^2) = (kappa1^2 + kappa2^2) tr(M^2) integrated plus the
    cross term, so this path never separates eigenvalue signs and stays
    spectrally accurate.
    """
    ia, ib = _theta_trace_integrals(iota, material, n_theta)
    quad = geometry.surface_quadrature(surface, _grid_axis(n_surface))
    k1, k2 = quad.kappa1, quad.kappa2
    node_vals = (k1 * k1 + k2 * k2) * ia + 2.0 * k1 * k2 * ib
    return float(0.5 / (2.0 * np.pi) ** 2 * np.sum(quad.weights * node_vals))


def coeff_AB(iota, material, n_theta=256):
    """Material-only coefficients (A, B) of C_total = A W + B chi.

    With I_A the circle integral of tr(M^2) and I_B that of
    tr(M V M(pi/2 - theta) V), the identity fixes

        A = I_A / (2 pi^2),   B = (I_B - I_A) / (2 pi),

    since the curvature integrals satisfy
    int (kappa1^2 + kappa2^2) dS = 4 W - 4 pi chi and
    int kappa1 kappa2 dS = 2 pi chi.
    """
    if n_theta < 256:
        raise ValueError("coeff_AB requires a theta grid of at least 256 points")
    ia, ib = _theta_trace_integrals(iota, material, n_theta)
    return ia / (2.0 * np.pi**2), (ib - ia) / (2.0 * np.pi)


def asymptotic_coefficients(surface, iota, material, n_surface=4096, n_theta=256):
    """Full :class:`AsymptoticCoefficients` record with consistency residuals."""
    cplus, cminus = coeff_Cpm(surface, iota, material, n_surface, n_theta)
    ctotal = coeff_C_total(surface, iota, material, n_surface, n_theta)
    a, b = coeff_AB(iota, material, max(n_theta, 256))
    res = _grid_axis(n_surface)
    w = geometry.willmore_energy(surface, res)
    chi = geometry.euler_characteristic_gb(surface, res)
    ab_total = a * w + b * chi
    return AsymptoticCoefficients(
        iota=iota,
        Cplus=cplus,
        Cminus=cminus,
        Ctotal=ctotal,
        A=a,
        B=b,
        W=w,
        chi=chi,
        sum_residual=abs(ctotal - (cplus + cminus)),
        ab_residual=abs(ctotal - ab_total) / max(abs(ctotal), 1e-300),
    )


# ---------------------------------------------------------------------------
# deterministic emission

def _fmt(x):
    return format(float(x), ".17g")


def json_17g(obj):
    """Deterministic JSON with sorted keys and 17-significant-digit floats."""
    if isinstance(obj, dict):
        items = ", ".join(f"{json.dumps(k)}: {json_17g(v)}" for k, v in sorted(obj.items()))
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(json_17g(v) for v in obj) + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj)
    if obj is None:
        return "null"
    return json.dumps(obj)


def counting_curve_csv(curve):
    """CSV emission with columns tau, count, count_times_tau2."""
    lines = ["tau,count,count_times_tau2"]
    for t, c in zip(curve.taus, curve.counts):
        lines.append(f"{_fmt(t)},{int(c)},{_fmt(c * t * t)}")
    return "\n".join(lines) + "\n"


def coefficients_json(coeffs):
    """JSON emission of an :class:`AsymptoticCoefficients` record."""
    return json_17g(
        {
            "iota": coeffs.iota,
            "Cplus": coeffs.Cplus,
            "Cminus": coeffs.Cminus,
            "Ctotal": coeffs.Ctotal,
            "A": coeffs.A,
            "B": coeffs.B,
            "W": coeffs.W,
            "chi": coeffs.chi,
            "sum_residual": coeffs.sum_residual,
            "ab_residual": coeffs.ab_residual,
        }
    )
