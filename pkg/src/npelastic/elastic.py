"""Material constants and pointwise elastic kernels.

All kernels are written directly from the closed form of the elastic
double-layer (Neumann-Poincare) kernel

    K_pq(x, y) = (k/2pi) [nu_p(y)(x-y)_q - nu_q(y)(x-y)_p] / |x-y|^3
               - (1/2pi) (k d_pq + 3m (x-y)_p (x-y)_q / |x-y|^2)
                 * sum_l nu_l(y)(x-y)_l / |x-y|^3

with k = mu/(2(lambda+2mu)) and m = (lambda+mu)/(2(lambda+2mu)) = 1/2 - k.
The traction operator exists only so tests can cross-check this closed form
against the traction of the transposed Kelvin matrix numerically.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LameMaterial",
    "derived_constants",
    "ESSENTIAL_IOTAS",
    "kelvin_matrix",
    "traction_apply",
    "np_kernel",
    "single_layer_kernel",
    "cylinder_kernel_expansion",
]

ESSENTIAL_IOTAS = (-1, 0, 1)


@dataclass(frozen=True)
class LameMaterial:
    """Lame constants plus every derived scalar the pipelines need.

    Attributes
    ----------
    lam, mu : float
        First Lame constant and shear modulus.
    kappa : float
        k = mu / (2 (2 mu + lambda)); the nonzero essential-spectrum points
        of the double-layer operator sit at -kappa and +kappa.
    em : float
        m = (lambda + mu) / (2 (lambda + 2 mu)) = 1/2 - kappa.
    lambda_prime, mu_prime : float
        Kelvin-matrix coefficients.
    """

    lam: float
    mu: float
    kappa: float = field(init=False)
    em: float = field(init=False)
    lambda_prime: float = field(init=False)
    mu_prime: float = field(init=False)

    def __post_init__(self):
        lam, mu = float(self.lam), float(self.mu)
        if not mu > 0:
            raise ValueError(f"shear modulus must satisfy mu > 0, got mu = {mu}")
        if not lam + 2 * mu > 0:
            raise ValueError(f"need lambda + 2 mu > 0, got {lam + 2 * mu}")
        if not lam + mu > 0:
            # required so that kappa stays in (0, 1/2) and em > 0
            raise ValueError(f"need lambda + mu > 0, got {lam + mu}")
        object.__setattr__(self, "kappa", mu / (2 * (2 * mu + lam)))
        object.__setattr__(self, "em", (lam + mu) / (2 * (lam + 2 * mu)))
        object.__setattr__(
            self, "lambda_prime", (lam + 3 * mu) / (4 * np.pi * mu * (lam + 2 * mu))
        )
        object.__setattr__(
            self, "mu_prime", (lam + mu) / (4 * np.pi * mu * (lam + 2 * mu))
        )

    def omega(self, iota):
        """Essential-spectrum point omega_iota = iota * kappa."""
        if iota not in ESSENTIAL_IOTAS:
            raise ValueError(f"iota must be -1, 0 or 1, got {iota}")
        return iota * self.kappa


def derived_constants(lam, mu):
    """Build a :class:`LameMaterial`, validating the parameter inequalities."""
    return LameMaterial(lam, mu)


def _checked_displacement(d):
    d = np.asarray(d, dtype=float)
    r = np.linalg.norm(d)
    if r == 0.0:
        raise ValueError("kernel is singular at coincident points (x - y = 0)")
    return d, r


def kelvin_matrix(material, d):
    """Kelvin fundamental solution evaluated on the displacement d = x - y.

    R_pq = lambda' d_pq / |d| + mu' d_p d_q / |d|^3; symmetric and
    homogeneous of degree -1 in d.
    """
    d, r = _checked_displacement(d)
    return (
        material.lambda_prime * np.eye(3) / r
        + material.mu_prime * np.outer(d, d) / r**3
    )


def traction_apply(material, normal, jacobian):
    """Traction force sigma(u) . nu for a displacement field with the given Jacobian.

    ``jacobian[p, q]`` holds du_p/dx_q.  The stress is
    sigma = lambda tr(J) E + mu (J + J^T), and the returned vector is
    sigma @ nu.  The normal must be unit length.
    """
    normal = np.asarray(normal, dtype=float)
    if abs(np.linalg.norm(normal) - 1.0) > 1e-12:
        raise ValueError("traction requires a unit normal vector")
    jac = np.asarray(jacobian, dtype=float)
    if jac.shape != (3, 3):
        raise ValueError(f"expected a 3x3 Jacobian, got shape {jac.shape}")
    sigma = material.lam * np.trace(jac) * np.eye(3) + material.mu * (jac + jac.T)
    return sigma @ normal


def np_kernel(material, x, y, normal_at_y):
    """Double-layer (Neumann-Poincare) kernel matrix K(x, y)."""
    nu = np.asarray(normal_at_y, dtype=float)
    if abs(np.linalg.norm(nu) - 1.0) > 1e-12:
        raise ValueError("np_kernel requires a unit normal at y")
    d, r = _checked_displacement(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))
    kk, mm = material.kappa, material.em
    anti = np.outer(nu, d) - np.outer(d, nu)
    nd = float(nu @ d)
    sym = kk * np.eye(3) + 3 * mm * np.outer(d, d) / r**2
    return (kk / (2 * np.pi)) * anti / r**3 - (1 / (2 * np.pi)) * sym * nd / r**3


def single_layer_kernel(material, x, y):
    """Single-layer kernel; identical to the Kelvin matrix at x - y."""
    return kelvin_matrix(material, np.asarray(x, dtype=float) - np.asarray(y, dtype=float))


def cylinder_kernel_expansion(material, kappa, y):
    """Two leading homogeneous terms of the kernel on a standard cylinder.

    The cylinder x1^2 + (x3 + R)^2 = R^2 with curvature kappa = -1/R is
    probed at the origin; ``y = (y1, y2)`` is the chart coordinate of the
    second point.  Returns ``(K1, K2)`` where K1 collects the antisymmetric
    part (order -2 odd leading term plus the order -1 curvature term) and
    K2 the remaining order -1 part, so that the full kernel minus (K1 + K2)
    stays bounded as |y| -> 0.
    """
    y = np.asarray(y, dtype=float)
    if y.shape != (2,):
        raise ValueError(f"expected a 2-vector chart coordinate, got shape {y.shape}")
    r = np.linalg.norm(y)
    if r == 0.0:
        raise ValueError("kernel expansion is singular at y = 0")
    kk, mm = material.kappa, material.em
    y1, y2 = y
    k1 = np.zeros((3, 3))
    k1[0, 2], k1[1, 2] = y1, y2
    k1[2, 0], k1[2, 1] = -y1, -y2
    k1[0, 1], k1[1, 0] = kappa * y1 * y2, -kappa * y1 * y2
    k1 *= kk / (2 * np.pi * r**3)

    quad = np.zeros((3, 3))
    quad[0, 0], quad[1, 1] = y1 * y1, y2 * y2
    quad[0, 1] = quad[1, 0] = y1 * y2
    k2 = (
        -(kk * kappa / (4 * np.pi)) * (y1 * y1 / r**3) * np.eye(3)
        - (3 * mm * kappa / (4 * np.pi)) * (y1 * y1 / r**5) * quad
    )
    return k1, k2
