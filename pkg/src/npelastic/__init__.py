"""Spectral asymptotics of the Neumann-Poincare operator in 3D elasticity.

For a homogeneous isotropic body with smooth boundary, eigenvalues of the
double-layer (Neumann-Poincare) operator accumulate at the three points
{-k, 0, k} of the essential spectrum.  This library computes the order -1
effective symbols that govern the accumulation, the tau^-2 counting
coefficients C+ and C-, their decomposition C = A W(Gamma) + B chi(Gamma)
into Willmore energy and Euler characteristic, the closed-form sphere
spectrum used as the master oracle, and a direct Nystrom discretization
for independent numerical evidence.
"""
from .elastic import (
    LameMaterial,
    cylinder_kernel_expansion,
    derived_constants,
    kelvin_matrix,
    np_kernel,
    single_layer_kernel,
    traction_apply,
)
from .geometry import (
    Surface,
    SurfacePointData,
    SurfaceQuadrature,
    SurfaceSpec,
    cylinder_patch,
    diameter_convexity_probe,
    ellipsoid,
    euler_characteristic_gb,
    make_surface,
    parse_surface_json,
    point_data,
    sphere,
    surface_quadrature,
    torus,
    union_of,
    willmore_energy,
)
from .symbols import (
    CircleDirection,
    Symbol3,
    UniversalMatrix,
    V_SWAP,
    assemble_F,
    assemble_G,
    dk0_dx1_cylinder,
    dk0_dxi1,
    dk0_dxi2,
    effective_symbol,
    ft_homogeneous,
    hermitian_reduce,
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
from .asymptotics import (
    AsymptoticCoefficients,
    CountingCurve,
    SphereSpectrum,
    asymptotic_coefficients,
    coeff_AB,
    coeff_Cpm,
    coeff_C_total,
    counting_curve,
    counting_curve_csv,
    coefficients_json,
    fit_tau_minus2,
    sphere_exact_eigs,
    sphere_slope_limit,
    tr_pm_squared,
)
from .nystrom import (
    NystromSystem,
    SpectrumSample,
    assemble_np,
    assemble_single_layer,
    cluster_counts,
    np_spectrum,
)
from .audit import subsymbol_audit_report

__version__ = "0.1.0"
