"""Small dense linear-algebra kernels shared by every other module.

The 3x3 Hermitian eigensolver uses the closed-form trigonometric solution
of the characteristic cubic followed by one Newton polish, so the hot loop
of the cosphere quadrature stays branch-free and iteration-free.  The dense
nonsymmetric spectrum is delegated to LAPACK's Hessenberg + shifted-QR
driver through scipy, which is the same algorithm a hand-rolled Francis
iteration would implement, at desk scale (n up to a few thousand).
"""
from __future__ import annotations

import numpy as np
import scipy.linalg

__all__ = [
    "hermitian_eig3",
    "hermitian_eigvals3",
    "hermitian_eigvals3_batch",
    "spd_sqrt3",
    "jacobi_sym_eig",
    "real_schur_spectrum",
    "sym_eigvalsh",
]

_HERM_TOL = 1e-12


def _as_mat3(h):
    h = np.asarray(h, dtype=complex)
    if h.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise ValueError("matrix has non-finite entries")
    return h


def _check_hermitian(h, tol=_HERM_TOL):
    scale = max(np.abs(h).max(), 1.0)
    asym = np.abs(h - h.conj().T).max()
    if asym > tol * scale:
        raise ValueError(
            f"matrix is not Hermitian: max asymmetry {asym:.3e} "
            f"exceeds {tol:.1e} * {scale:.3e}"
        )


def hermitian_eigvals3_batch(h):
    """Ascending eigenvalues of a stack of Hermitian 3x3 matrices.

    ``h`` has shape (..., 3, 3); the result has shape (..., 3).  Closed-form
    trigonometric roots of the characteristic cubic, then one Newton step on
    the characteristic polynomial (skipped where the derivative is tiny,
    i.e. at nearly repeated roots, where the trig formula is already exact).
    """
    h = np.asarray(h, dtype=complex)
    q = np.trace(h, axis1=-2, axis2=-1).real / 3.0
    b = h - q[..., None, None] * np.eye(3)
    p2 = np.sum(np.abs(b) ** 2, axis=(-2, -1)) / 6.0
    p = np.sqrt(p2)
    safe_p = np.where(p > 0, p, 1.0)
    c = b / safe_p[..., None, None]
    detc = (
        c[..., 0, 0] * (c[..., 1, 1] * c[..., 2, 2] - c[..., 1, 2] * c[..., 2, 1])
        - c[..., 0, 1] * (c[..., 1, 0] * c[..., 2, 2] - c[..., 1, 2] * c[..., 2, 0])
        + c[..., 0, 2] * (c[..., 1, 0] * c[..., 2, 1] - c[..., 1, 1] * c[..., 2, 0])
    ).real
    r = np.clip(detc / 2.0, -1.0, 1.0)
    phi = np.arccos(r) / 3.0
    two_pi_3 = 2.0 * np.pi / 3.0
    w = np.stack(
        [
            q + 2.0 * p * np.cos(phi + two_pi_3),
            q + 2.0 * p * np.cos(phi - two_pi_3),
            q + 2.0 * p * np.cos(phi),
        ],
        axis=-1,
    )

    # one Newton step on det(h - w I) = -w^3 + c2 w^2 - c1 w + c0
    c2 = 3.0 * q
    hh = h @ h
    c1 = 0.5 * (c2 * c2 - np.trace(hh, axis1=-2, axis2=-1).real)
    c0 = (
        h[..., 0, 0] * (h[..., 1, 1] * h[..., 2, 2] - h[..., 1, 2] * h[..., 2, 1])
        - h[..., 0, 1] * (h[..., 1, 0] * h[..., 2, 2] - h[..., 1, 2] * h[..., 2, 0])
        + h[..., 0, 2] * (h[..., 1, 0] * h[..., 2, 1] - h[..., 1, 1] * h[..., 2, 0])
    ).real
    f = -w**3 + c2[..., None] * w**2 - c1[..., None] * w + c0[..., None]
    df = -3.0 * w**2 + 2.0 * c2[..., None] * w - c1[..., None]
    scale = np.maximum(np.abs(w).max(axis=-1, keepdims=True), 1.0)
    ok = np.abs(df) > 1e-8 * scale**2
    w = np.where(ok, w - f / np.where(ok, df, 1.0), w)
    return np.sort(w, axis=-1)


def hermitian_eigvals3(h, check=True):
    """Ascending eigenvalues of one Hermitian 3x3 matrix."""
    h = _as_mat3(h)
    if check:
        _check_hermitian(h)
    return hermitian_eigvals3_batch(h)


def _eigvec_for(h, lam, scale):
    """Unit eigenvector of Hermitian h for (approximate) eigenvalue lam.

    Rows of h - lam I annihilate the eigenvector under the bilinear dot
    product, so their (unconjugated) cross product spans it; degenerate
    eigenvalues fall back to the smallest singular direction.
    """
    m = h - lam * np.eye(3)
    best = None
    best_norm = -1.0
    for i, j in ((0, 1), (0, 2), (1, 2)):
        v = np.cross(m[i], m[j])
        n = np.linalg.norm(v)
        if n > best_norm:
            best, best_norm = v, n
    if best_norm <= 1e-6 * scale**2:
        _, _, vh = np.linalg.svd(m)
        return vh[-1].conj()
    return best / best_norm


def _polish_eigvec(h, lam, vec, scale):
    """One inverse-iteration step with a slightly shifted eigenvalue."""
    shift = lam + 1e-9 * scale
    try:
        x = np.linalg.solve(h - shift * np.eye(3), vec)
    except np.linalg.LinAlgError:  # pragma: no cover - shift avoids this
        return vec
    n = np.linalg.norm(x)
    return x / n if n > 0 else vec


def hermitian_eig3(h, check=True):
    """Eigendecomposition of a Hermitian 3x3 matrix.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending and orthonormal
    eigenvector columns ``v[:, k]``.  Rejects input whose asymmetry exceeds
    1e-12 relative to its magnitude.  Repeated eigenvalues are reported as
    they come, with eigenvectors merely orthogonalized.
    """
    h = _as_mat3(h)
    if check:
        _check_hermitian(h)
    hs = 0.5 * (h + h.conj().T)
    scale = max(np.abs(hs).max(), 1.0)
    w = hermitian_eigvals3_batch(hs)
    v = np.zeros((3, 3), dtype=complex)
    for k in range(3):
        vec = _polish_eigvec(hs, w[k], _eigvec_for(hs, w[k], scale), scale)
        for j in range(k):
            vec = vec - (v[:, j].conj() @ vec) * v[:, j]
        n = np.linalg.norm(vec)
        if n < 1e-3:
            # clustered eigenvalue returned a repeated direction; take the
            # nullspace vector most orthogonal to the accepted ones
            _, _, vh = np.linalg.svd(hs - w[k] * np.eye(3))
            for cand in vh.conj()[::-1]:
                vec = cand.copy()
                for j in range(k):
                    vec = vec - (v[:, j].conj() @ vec) * v[:, j]
                n = np.linalg.norm(vec)
                if n > 1e-3:
                    break
        v[:, k] = vec / n
    return w, v


def spd_sqrt3(s):
    """Hermitian square root of a Hermitian positive-definite 3x3 matrix."""
    s = _as_mat3(s)
    _check_hermitian(s)
    w, v = hermitian_eig3(s)
    if w[0] <= 0:
        raise ValueError(f"matrix is not positive definite: eigenvalue {w[0]:.6e} <= 0")
    root = (v * np.sqrt(w)) @ v.conj().T
    return 0.5 * (root + root.conj().T)


def jacobi_sym_eig(a, tol=1e-11, max_sweeps=30):
    """All eigenvalues of a real symmetric matrix by cyclic Jacobi sweeps.

    Returns the eigenvalues sorted descending.  The input must be symmetric
    to 1e-10 relative; failure to reduce the off-diagonal norm below
    ``tol * ||a||`` within ``max_sweeps`` sweeps raises with the residual.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n or n < 1:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    norm = np.linalg.norm(a)
    if np.linalg.norm(a - a.T) > 1e-10 * max(norm, 1.0):
        raise ValueError("matrix is not symmetric within 1e-10 relative")
    if n == 1:
        return a[0, :1].copy()
    target = tol * max(norm, 1e-300)
    for _ in range(max_sweeps):
        off = np.sqrt(max(np.sum(a**2) - np.sum(np.diag(a) ** 2), 0.0))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 0.1 * target / n:
                    continue
                theta = 0.5 * (a[q, q] - a[p, p]) / apq
                t = np.sign(theta) / (abs(theta) + np.hypot(1.0, theta))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
    else:
        off = np.sqrt(max(np.sum(a**2) - np.sum(np.diag(a) ** 2), 0.0))
        raise RuntimeError(
            f"Jacobi iteration did not converge in {max_sweeps} sweeps; "
            f"off-diagonal residual {off:.3e} (target {target:.3e})"
        )
    return np.sort(np.diag(a))[::-1]


def real_schur_spectrum(a):
    """All complex eigenvalues of a real dense matrix.

    Hessenberg reduction followed by shifted-QR iteration (LAPACK dhseqr,
    reached through scipy).  The eigenvalue sum is validated against the
    trace to 1e-8 relative; LAPACK non-convergence surfaces as a diagnostic.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n or n < 1:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    try:
        w = scipy.linalg.eigvals(a, check_finite=False)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - rare
        raise RuntimeError(f"QR iteration failed to converge: {exc}") from exc
    tr = np.trace(a)
    scale = max(abs(tr), np.abs(w).sum(), 1e-300)
    if abs(w.sum().real - tr) > 1e-8 * scale:
        raise RuntimeError(
            f"eigenvalue sum {w.sum().real:.6e} deviates from trace {tr:.6e}"
        )
    return w


def sym_eigvalsh(a):
    """Eigenvalues (ascending) of a real symmetric / complex Hermitian matrix."""
    return scipy.linalg.eigvalsh(np.asarray(a), check_finite=False)
