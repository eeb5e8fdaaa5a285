"""Parametrized closed surfaces, curvature data, and surface quadrature.

Every preset surface is a smooth chart (or a union of charts for bodies
with cavities) supplying analytic first and second derivatives.  Principal
curvatures are signed against the outward normal of the elastic body, so
both are negative wherever the body is convex; a spherical cavity of unit
radius carries kappa1 = kappa2 = +1.

Quadrature follows the chart product structure: Gauss-Legendre nodes in
the non-periodic coordinate (placed in cos(polar angle) on sphere-like
charts, so chart poles are never sampled) and the trapezoid rule in the
periodic coordinate.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SurfaceSpec",
    "SurfacePointData",
    "SurfaceQuadrature",
    "Surface",
    "make_surface",
    "parse_surface_json",
    "sphere",
    "ellipsoid",
    "torus",
    "cylinder_patch",
    "union_of",
    "point_data",
    "surface_quadrature",
    "willmore_energy",
    "euler_characteristic_gb",
    "diameter_convexity_probe",
]

MIN_RESOLUTION = 8


# ---------------------------------------------------------------------------
# specs

@dataclass(frozen=True)
class SurfaceSpec:
    """Declarative description of a preset surface.

    ``kind`` is one of ``sphere``, ``ellipsoid``, ``torus``,
    ``cylinder-patch`` or ``union``.  ``params`` holds the size parameters;
    for a union, ``components`` holds (spec, orientation) pairs with
    orientation ``outer`` or ``cavity``.
    """

    kind: str
    params: tuple = ()
    components: tuple = ()

    def __post_init__(self):
        if self.kind not in ("sphere", "ellipsoid", "torus", "cylinder-patch", "union"):
            raise ValueError(f"unknown surface kind {self.kind!r}")


def sphere(radius):
    if not radius > 0:
        raise ValueError("sphere radius must be positive")
    return SurfaceSpec("sphere", (float(radius),))


def ellipsoid(a, b, c):
    if min(a, b, c) <= 0:
        raise ValueError("ellipsoid semiaxes must be positive")
    return SurfaceSpec("ellipsoid", (float(a), float(b), float(c)))


def torus(R, r):
    if not (r > 0 and R > r):
        raise ValueError("torus requires R > r > 0")
    return SurfaceSpec("torus", (float(R), float(r)))


def cylinder_patch(radius, length):
    if not (radius > 0 and length > 0):
        raise ValueError("cylinder-patch requires positive radius and length")
    return SurfaceSpec("cylinder-patch", (float(radius), float(length)))


def union_of(*components):
    """Union spec from (spec, orientation) pairs."""
    comps = []
    for spec, orientation in components:
        if orientation not in ("outer", "cavity"):
            raise ValueError(f"orientation must be 'outer' or 'cavity', got {orientation!r}")
        if spec.kind == "union":
            raise ValueError("nested unions are not supported")
        comps.append((spec, orientation))
    if not comps:
        raise ValueError("union requires at least one component")
    return SurfaceSpec("union", (), tuple(comps))


def parse_surface_json(text_or_obj):
    """Parse the documented surface JSON schema; unknown keys are rejected.

    Accepted forms:
        {"kind": "sphere", "radius": 1.0}
        {"kind": "ellipsoid", "semiaxes": [a, b, c]}
        {"kind": "torus", "R": 2.0, "r": 1.0}
        {"kind": "union", "components": [{..., "orientation": "outer"}, ...]}
    """
    obj = json.loads(text_or_obj) if isinstance(text_or_obj, str) else text_or_obj
    return _spec_from_obj(obj, allow_union=True)


def _spec_from_obj(obj, allow_union, extra_keys=()):
    if not isinstance(obj, dict):
        raise ValueError("surface spec must be a JSON object")
    kind = obj.get("kind")
    allowed = {
        "sphere": {"kind", "radius"},
        "ellipsoid": {"kind", "semiaxes"},
        "torus": {"kind", "R", "r"},
        "union": {"kind", "components"},
    }
    if kind not in allowed or (kind == "union" and not allow_union):
        raise ValueError(f"unknown or misplaced surface kind {kind!r}")
    unknown = set(obj) - allowed[kind] - set(extra_keys)
    if unknown:
        raise ValueError(f"unknown keys in surface spec: {sorted(unknown)}")
    if kind == "sphere":
        return sphere(_num(obj["radius"]))
    if kind == "ellipsoid":
        axes = obj["semiaxes"]
        if not (isinstance(axes, (list, tuple)) and len(axes) == 3):
            raise ValueError("semiaxes must be a list of three numbers")
        return ellipsoid(*(_num(a) for a in axes))
    if kind == "torus":
        return torus(_num(obj["R"]), _num(obj["r"]))
    comps = obj["components"]
    if not isinstance(comps, list) or not comps:
        raise ValueError("union components must be a non-empty list")
    parsed = []
    for comp in comps:
        if not isinstance(comp, dict) or "orientation" not in comp:
            raise ValueError("each union component needs an 'orientation' key")
        orientation = comp["orientation"]
        inner = {k: v for k, v in comp.items() if k != "orientation"}
        parsed.append((_spec_from_obj(inner, allow_union=False), orientation))
    return union_of(*parsed)


def _num(x):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValueError(f"expected a decimal number, got {x!r}")
    return float(x)


# ---------------------------------------------------------------------------
# charts

class _Chart:
    """One smooth chart: u is Gauss-Legendre (or periodic), v is periodic."""

    u_periodic = False
    v_periodic = True
    closed = True

    def position(self, u, v):
        raise NotImplementedError

    def derivatives(self, u, v):
        """Return (ru, rv, ruu, ruv, rvv), each broadcastable to (..., 3)."""
        raise NotImplementedError

    def u_range(self):
        return (-1.0, 1.0)

    def v_range(self):
        return (0.0, 2.0 * np.pi)


class _EllipsoidChart(_Chart):
    # u = cos(polar angle) in (-1, 1), v = azimuth
    def __init__(self, a, b, c):
        self.axes = (a, b, c)

    def position(self, u, v):
        a, b, c = self.axes
        s = np.sqrt(1.0 - u**2)
        return np.stack([a * s * np.cos(v), b * s * np.sin(v), c * u], axis=-1)

    def derivatives(self, u, v):
        a, b, c = self.axes
        s = np.sqrt(1.0 - u**2)
        ds = -u / s
        d2s = -1.0 / s - u**2 / s**3
        cv, sv = np.cos(v), np.sin(v)
        zero = np.zeros_like(u)
        ru = np.stack([a * ds * cv, b * ds * sv, c * np.ones_like(u)], axis=-1)
        rv = np.stack([-a * s * sv, b * s * cv, zero], axis=-1)
        ruu = np.stack([a * d2s * cv, b * d2s * sv, zero], axis=-1)
        ruv = np.stack([-a * ds * sv, b * ds * cv, zero], axis=-1)
        rvv = np.stack([-a * s * cv, -b * s * sv, zero], axis=-1)
        return ru, rv, ruu, ruv, rvv


class _TorusChart(_Chart):
    # u = tube angle (periodic), v = ring angle (periodic)
    u_periodic = True

    def __init__(self, R, r):
        self.R, self.r = R, r

    def u_range(self):
        return (0.0, 2.0 * np.pi)

    def position(self, u, v):
        R, r = self.R, self.r
        w = R + r * np.cos(u)
        return np.stack([w * np.cos(v), w * np.sin(v), r * np.sin(u)], axis=-1)

    def derivatives(self, u, v):
        R, r = self.R, self.r
        cu, su, cv, sv = np.cos(u), np.sin(u), np.cos(v), np.sin(v)
        w = R + r * cu
        ru = np.stack([-r * su * cv, -r * su * sv, r * cu], axis=-1)
        rv = np.stack([-w * sv, w * cv, np.zeros_like(u)], axis=-1)
        ruu = np.stack([-r * cu * cv, -r * cu * sv, -r * su], axis=-1)
        ruv = np.stack([r * su * sv, -r * su * cv, np.zeros_like(u)], axis=-1)
        rvv = np.stack([-w * cv, -w * sv, np.zeros_like(u)], axis=-1)
        return ru, rv, ruu, ruv, rvv


class _CylinderChart(_Chart):
    # u = axial coordinate (Gauss-Legendre), v = cross-section angle
    closed = False

    def __init__(self, radius, length):
        self.radius, self.length = radius, length

    def u_range(self):
        return (0.0, self.length)

    def position(self, u, v):
        R = self.radius
        return np.stack([R * np.cos(v), R * np.sin(v), u], axis=-1)

    def derivatives(self, u, v):
        R = self.radius
        zero = np.zeros_like(u)
        one = np.ones_like(u)
        ru = np.stack([zero, zero, one], axis=-1)
        rv = np.stack([-R * np.sin(v), R * np.cos(v), zero], axis=-1)
        ruu = np.stack([zero, zero, zero], axis=-1)
        ruv = np.stack([zero, zero, zero], axis=-1)
        rvv = np.stack([-R * np.cos(v), -R * np.sin(v), zero], axis=-1)
        return ru, rv, ruu, ruv, rvv


@dataclass
class _Component:
    chart: _Chart
    cavity: bool


class Surface:
    """A surface built from a spec: one chart per connected component."""

    def __init__(self, spec):
        self.spec = spec
        self.components = []
        if spec.kind == "union":
            for sub, orientation in spec.components:
                self.components.append(
                    _Component(_make_chart(sub), cavity=(orientation == "cavity"))
                )
        else:
            self.components.append(_Component(_make_chart(spec), cavity=False))

    @property
    def closed(self):
        return all(c.chart.closed for c in self.components)

    @property
    def n_components(self):
        return len(self.components)


def _make_chart(spec):
    if spec.kind == "sphere":
        (r,) = spec.params
        return _EllipsoidChart(r, r, r)
    if spec.kind == "ellipsoid":
        return _EllipsoidChart(*spec.params)
    if spec.kind == "torus":
        return _TorusChart(*spec.params)
    if spec.kind == "cylinder-patch":
        return _CylinderChart(*spec.params)
    raise ValueError(f"cannot build a chart for kind {spec.kind!r}")


def make_surface(spec):
    """Materialize a :class:`Surface` with chart evaluators from a spec."""
    if isinstance(spec, (dict, str)):
        spec = parse_surface_json(spec)
    return Surface(spec)


# ---------------------------------------------------------------------------
# pointwise curvature data

@dataclass
class SurfacePointData:
    """Position, outward normal, curvature frame and area element at a point.

    Curvatures are signed with the outward normal of the body, so both are
    negative where the body is convex.  ``dir1``/``dir2`` are orthonormal
    tangent vectors along the principal directions (chart directions at
    umbilical points); ``kappa1 >= kappa2``.
    """

    position: np.ndarray
    normal: np.ndarray
    kappa1: float
    kappa2: float
    dir1: np.ndarray
    dir2: np.ndarray
    area_element: float


def _geometry_arrays(chart, u, v, cavity):
    """Vectorized fundamental-form data; u, v broadcast elementwise."""
    pos = chart.position(u, v)
    ru, rv, ruu, ruv, rvv = chart.derivatives(u, v)
    E = np.sum(ru * ru, axis=-1)
    F = np.sum(ru * rv, axis=-1)
    G = np.sum(rv * rv, axis=-1)
    det = E * G - F * F
    if np.any(det <= 0):
        raise ValueError("degenerate chart metric at the requested point")
    cross = np.cross(ru, rv)
    area = np.sqrt(det)
    normal = cross / area[..., None]
    # orient geometrically outward (away from the component's centroid axis)
    normal, flip = _orient_outward(chart, pos, normal)
    L = np.sum(ruu * normal, axis=-1)
    M = np.sum(ruv * normal, axis=-1)
    N = np.sum(rvv * normal, axis=-1)
    # principal curvatures: roots of det(II - k I) = 0
    a = det
    b = -(L * G + N * E - 2.0 * M * F)
    c = L * N - M * M
    disc = np.sqrt(np.maximum(b * b - 4.0 * a * c, 0.0))
    k1 = (-b + disc) / (2.0 * a)
    k2 = (-b - disc) / (2.0 * a)
    if cavity:
        normal = -normal
        k1, k2 = -k2, -k1
    return pos, ru, rv, (E, F, G), (L, M, N), normal, k1, k2, area


def _orient_outward(chart, pos, normal):
    """Flip the chart normal, if needed, so it points out of the body."""
    if isinstance(chart, _EllipsoidChart):
        outward = pos
    elif isinstance(chart, _TorusChart):
        ring = pos.copy()
        ring[..., 2] = 0.0
        nr = np.linalg.norm(ring, axis=-1, keepdims=True)
        center = ring * (chart.R / np.maximum(nr, 1e-300))
        outward = pos - center
    elif isinstance(chart, _CylinderChart):
        outward = pos.copy()
        outward[..., 2] = 0.0
    else:  # pragma: no cover
        raise TypeError(f"no orientation rule for {type(chart).__name__}")
    sign = np.where(np.sum(outward * normal, axis=-1) >= 0.0, 1.0, -1.0)
    return normal * sign[..., None], sign


def point_data(surface, u, v, component=0):
    """Full :class:`SurfacePointData` at chart coordinates (u, v)."""
    comp = surface.components[component]
    chart = comp.chart
    uu, vv = np.asarray(float(u)), np.asarray(float(v))
    u0, u1 = chart.u_range()
    if not chart.u_periodic and not (u0 < float(u) < u1):
        raise ValueError(f"u = {u} outside the open chart domain ({u0}, {u1})")
    pos, ru, rv, (E, F, G), (L, M, N), normal, k1, k2, area = _geometry_arrays(
        chart, uu, vv, comp.cavity
    )
    # principal directions from (II - k I) x = 0 in the chart basis
    sgn = -1.0 if comp.cavity else 1.0
    dirs = []
    for k in (sgn * k1, sgn * k2):
        r1 = np.array([L - k * E, M - k * F])
        r2 = np.array([M - k * F, N - k * G])
        row = r1 if np.linalg.norm(r1) >= np.linalg.norm(r2) else r2
        if np.linalg.norm(row) < 1e-9 * max(abs(L) + abs(E), 1.0):
            dirs.append(None)  # umbilical
        else:
            x = np.array([-row[1], row[0]])
            vec = x[0] * ru + x[1] * rv
            dirs.append(vec / np.linalg.norm(vec))
    d1, d2 = dirs
    if d1 is None or d2 is None or abs(float(k1) - float(k2)) < 1e-9 * (abs(float(k1)) + 1.0):
        d1 = ru / np.linalg.norm(ru)
        d2v = rv - (rv @ d1) * d1
        d2 = d2v / np.linalg.norm(d2v)
    else:
        d2 = d2 - (d2 @ d1) * d1
        d2 /= np.linalg.norm(d2)
    return SurfacePointData(
        position=pos,
        normal=normal,
        kappa1=float(k1),
        kappa2=float(k2),
        dir1=d1,
        dir2=d2,
        area_element=float(area),
    )


# ---------------------------------------------------------------------------
# quadrature

@dataclass
class SurfaceQuadrature:
    """Product-rule surface quadrature with pointwise curvature data.

    Arrays are stacked over all components; ``slices`` maps a component
    index to its slice of rows, and ``grids`` records the (nu, nv) grid
    shape of each component (row index = i * nv + j).
    """

    positions: np.ndarray
    normals: np.ndarray
    kappa1: np.ndarray
    kappa2: np.ndarray
    weights: np.ndarray
    slices: list
    grids: list

    @property
    def total_area(self):
        return float(np.sum(self.weights))


def surface_quadrature(surface, resolution):
    """Quadrature with ``resolution`` nodes per chart axis (so n^2 per chart)."""
    n = int(resolution)
    if n < MIN_RESOLUTION:
        raise ValueError(f"resolution {n} below minimum {MIN_RESOLUTION}")
    pos_all, nor_all, k1_all, k2_all, w_all = [], [], [], [], []
    slices, grids = [], []
    offset = 0
    for comp in surface.components:
        chart = comp.chart
        u0, u1 = chart.u_range()
        if chart.u_periodic:
            un = u0 + (u1 - u0) * np.arange(n) / n
            uw = np.full(n, (u1 - u0) / n)
        else:
            x, wgl = np.polynomial.legendre.leggauss(n)
            un = 0.5 * (u1 - u0) * x + 0.5 * (u1 + u0)
            uw = 0.5 * (u1 - u0) * wgl
        v0, v1 = chart.v_range()
        vn = v0 + (v1 - v0) * np.arange(n) / n
        vw = np.full(n, (v1 - v0) / n)
        uu, vv = np.meshgrid(un, vn, indexing="ij")
        pos, _, _, _, _, normal, k1, k2, area = _geometry_arrays(chart, uu, vv, comp.cavity)
        w = area * np.outer(uw, vw)
        m = n * n
        pos_all.append(pos.reshape(m, 3))
        nor_all.append(normal.reshape(m, 3))
        k1_all.append(k1.reshape(m))
        k2_all.append(k2.reshape(m))
        w_all.append(w.reshape(m))
        slices.append(slice(offset, offset + m))
        grids.append((n, n))
        offset += m
    return SurfaceQuadrature(
        positions=np.concatenate(pos_all),
        normals=np.concatenate(nor_all),
        kappa1=np.concatenate(k1_all),
        kappa2=np.concatenate(k2_all),
        weights=np.concatenate(w_all),
        slices=slices,
        grids=grids,
    )


def willmore_energy(surface, resolution):
    """Willmore energy: the integral of the squared mean curvature."""
    q = surface_quadrature(surface, resolution)
    h = 0.5 * (q.kappa1 + q.kappa2)
    return float(np.sum(h * h * q.weights))


def euler_characteristic_gb(surface, resolution, tol=1e-6):
    """Euler characteristic from the Gauss curvature integral.

    Returns the quadrature value of (2 pi)^-1 times the integral of
    kappa1 * kappa2; raises if it misses an integer by more than ``tol``
    (a sign the grid is too coarse).
    """
    if not surface.closed:
        raise ValueError("Euler characteristic requires a closed surface")
    q = surface_quadrature(surface, resolution)
    chi = float(np.sum(q.kappa1 * q.kappa2 * q.weights)) / (2.0 * np.pi)
    if abs(chi - round(chi)) > tol:
        raise RuntimeError(
            f"Gauss integral {chi:.8f} is not within {tol:g} of an integer; "
            "quadrature too coarse"
        )
    return chi


@dataclass
class DiameterProbe:
    diameter: float
    endpoints: tuple
    curvatures: tuple
    bound: float
    satisfied: bool


def diameter_convexity_probe(surface, resolution, tol=1e-6):
    """Locate the max-distance node pair and check endpoint convexity.

    At both endpoints of a diameter the principal curvatures must satisfy
    kappa <= -1/d (up to ``tol``); a violation is reported as an error
    because it indicates a parametrization or quadrature bug.
    """
    if surface.n_components != 1 or not surface.closed:
        raise ValueError("diameter probe requires a single-component closed surface")
    q = surface_quadrature(surface, resolution)
    pts = q.positions
    d2 = np.sum((pts[:, None, :] - pts[None, :, :]) ** 2, axis=-1)
    i, j = np.unravel_index(np.argmax(d2), d2.shape)
    d = float(np.sqrt(d2[i, j]))
    bound = -1.0 / d
    curv = (
        (float(q.kappa1[i]), float(q.kappa2[i])),
        (float(q.kappa1[j]), float(q.kappa2[j])),
    )
    ok = all(k <= bound + tol for pair in curv for k in pair)
    probe = DiameterProbe(
        diameter=d,
        endpoints=(pts[i].copy(), pts[j].copy()),
        curvatures=curv,
        bound=bound,
        satisfied=ok,
    )
    if not ok:
        raise RuntimeError(
            f"diameter-point convexity violated: curvatures {curv} exceed "
            f"{bound:.6f} + {tol:g} at diameter {d:.6f}"
        )
    return probe
