"""Command-line front end.

Subcommands: material, sphere-exact, universal-matrix, coeffs, discretize,
audit-subsymbol.  All floating-point output carries 17 significant digits
and output ordering is deterministic, so repeated runs are byte-identical.
Exit codes: 0 success, 2 configuration error, 3 numerical diagnostic.
"""
from __future__ import annotations

import argparse
import os
import sys

_THREAD_VAR = "NPELASTIC_THREADS"


def _apply_thread_env():
    n = os.environ.get(_THREAD_VAR)
    if n:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, n)


class ConfigError(Exception):
    pass


def _material(args):
    from .elastic import derived_constants

    try:
        mat = derived_constants(args.lam, args.mu)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    from .asymptotics import json_17g

    return json_17g(
        {
            "lambda": mat.lam,
            "mu": mat.mu,
            "kappa": mat.kappa,
            "em": mat.em,
            "lambda_prime": mat.lambda_prime,
            "mu_prime": mat.mu_prime,
        }
    ) + "\n"


def _sphere_exact(args):
    import numpy as np

    from .asymptotics import counting_curve, counting_curve_csv, sphere_exact_eigs
    from .elastic import derived_constants

    mat = derived_constants(args.lam, args.mu)
    omega = {"zero": 0.0, "plus": mat.kappa, "minus": -mat.kappa}[args.omega]
    tau_ref = args.tau_ref if args.tau_ref is not None else mat.kappa / 8.0
    taus = np.geomspace(args.tau_max, args.tau_min, args.tau_points)
    spec = sphere_exact_eigs(mat, args.nmax)
    guards = [i * mat.kappa for i in (-1, 0, 1)]
    curve = counting_curve(spec, omega, args.side, taus, tau_ref, guard_points=guards)
    return counting_curve_csv(curve)


def _universal_matrix(args):
    import numpy as np

    from .asymptotics import json_17g
    from .elastic import derived_constants
    from .symbols import universal_matrix_grid

    mat = derived_constants(args.lam, args.mu)
    n = args.n_theta
    ms = universal_matrix_grid(args.iota, mat, n)
    thetas = 2.0 * np.pi * np.arange(n) / n
    rows = [
        {
            "theta": float(t),
            "re": [[float(ms[j, p, q].real) for q in range(3)] for p in range(3)],
            "im": [[float(ms[j, p, q].imag) for q in range(3)] for p in range(3)],
        }
        for j, t in enumerate(thetas)
    ]
    return json_17g({"iota": args.iota, "n_theta": n, "matrices": rows}) + "\n"


def _load_surface(text):
    from .geometry import make_surface, parse_surface_json

    stripped = text.strip()
    if stripped.startswith("{"):
        return make_surface(parse_surface_json(stripped))
    if not os.path.exists(text):
        raise ConfigError(f"surface file not found: {text}")
    with open(text, "r", encoding="utf-8") as fh:
        return make_surface(parse_surface_json(fh.read()))


def _coeffs(args):
    from .asymptotics import asymptotic_coefficients, coefficients_json
    from .elastic import derived_constants

    mat = derived_constants(args.lam, args.mu)
    surface = _load_surface(args.surface)
    coeffs = asymptotic_coefficients(
        surface, args.iota, mat, n_surface=args.n_surface, n_theta=args.n_theta
    )
    return coefficients_json(coeffs) + "\n"


def _discretize(args, out_path):
    from .asymptotics import json_17g
    from .elastic import derived_constants
    from .nystrom import assemble_np, cluster_counts, np_spectrum

    mat = derived_constants(args.lam, args.mu)
    surface = _load_surface(args.surface)
    system = assemble_np(surface, mat, args.n_nystrom)
    sample = np_spectrum(system)
    tau_ref = mat.kappa / 4.0
    counts = cluster_counts(sample, mat, tau=tau_ref / 8.0, tau_ref=tau_ref)
    order = ["re,im"]
    eig = sorted(sample.eigenvalues.tolist(), key=lambda z: (z.real, z.imag))
    for z in eig:
        order.append(f"{format(z.real, '.17g')},{format(z.imag, '.17g')}")
    csv_text = "\n".join(order) + "\n"
    cluster_json = json_17g(
        {
            "max_imag": sample.max_imag,
            "spectral_radius": float(max(abs(z) for z in sample.eigenvalues)),
            "radius": sample.radius,
            "cluster_sizes": {str(i): int(len(sample.clusters[i])) for i in (-1, 0, 1)},
            "window_counts": {str(i): counts[i] for i in (-1, 0, 1)},
        }
    ) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
        base, _ = os.path.splitext(out_path)
        with open(base + ".clusters.json", "w", encoding="utf-8") as fh:
            fh.write(cluster_json)
        return ""
    return csv_text + cluster_json


def _audit(args):
    from .audit import subsymbol_audit_report

    return subsymbol_audit_report()


def build_parser():
    parser = argparse.ArgumentParser(
        prog="npelastic",
        description="Spectral asymptotics of the elastic double-layer operator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_material(p):
        p.add_argument("--lambda", dest="lam", type=float, required=True)
        p.add_argument("--mu", type=float, required=True)

    p = sub.add_parser("material", help="derived material constants as JSON")
    add_material(p)

    p = sub.add_parser("sphere-exact", help="counting curve from the exact sphere series")
    add_material(p)
    p.add_argument("--omega", choices=["zero", "plus", "minus"], required=True)
    p.add_argument("--side", choices=["above", "below"], required=True)
    p.add_argument("--nmax", type=int, default=2000)
    p.add_argument("--tau-min", type=float, default=3e-4)
    p.add_argument("--tau-max", type=float, default=3e-2)
    p.add_argument("--tau-points", type=int, default=25)
    p.add_argument("--tau-ref", type=float, default=None)

    p = sub.add_parser("universal-matrix", help="M_iota(theta) table as JSON")
    add_material(p)
    p.add_argument("--iota", type=int, choices=[-1, 0, 1], required=True)
    p.add_argument("--n-theta", type=int, default=64)

    p = sub.add_parser("coeffs", help="asymptotic coefficients for a surface")
    add_material(p)
    p.add_argument("--iota", type=int, choices=[-1, 0, 1], required=True)
    p.add_argument("--surface", required=True, help="inline JSON or a file path")
    p.add_argument("--n-surface", type=int, default=4096)
    p.add_argument("--n-theta", type=int, default=256)

    p = sub.add_parser("discretize", help="Nystrom eigenvalues and cluster summary")
    add_material(p)
    p.add_argument("--surface", required=True, help="inline JSON or a file path")
    p.add_argument("--n-nystrom", type=int, default=400)

    sub.add_parser("audit-subsymbol", help="term-wise subsymbol mismatch report")

    parser.add_argument("--output", default=None, help="write the artifact here instead of stdout")
    return parser


def main(argv=None):
    _apply_thread_env()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "material":
            text = _material(args)
        elif args.command == "sphere-exact":
            text = _sphere_exact(args)
        elif args.command == "universal-matrix":
            text = _universal_matrix(args)
        elif args.command == "coeffs":
            text = _coeffs(args)
        elif args.command == "discretize":
            text = _discretize(args, args.output)
            if args.output:
                return 0
        elif args.command == "audit-subsymbol":
            text = _audit(args)
        else:  # pragma: no cover
            raise ConfigError(f"unknown command {args.command}")
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"numerical diagnostic: {exc}", file=sys.stderr)
        return 3
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
