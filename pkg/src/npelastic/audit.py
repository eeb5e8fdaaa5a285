"""Term-wise audit of the subsymbol re-derivation.

The order -1 symbol data on the standard cylinder circulates in several
printed closed forms that disagree with each other in signs and factors.
This module hardcodes those printed variants, maps everything into exact
rational trig polynomials, and reports every entry where a variant differs
from the re-derivation of :mod:`npelastic.symbols`.  The re-derived choice
is the one validated end to end: it is the only variant whose Hermitian
reduction b = z m q is actually Hermitian, and it reproduces the
closed-form sphere counting coefficients with normalization constant 1.
"""
from __future__ import annotations

from fractions import Fraction

from ._trigpoly import TrigMat, TrigPoly
from .symbols import ft_homogeneous, subsymbol_trig_mats

__all__ = ["subsymbol_audit_report"]


def _mono(a, b, re=1, im=0):
    return TrigPoly.mono(a, b, re, im)


def _mat(rows):
    return TrigMat(rows)


def _zero():
    return TrigPoly()


# printed variant of the Fourier table entries that differ by sign
_PRINTED_FT = {
    (1, 1, 3): _mono(1, 1, 1),
    (3, 1, 5): _mono(1, 3, 1),
}

# printed variant A: kernel-expansion form, order -1 monomials only
# (entry, material symbol, coefficient, a, b, p) in units of
# MAT * kappa * y1^a y2^b / (2 pi |y|^p)
_PRINTED_KERNEL_A = [
    (0, 1, "kk", Fraction(-1), 1, 1, 3),
    (1, 0, "kk", Fraction(1), 1, 1, 3),
    (0, 0, "kk", Fraction(1), 2, 0, 3),
    (1, 1, "kk", Fraction(1), 2, 0, 3),
    (2, 2, "kk", Fraction(1), 2, 0, 3),
    (0, 0, "mm", Fraction(3, 2), 4, 0, 5),
    (0, 1, "mm", Fraction(3, 2), 3, 1, 5),
    (1, 0, "mm", Fraction(3, 2), 3, 1, 5),
    (1, 1, "mm", Fraction(3, 2), 2, 2, 5),
]


def _printed_variant_a():
    """Variant A pushed through the derived Fourier table."""
    u, v = TrigMat(), TrigMat()
    for p, q, sym, coeff, a, b, pw in _PRINTED_KERNEL_A:
        tgt = u if sym == "kk" else v
        tgt.set(p, q, tgt.m[p][q] + ft_homogeneous(a, b, pw).scaled(coeff))
    return u, v


def _printed_variant_b():
    """Variant B: the assembled symbol display, already in symbol space."""
    half = Fraction(1, 2)
    u = _mat(
        [
            [_mono(0, 2, half), _zero(), _zero()],
            [_zero(), _mono(0, 2, half), _zero()],
            [_zero(), _zero(), _mono(0, 2, half)],
        ]
    )
    v = _mat(
        [
            [_mono(0, 4, Fraction(3, 2)), _mono(1, 3, Fraction(3, 2)) + _mono(1, 1, 1), _zero()],
            [_mono(1, 3, Fraction(3, 2)) + _mono(1, 1, -1), _mono(2, 2, Fraction(3, 2)), _zero()],
            [_zero(), _zero(), _zero()],
        ]
    )
    return u, v


def _printed_variant_c():
    """Variant C: the collected coefficient display (u, v form)."""
    u = _mat(
        [
            [_mono(0, 2, -1), _zero(), _zero()],
            [_zero(), _mono(0, 2, -1), _zero()],
            [_zero(), _zero(), _mono(0, 2, -1)],
        ]
    )
    mhalf = Fraction(-1, 2)
    v = _mat(
        [
            [_mono(0, 4, mhalf), _mono(1, 3, mhalf) + _mono(1, 1, Fraction(-3, 2)), _zero()],
            [_mono(1, 3, mhalf) + _mono(1, 1, Fraction(3, 2)), _mono(2, 2, mhalf), _zero()],
            [_zero(), _zero(), _zero()],
        ]
    )
    return u, v


def _diff_lines(label, derived, printed):
    lines = []
    diff = printed - derived
    if diff.is_zero():
        lines.append(f"  {label}: agrees with the re-derivation.")
        return lines
    lines.append(f"  {label}: mismatches against the re-derivation:")
    for p in range(3):
        for q in range(3):
            d = diff.m[p][q]
            if d.is_zero():
                continue
            lines.append(
                f"    entry ({p + 1},{q + 1}): printed {printed.m[p][q]} "
                f"vs derived {derived.m[p][q]}  [difference {d}]"
            )
    return lines


def subsymbol_audit_report():
    """Plain-text term-wise comparison of printed variants vs the derivation."""
    der_u, der_v = subsymbol_trig_mats()
    lines = [
        "Subsymbol audit: re-derived cylinder subsymbol vs printed variants",
        "==================================================================",
        "",
        "The subsymbol on the standard cylinder is kappa (k U + m V) with k, m",
        "the material constants; U and V below are exact trig polynomials in",
        "c = cos(theta), s = sin(theta) on the unit covector circle.",
        "",
        "Re-derived values (validated by the Hermitian reduction and by the",
        "closed-form sphere counting coefficients, normalization constant 1):",
    ]
    for name, mat in (("U", der_u), ("V", der_v)):
        lines.append(f"  {name}:")
        for row in mat.entry_strings():
            lines.append("    [ " + " | ".join(row) + " ]")
    lines.append("")

    lines.append("1. Fourier table of homogeneous kernels (odd-odd monomials):")
    for key, printed in sorted(_PRINTED_FT.items()):
        derived = ft_homogeneous(*key)
        if (printed - derived).is_zero():
            lines.append(f"  {key}: agrees.")
        else:
            lines.append(
                f"  y1^{key[0]} y2^{key[1]} / (2 pi |y|^{key[2]}): printed {printed}, "
                f"derived {derived} (sign flipped; the derivative trick on |xi|^3"
                " produces the negative value)"
            )
    lines.append("")

    pa_u, pa_v = _printed_variant_a()
    lines.append("2. Variant A, kernel-expansion form (mapped through the table):")
    lines += _diff_lines("U (coefficient of k)", der_u, pa_u)
    lines += _diff_lines("V (coefficient of m)", der_v, pa_v)
    lines.append(
        "  Summary: overall sign flipped on every order -1 term; the isotropic"
    )
    lines.append(
        "  k-term is printed with twice the derived magnitude (1 vs 1/2), and a"
    )
    lines.append(
        "  separately printed (3,3) entry carries yet another sign, inconsistent"
    )
    lines.append("  with the collected matrix of the same variant.")
    lines.append("")

    pb_u, pb_v = _printed_variant_b()
    lines.append("3. Variant B, assembled symbol display:")
    lines += _diff_lines("U (coefficient of k)", der_u, pb_u)
    lines += _diff_lines("V (coefficient of m)", der_v, pb_v)
    lines.append(
        "  Summary: drops the antisymmetric k-term entirely and instead attaches"
    )
    lines.append(
        "  an antisymmetric term to m; diagonal signs flipped and the isotropic"
    )
    lines.append("  factor is 1/2 against the derived -1/2.")
    lines.append("")

    pc_u, pc_v = _printed_variant_c()
    lines.append("4. Variant C, collected coefficient display:")
    lines += _diff_lines("U (coefficient of k)", der_u, pc_u)
    lines += _diff_lines("V (coefficient of m)", der_v, pc_v)
    lines.append(
        "  Summary: isotropic k-term printed with factor -1 against the derived"
    )
    lines.append(
        "  -1/2, the antisymmetric term again attached to m (factor -3/2) instead"
    )
    lines.append("  of k (factor 1), and the symmetric m-block scaled by -1/3.")
    lines.append("")

    lines.append("5. Principal-symbol derivatives:")
    lines.append(
        "  d k0 / d xi1: a printed variant flips the (1,3)/(3,1) pair; central"
    )
    lines.append(
        "  finite differences of k0 confirm the derived matrix"
    )
    lines.append(
        "    i k [[0, 0, -s^2], [0, 0, c s], [s^2, -c s, 0]]."
    )
    lines.append(
        "  d k0 / d x1 (cylinder): a printed variant reads i k kappa diag(c, 0, c),"
    )
    lines.append(
        "  computed in a rotating frame; in the fixed chart and frame used"
    )
    lines.append(
        "  throughout this library the derivative is the commutator value"
    )
    lines.append(
        "    i k kappa [[0, -s, 0], [s, 0, 0], [0, 0, 0]],"
    )
    lines.append(
        "  and only this choice makes z m q Hermitian at every direction."
    )
    lines.append("")
    lines.append(
        "Conclusion: the printed variants disagree pairwise; the re-derivation"
    )
    lines.append(
        "is the unique self-consistent assignment, fixed empirically by the"
    )
    lines.append(
        "sphere spectrum (C+ = 9/16 at omega = 0, C- = 0) with no rescaling."
    )
    return "\n".join(lines) + "\n"
