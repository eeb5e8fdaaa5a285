"""Exact polynomials in the unit-circle components (phi1, phi2).

Coefficients are Gaussian rationals (Fraction real and imaginary parts),
keyed by the monomial powers (a, b) of phi1^a phi2^b.  This is the exact
arithmetic the subsymbol re-derivation and its audit report run on.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

__all__ = ["TrigPoly", "TrigMat"]


class TrigPoly:
    """Polynomial sum of c_(a,b) * phi1^a * phi2^b with Gaussian-rational c."""

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for (a, b), (re, im) in terms.items():
                self._add(a, b, Fraction(re), Fraction(im))

    @classmethod
    def mono(cls, a, b, re=1, im=0):
        p = cls()
        p._add(a, b, Fraction(re), Fraction(im))
        return p

    def _add(self, a, b, re, im):
        key = (a, b)
        cre, cim = self.terms.get(key, (Fraction(0), Fraction(0)))
        cre, cim = cre + re, cim + im
        if cre == 0 and cim == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = (cre, cim)

    def __add__(self, other):
        out = TrigPoly()
        for (a, b), (re, im) in self.terms.items():
            out._add(a, b, re, im)
        for (a, b), (re, im) in other.terms.items():
            out._add(a, b, re, im)
        return out

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, c):
        """Scale by a rational (or int) constant."""
        c = Fraction(c)
        out = TrigPoly()
        for (a, b), (re, im) in self.terms.items():
            out._add(a, b, re * c, im * c)
        return out

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, TrigPoly) and (self - other).is_zero()

    def __call__(self, theta):
        c, s = np.cos(theta), np.sin(theta)
        val = 0j
        for (a, b), (re, im) in self.terms.items():
            val += complex(re, im) * c**a * s**b
        return val

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for (a, b) in sorted(self.terms):
            re, im = self.terms[(a, b)]
            mono = ""
            if a:
                mono += f"*c{'' if a == 1 else f'^{a}'}"
            if b:
                mono += f"*s{'' if b == 1 else f'^{b}'}"
            coeff = _fmt_gauss(re, im)
            bits.append(f"{coeff}{mono}")
        return " + ".join(bits).replace("+ -", "- ")


def _fmt_gauss(re, im):
    if im == 0:
        return str(re)
    if re == 0:
        return f"{im}i"
    return f"({re}{'+' if im > 0 else ''}{im}i)"


class TrigMat:
    """3x3 matrix of :class:`TrigPoly` entries."""

    def __init__(self, entries=None):
        self.m = [[TrigPoly() for _ in range(3)] for _ in range(3)]
        if entries is not None:
            for p in range(3):
                for q in range(3):
                    e = entries[p][q]
                    self.m[p][q] = e if isinstance(e, TrigPoly) else TrigPoly.mono(0, 0, e)

    def set(self, p, q, poly):
        self.m[p][q] = poly

    def __add__(self, other):
        out = TrigMat()
        for p in range(3):
            for q in range(3):
                out.m[p][q] = self.m[p][q] + other.m[p][q]
        return out

    def __sub__(self, other):
        out = TrigMat()
        for p in range(3):
            for q in range(3):
                out.m[p][q] = self.m[p][q] - other.m[p][q]
        return out

    def scaled(self, c):
        out = TrigMat()
        for p in range(3):
            for q in range(3):
                out.m[p][q] = self.m[p][q].scaled(c)
        return out

    def is_zero(self):
        return all(self.m[p][q].is_zero() for p in range(3) for q in range(3))

    def __call__(self, theta):
        return np.array(
            [[self.m[p][q](theta) for q in range(3)] for p in range(3)], dtype=complex
        )

    def entry_strings(self):
        return [[str(self.m[p][q]) for q in range(3)] for p in range(3)]
