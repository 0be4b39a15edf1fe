"""Exact polynomials in x1, x2, x3 with rational coefficients.

Terms are stored as a map from exponent triples to ``Fraction`` coefficients;
zero coefficients are never stored, so equality is plain coefficient
comparison.  Partial derivatives, evaluation and box integration are exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

NVARS = 3

_Expo = tuple  # (a1, a2, a3) exponent triple


def _coeff(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"polynomial coefficients must be rational, got {type(c)!r}")


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[_Expo, Fraction] | None = None):
        normalized = {}
        if terms:
            for e, c in terms.items():
                c = _coeff(c)
                if c != 0:
                    normalized[tuple(e)] = c
        self.terms = normalized

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zero() -> "Poly":
        return Poly()

    @staticmethod
    def constant(c) -> "Poly":
        return Poly({(0, 0, 0): _coeff(c)})

    @staticmethod
    def variable(i: int) -> "Poly":
        e = [0, 0, 0]
        e[i] = 1
        return Poly({tuple(e): Fraction(1)})

    @staticmethod
    def monomial(expo: Iterable[int], c=1) -> "Poly":
        return Poly({tuple(expo): _coeff(c)})

    # -- ring operations ------------------------------------------------------

    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        p = Poly.__new__(Poly)
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        p = Poly.__new__(Poly)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other) -> "Poly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return _as_poly(other) + (-self)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Poly.zero()
            p = Poly.__new__(Poly)
            p.terms = {e: c * other for e, c in self.terms.items()}
            return p
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                s = out.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        p = Poly.__new__(Poly)
        p.terms = out
        return p

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        if not isinstance(other, (int, Fraction)) or other == 0:
            raise TypeError("polynomials can only be divided by nonzero rationals")
        p = Poly.__new__(Poly)
        p.terms = {e: c / other for e, c in self.terms.items()}
        return p

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        out = Poly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = _as_poly(other)
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- calculus -------------------------------------------------------------

    def diff(self, axis: int) -> "Poly":
        """Exact partial derivative along axis 0, 1 or 2."""
        out = {}
        for e, c in self.terms.items():
            k = e[axis]
            if k == 0:
                continue
            e2 = list(e)
            e2[axis] = k - 1
            out[tuple(e2)] = c * k
        p = Poly.__new__(Poly)
        p.terms = out
        return p

    def eval(self, point) -> Fraction:
        """Evaluate at a point with rational (or float) coordinates."""
        total = None
        for e, c in self.terms.items():
            v = c
            for i in range(NVARS):
                for _ in range(e[i]):
                    v = v * point[i]
            total = v if total is None else total + v
        return Fraction(0) if total is None else total

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # -- serialization --------------------------------------------------------

    def to_text(self) -> str:
        """Terms as ``num/den * x1^a x2^b x3^c`` joined by ' + ' (graded lex)."""
        if not self.terms:
            return "0"
        def key(e):
            return (sum(e), tuple(-k for k in e))
        parts = []
        for e in sorted(self.terms, key=key):
            c = self.terms[e]
            coeff = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
            factors = [f"x{i+1}^{e[i]}" for i in range(NVARS) if e[i] > 0]
            parts.append(coeff + (" * " + " ".join(factors) if factors else ""))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self.to_text()})"


def _as_poly(v) -> Poly:
    if isinstance(v, Poly):
        return v
    if isinstance(v, (int, Fraction)):
        return Poly.constant(v)
    raise TypeError(f"cannot coerce {type(v)!r} to Poly")


def box_integrate(p: Poly, lo, hi) -> Fraction:
    """Exact integral of p over the axis-aligned box [lo1,hi1]x[lo2,hi2]x[lo3,hi3]."""
    lo = [Fraction(v) for v in lo]
    hi = [Fraction(v) for v in hi]
    total = Fraction(0)
    for e, c in p.terms.items():
        v = c
        for i in range(NVARS):
            k = e[i] + 1
            v = v * (hi[i] ** k - lo[i] ** k) / k
        total += v
    return total


# convenience handles for the coordinate functions
X1 = Poly.variable(0)
X2 = Poly.variable(1)
X3 = Poly.variable(2)
