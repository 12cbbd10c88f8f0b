"""Sparse integer Laurent polynomials in one variable."""

from __future__ import annotations


class LaurentPoly:
    """Laurent polynomial with exact integer coefficients.

    Coefficients are kept sparsely as {exponent: coefficient}; zero
    coefficients are never stored.  The variable name is cosmetic and
    only affects printing (``A`` for bracket-type values, ``z`` for the
    Conway polynomial).
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs=None, var="A"):
        clean = {}
        if coeffs:
            for e, c in coeffs.items():
                if c:
                    clean[int(e)] = int(c)
        self.coeffs = clean
        self.var = var

    @classmethod
    def const(cls, c, var="A"):
        return cls({0: c}, var=var)

    @classmethod
    def monomial(cls, coeff, exp, var="A"):
        return cls({exp: coeff}, var=var)

    @classmethod
    def zero(cls, var="A"):
        return cls({}, var=var)

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly({0: other}, var=self.var)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out, var=self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.coeffs.items()}, var=self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out, var=self.var)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers of a general Laurent polynomial")
        result = LaurentPoly({0: 1}, var=self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def max_degree(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no degree")
        return max(self.coeffs)

    def min_degree(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no degree")
        return min(self.coeffs)

    def coefficient(self, exp):
        return self.coeffs.get(exp, 0)

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = [f"{c}*{self.var}^{e}" for e, c in sorted(self.coeffs.items())]
        return " + ".join(terms)

    def __repr__(self):
        return f"LaurentPoly({self})"
