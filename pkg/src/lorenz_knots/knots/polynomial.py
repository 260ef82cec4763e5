"""Integer Laurent polynomials in one variable."""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping


class LaurentPolynomial:
    """Immutable Laurent polynomial with arbitrary-precision integer coefficients.

    >>> t = LaurentPolynomial.variable()
    >>> t - 1 + t ** -1
    t - 1 + t^-1
    """

    __slots__ = ("_c", "var")

    def __init__(self, coeffs: Mapping[int, int] | None = None, var: str = "t"):
        c = {}
        for e, a in (coeffs or {}).items():
            a = int(a)
            if a:
                c[int(e)] = a
        self._c = c
        self.var = var

    # construction

    @classmethod
    def variable(cls, var: str = "t") -> "LaurentPolynomial":
        return cls({1: 1}, var)

    @classmethod
    def constant(cls, a: int, var: str = "t") -> "LaurentPolynomial":
        return cls({0: a}, var)

    @classmethod
    def monomial(cls, coeff: int, exp: int, var: str = "t") -> "LaurentPolynomial":
        return cls({exp: coeff}, var)

    @classmethod
    def from_list(cls, coeffs, low: int = 0, var: str = "t") -> "LaurentPolynomial":
        """Coefficients listed from exponent ``low`` upward."""
        return cls({low + k: a for k, a in enumerate(coeffs)}, var)

    # access

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def __getitem__(self, e: int) -> int:
        return self._c.get(e, 0)

    def is_zero(self) -> bool:
        return not self._c

    @property
    def min_exp(self) -> int:
        return min(self._c) if self._c else 0

    @property
    def max_exp(self) -> int:
        return max(self._c) if self._c else 0

    @property
    def span(self) -> int:
        return self.max_exp - self.min_exp

    def to_list(self):
        """``(low, [coefficients from low to high])``."""
        if not self._c:
            return 0, []
        lo, hi = self.min_exp, self.max_exp
        return lo, [self._c.get(e, 0) for e in range(lo, hi + 1)]

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, LaurentPolynomial):
            if other.var != self.var and other._c and self._c and not (
                    other.is_constant() or self.is_constant()):
                raise ValueError(f"variable mismatch: {self.var} vs {other.var}")
            return other
        if isinstance(other, int):
            return LaurentPolynomial({0: other}, self.var)
        return NotImplemented

    def is_constant(self) -> bool:
        return not self._c or set(self._c) == {0}

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for e, a in other._c.items():
            c[e] = c.get(e, 0) + a
        return LaurentPolynomial(c, self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial({e: -a for e, a in self._c.items()}, self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = {}
        for e1, a1 in self._c.items():
            for e2, a2 in other._c.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + a1 * a2
        return LaurentPolynomial(c, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (e, a), = self._c.items()
            if a not in (1, -1):
                raise ValueError("only unit monomials have Laurent inverses")
            return LaurentPolynomial({e * k: a ** k if k % 2 == 0 else a}, self.var)
        out = LaurentPolynomial({0: 1}, self.var)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> "LaurentPolynomial":
        """Multiply by ``var ** k``."""
        return LaurentPolynomial({e + k: a for e, a in self._c.items()}, self.var)

    def scale_exponents(self, k: int) -> "LaurentPolynomial":
        """Substitute ``var -> var ** k`` (``k = -1`` is the mirror substitution)."""
        return LaurentPolynomial({e * k: a for e, a in self._c.items()}, self.var)

    def inverted(self) -> "LaurentPolynomial":
        return self.scale_exponents(-1)

    def divexact(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        """Exact division; raises ``ArithmeticError`` if there is a remainder."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = dict(self._c)
        q = {}
        ohi = other.max_exp
        lead = other._c[ohi]
        lowest = self.min_exp - other.min_exp
        while rem:
            hi = max(rem)
            a = rem[hi]
            if a % lead:
                raise ArithmeticError("inexact division")
            f = a // lead
            k = hi - ohi
            q[k] = f
            for e, b in other._c.items():
                v = rem.get(e + k, 0) - f * b
                if v:
                    rem[e + k] = v
                else:
                    rem.pop(e + k, None)
            if rem and max(rem) - ohi < lowest:
                raise ArithmeticError("inexact division")
        return LaurentPolynomial(q, self.var)

    def __call__(self, x):
        """Evaluate exactly at an int/Fraction (or numerically at a float/complex)."""
        total = 0
        for e, a in self._c.items():
            if e >= 0:
                total += a * x ** e
            else:
                total += a * (Fraction(1) / x) ** (-e) if isinstance(x, (int, Fraction)) \
                    else a * x ** e
        return total

    # comparison

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial({0: other}, self.var)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def sort_key(self):
        lo, cs = self.to_list()
        return (len(cs), lo, tuple(cs))

    # normal forms

    def symmetrized(self) -> "LaurentPolynomial":
        """Shift so the exponents are centred on zero (lower half wins for odd spans)."""
        if not self._c:
            return self
        return self.shift(-(self.min_exp + self.span // 2))

    def normalized(self) -> "LaurentPolynomial":
        """Centred, with positive leading coefficient (Alexander normal form)."""
        p = self.symmetrized()
        if p._c and p._c[p.max_exp] < 0:
            p = -p
        return p

    # display

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e in sorted(self._c, reverse=True):
            a = self._c[e]
            sign = "-" if a < 0 else "+"
            m = abs(a)
            if e == 0:
                body = str(m)
            else:
                pw = self.var if e == 1 else f"{self.var}^{e}"
                body = pw if m == 1 else f"{m}*{pw}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return str(self)
