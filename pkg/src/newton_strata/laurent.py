"""Integer Laurent polynomials in one variable ``q``."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping


class LaurentPolyZ:
    """Finite sum ``sum c_k q^k`` with integer ``c_k`` and ``k`` of either sign.

    Zero coefficients are never stored, so equality is equality of term maps.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, int] | None = None):
        clean = {}
        for k, c in (terms or {}).items():
            if not isinstance(k, int) or not isinstance(c, int):
                raise TypeError("exponents and coefficients must be integers")
            if c:
                clean[k] = c
        self._terms = clean

    @classmethod
    def const(cls, c: int) -> "LaurentPolyZ":
        return cls({0: c})

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "LaurentPolyZ":
        return cls({k: c})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def _coerce(self, other) -> "LaurentPolyZ":
        if isinstance(other, LaurentPolyZ):
            return other
        if isinstance(other, int):
            return LaurentPolyZ.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentPolyZ(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPolyZ":
        return LaurentPolyZ({k: -c for k, c in self._terms.items()})

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
        out: dict[int, int] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + c1 * c2
        return LaurentPolyZ(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "LaurentPolyZ":
        if e < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (k, c), = self._terms.items()
            if abs(c) != 1:
                raise ValueError("monomial with non-unit coefficient has no inverse")
            return LaurentPolyZ({k * e: c ** (-e)})
        out = LaurentPolyZ.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __call__(self, q) -> Fraction:
        q = Fraction(q)
        return sum((c * q**k for k, c in self._terms.items()), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __repr__(self) -> str:
        return f"LaurentPolyZ({dict(sorted(self._terms.items()))})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k in sorted(self._terms, reverse=True):
            c = self._terms[k]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                power = "q" if k == 1 else f"q^{k}" if k > 0 else f"q^({k})"
                body = power if mag == 1 else f"{mag}*{power}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


Q = LaurentPolyZ.monomial(1)
