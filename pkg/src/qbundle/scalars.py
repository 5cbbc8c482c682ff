"""Exact arithmetic in the coefficient field Q(q, s).

All coefficients in the package are rational functions in two commuting
indeterminates q and s with rational coefficients, kept in canonical
reduced form after every operation (numerator and denominator coprime,
denominator normalised by sympy's fraction-field convention, zero stored
uniquely).  q and s are generic: no numeric value or root-of-unity
condition is ever assumed, so factors such as 1 - q**2 are invertible.
"""

from __future__ import annotations

from fractions import Fraction

from sympy.polys.domains import QQ
from sympy.polys.fields import FracElement, field as _make_field

__all__ = [
    "Scalar",
    "ScalarError",
    "DivisionByZero",
    "PoleAtPoint",
    "Q",
    "S",
    "ZERO",
    "ONE",
    "field_ops",
]


class ScalarError(Exception):
    """Base class for coefficient-field errors."""


class DivisionByZero(ScalarError):
    """Division by the zero rational function."""


class PoleAtPoint(ScalarError):
    """The denominator vanishes at the requested (q0, s0)."""


_FIELD, _GEN_Q, _GEN_S = _make_field("q,s", QQ)
_RING_Q, _RING_S = _FIELD.ring.gens


def _to_frac(value) -> FracElement:
    if isinstance(value, FracElement):
        return value
    if isinstance(value, Scalar):
        return value.f
    if isinstance(value, int):
        return _FIELD.ground_new(QQ(value))
    if isinstance(value, Fraction):
        return _FIELD.ground_new(QQ(value.numerator, value.denominator))
    raise TypeError(f"cannot coerce {value!r} into Q(q, s)")


class Scalar:
    """An element of Q(q, s) in canonical reduced form.

    Immutable; safe to share between threads.  Arithmetic reduces
    eagerly (GCD cancellation on every operation).
    """

    __slots__ = ("f",)

    def __init__(self, value=0):
        object.__setattr__(self, "f", _to_frac(value))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_fraction(numerator: int, denominator: int = 1) -> "Scalar":
        if denominator == 0:
            raise DivisionByZero("rational literal with zero denominator")
        return Scalar(Fraction(numerator, denominator))

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        try:
            return Scalar(self.f + _to_frac(other))
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        try:
            return Scalar(self.f - _to_frac(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        try:
            return Scalar(_to_frac(other) - self.f)
        except TypeError:
            return NotImplemented

    def __mul__(self, other):
        try:
            return Scalar(self.f * _to_frac(other))
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            g = _to_frac(other)
        except TypeError:
            return NotImplemented
        if not g:
            raise DivisionByZero("division by zero in Q(q, s)")
        return Scalar(self.f / g)

    def __rtruediv__(self, other):
        if not self.f:
            raise DivisionByZero("division by zero in Q(q, s)")
        try:
            return Scalar(_to_frac(other) / self.f)
        except TypeError:
            return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            raise TypeError("Scalar exponents must be integers")
        if exponent < 0 and not self.f:
            raise DivisionByZero("negative power of zero in Q(q, s)")
        return Scalar(self.f ** exponent)

    def __neg__(self):
        return Scalar(-self.f)

    def __pos__(self):
        return self

    # -- comparisons / hashing ---------------------------------------

    def __eq__(self, other):
        try:
            return self.f == _to_frac(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self.f)

    def __bool__(self):
        return bool(self.f)

    # -- queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.f

    def is_one(self) -> bool:
        return self.f == 1

    def specialize(self, q0: Fraction, s0: Fraction) -> Fraction:
        """Exact rational value at q = q0, s = s0.

        Raises PoleAtPoint when the denominator vanishes there.
        """
        point = [(_RING_Q, QQ(q0.numerator, q0.denominator)),
                 (_RING_S, QQ(s0.numerator, s0.denominator))]
        den = self.f.denom.evaluate(point)
        if not den:
            raise PoleAtPoint(f"denominator of {self} vanishes at q={q0}, s={s0}")
        num = self.f.numer.evaluate(point)
        val = num / den
        return Fraction(int(val.numerator), int(val.denominator))

    def substitute_s(self, s0: Fraction) -> "Scalar":
        """Exact substitution s = s0, leaving q generic."""
        point = [(_RING_S, QQ(s0.numerator, s0.denominator))]
        den = self.f.denom.evaluate(point)
        if not den:
            raise PoleAtPoint(f"denominator of {self} vanishes at s={s0}")
        num = self.f.numer.evaluate(point)
        return Scalar(_FIELD(num) / _FIELD(den))

    # -- formatting ---------------------------------------------------

    def __str__(self):
        return str(self.f).replace("**", "^")

    def __repr__(self):
        return f"Scalar({self})"


Q = Scalar(_GEN_Q)
S = Scalar(_GEN_S)
ZERO = Scalar(0)
ONE = Scalar(1)


def field_ops(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Dispatch-style field arithmetic: op in {add, sub, mul, div}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown field operation {op!r}")
