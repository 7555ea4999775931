"""Exact scalars: rationals, quadratic extensions Q(sqrt d), and Q(s, t).

Rationals are plain ``fractions.Fraction``. The two other kinds are small
immutable classes that interoperate with ``int`` and ``Fraction`` through the
usual operator protocol, so generic code (Gaussian elimination, polynomial
evaluation) can be written once and run over any of the three fields.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import lcm
from typing import Iterable, Union

import sympy
from sympy import QQ
from sympy.polys.fields import field as _sympy_field

from vspforms.numtheory import is_squarefree

_FUNCTION_FIELD, _S, _T = _sympy_field("s,t", QQ)
_SYMBOLS = sympy.symbols("s t")


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not a rational: {x!r}")


class QuadraticElement:
    """An element ``a + b*sqrt(d)`` of Q(sqrt d), with ``d`` squarefree and ``d != 1``."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        if d in (0, 1) or not is_squarefree(d):
            raise ValueError(f"d={d} must be a squarefree integer different from 0 and 1")
        self.a = _frac(a)
        self.b = _frac(b)
        self.d = d

    @classmethod
    def sqrt(cls, d: int) -> "QuadraticElement":
        return cls(0, 1, d)

    def _coerce(self, other):
        if isinstance(other, QuadraticElement):
            if other.d == self.d or other.b == 0:
                return other.a, other.b
            if self.b == 0:
                return NotImplemented
            raise ValueError(f"mixing Q(sqrt {self.d}) and Q(sqrt {other.d})")
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return NotImplemented

    def _d_with(self, other) -> int:
        if isinstance(other, QuadraticElement) and self.b == 0 and other.b != 0:
            return other.d
        return self.d

    def __add__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return other.__radd__(self) if isinstance(other, QuadraticElement) else NotImplemented
        return QuadraticElement(self.a + c[0], self.b + c[1], self._d_with(other))

    __radd__ = __add__

    def __neg__(self):
        return QuadraticElement(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return other.__rmul__(self) if isinstance(other, QuadraticElement) else NotImplemented
        d = self._d_with(other)
        a, b = self.a, self.b
        return QuadraticElement(a * c[0] + d * b * c[1], a * c[1] + b * c[0], d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> "QuadraticElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt d)")
        return QuadraticElement(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(sqrt d)")
            return QuadraticElement(self.a / other, self.b / other, self.d)
        if isinstance(other, QuadraticElement):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        out = QuadraticElement(1, 0, self.d)
        for _ in range(abs(n)):
            out = out * base
        return out

    def __eq__(self, other):
        if isinstance(other, QuadraticElement):
            if self.b == 0 and other.b == 0:
                return self.a == other.a
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash(self.a) if self.b == 0 else hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def conjugate(self) -> "QuadraticElement":
        return QuadraticElement(self.a, -self.b, self.d)

    def __str__(self):
        if self.b == 0:
            return format_rational(self.a)
        q = lcm(self.a.denominator, self.b.denominator)
        num_a = self.a.numerator * (q // self.a.denominator)
        num_b = self.b.numerator * (q // self.b.denominator)
        sign = "+" if num_b >= 0 else "-"
        body = f"({num_a}{sign}{abs(num_b)}√{self.d})"
        return body if q == 1 else f"{body}/{q}"

    def __repr__(self):
        return f"QuadraticElement({self.a}, {self.b}, d={self.d})"


class RationalFunction:
    """An element of Q(s, t), the rational function field in two parameters."""

    __slots__ = ("_e",)

    def __init__(self, value):
        if isinstance(value, RationalFunction):
            value = value._e
        elif isinstance(value, (int, Fraction)):
            value = _FUNCTION_FIELD(QQ(Fraction(value).numerator, Fraction(value).denominator))
        elif not hasattr(value, "numer"):
            raise TypeError(f"cannot build a rational function from {value!r}")
        self._e = value

    s: "RationalFunction"
    t: "RationalFunction"

    @staticmethod
    def _raw(other):
        if isinstance(other, RationalFunction):
            return other._e
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return _FUNCTION_FIELD(QQ(other.numerator, other.denominator))
        return None

    def _op(self, other, fn):
        raw = self._raw(other)
        if raw is None:
            return NotImplemented
        return RationalFunction(fn(self._e, raw))

    def __add__(self, other):
        return self._op(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        return self._op(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return self._op(other, lambda x, y: y - x)

    def __mul__(self, other):
        return self._op(other, lambda x, y: x * y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        raw = self._raw(other)
        if raw is None:
            return NotImplemented
        if not raw:
            raise ZeroDivisionError("division by zero in Q(s,t)")
        return RationalFunction(self._e / raw)

    def __rtruediv__(self, other):
        raw = self._raw(other)
        if raw is None:
            return NotImplemented
        if not self._e:
            raise ZeroDivisionError("division by zero in Q(s,t)")
        return RationalFunction(raw / self._e)

    def __neg__(self):
        return RationalFunction(-self._e)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        return RationalFunction(self._e**n)

    def __eq__(self, other):
        raw = self._raw(other)
        if raw is None:
            return NotImplemented
        return self._e == raw

    def __hash__(self):
        c = self.constant()
        return hash(c) if c is not None else hash(self._e)

    def __bool__(self):
        return bool(self._e)

    def constant(self) -> Fraction | None:
        """The value as a rational number, or ``None`` if it depends on s or t."""
        num, den = self._e.numer, self._e.denom
        if num.is_ground and den.is_ground:
            v = QQ.to_sympy(num.LC if num else QQ(0)) / QQ.to_sympy(den.LC)
            return Fraction(int(v.p), int(v.q))
        return None

    def conjugate(self):
        return self

    def __str__(self):
        c = self.constant()
        if c is not None:
            return format_rational(c)
        num = sympy.sstr(self._e.numer.as_expr())
        den = self._e.denom.as_expr()
        if den == 1:
            return f"({num})"
        return f"({num})/({sympy.sstr(den)})"

    def __repr__(self):
        return f"RationalFunction({self})"


RationalFunction.s = RationalFunction(_S)
RationalFunction.t = RationalFunction(_T)

Scalar = Union[Fraction, QuadraticElement, RationalFunction]


def coerce(x) -> Scalar:
    """Bring ``int`` inputs into Q; leave other exact scalars alone; refuse floats."""
    if isinstance(x, bool):
        raise TypeError("booleans are not field elements")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, QuadraticElement, RationalFunction)):
        return x
    raise TypeError(f"not an exact field element: {x!r}")


def conjugate(x):
    """Galois conjugation sqrt(d) -> -sqrt(d); identity on the other fields."""
    return x.conjugate() if isinstance(x, QuadraticElement) else x


def is_rational(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return True
    if isinstance(x, QuadraticElement):
        return x.b == 0
    if isinstance(x, RationalFunction):
        return x.constant() is not None
    return False


def as_fraction(x) -> Fraction:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, QuadraticElement) and x.b == 0:
        return x.a
    if isinstance(x, RationalFunction):
        c = x.constant()
        if c is not None:
            return c
    raise ValueError(f"{x} is not rational")


def field_of(values: Iterable) -> str:
    """Smallest supported field containing all values: ``"QQ"``, ``"QQ(sqrt d)"`` or ``"QQ(s,t)"``."""
    d = None
    function_field = False
    for v in values:
        if isinstance(v, QuadraticElement) and v.b != 0:
            if d is not None and d != v.d:
                raise ValueError(f"values live in different fields Q(sqrt {d}) and Q(sqrt {v.d})")
            d = v.d
        elif isinstance(v, RationalFunction) and v.constant() is None:
            function_field = True
    if d is not None and function_field:
        raise ValueError("mixing Q(sqrt d) and Q(s,t) is not supported")
    if function_field:
        return "QQ(s,t)"
    if d is not None:
        return f"QQ(sqrt {d})"
    return "QQ"


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_scalar(x) -> str:
    """Canonical text: ``p/q`` (``p`` alone when ``q == 1``), ``(a+b√d)/q``, or ``(num)/(den)`` in s, t."""
    x = coerce(x)
    if isinstance(x, Fraction):
        return format_rational(x)
    return str(x)


_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")
_TERM_RE = re.compile(
    r"([+-]?)(\d+(?:/\d+)?)?(?:\*?(?:√|sqrt)\(?(-?\d+)\)?)?"
)


def _parse_quadratic(text: str) -> QuadraticElement | None:
    s = text.replace(" ", "")
    denom = 1
    m = re.match(r"^\((.*)\)/(\d+)$", s)
    if m:
        s, denom = m.group(1), int(m.group(2))
    elif s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    a, b, d = Fraction(0), Fraction(0), None
    pos = 0
    while pos < len(s):
        tm = _TERM_RE.match(s, pos)
        if tm is None or tm.end() == pos or (tm.group(2) is None and tm.group(3) is None):
            return None
        if pos > 0 and not tm.group(1):
            return None
        sign = -1 if tm.group(1) == "-" else 1
        coef = Fraction(tm.group(2)) if tm.group(2) else Fraction(1)
        if tm.group(3) is None:
            a += sign * coef
        else:
            dd = int(tm.group(3))
            if d is not None and dd != d:
                return None
            d = dd
            b += sign * coef
        pos = tm.end()
    if d is None:
        return None
    return QuadraticElement(a / denom, b / denom, d)


def parse_scalar(value) -> Scalar:
    """Parse a scalar from JSON: an integer, ``"p/q"``, ``"(a+b√d)/q"`` or a rational function in s, t."""
    if isinstance(value, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise ValueError(f"scalar must be an integer or a string, got {value!r}")
    text = value.strip()
    m = _RATIONAL_RE.match(text)
    if m:
        return Fraction(int(m.group(1)), int(m.group(2) or 1))
    if "√" in text or "sqrt" in text:
        q = _parse_quadratic(text)
        if q is None:
            raise ValueError(f"cannot parse quadratic scalar {value!r}")
        return q
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals=dict(zip(("s", "t"), _SYMBOLS)))
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ValueError(f"cannot parse scalar {value!r}") from exc
    if not expr.free_symbols <= set(_SYMBOLS):
        raise ValueError(f"scalar {value!r} uses symbols other than s, t")
    if not expr.is_rational_function(*_SYMBOLS):
        raise ValueError(f"scalar {value!r} is not a rational function in s, t")
    if expr.free_symbols:
        return RationalFunction(_FUNCTION_FIELD.from_expr(expr))
    if not expr.is_Rational:
        raise ValueError(f"scalar {value!r} is not rational")
    return Fraction(int(expr.p), int(expr.q))
