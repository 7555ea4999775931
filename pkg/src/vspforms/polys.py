"""Ternary forms and the Hilbert-function length count of their zero scheme."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

import sympy

from vspforms.errors import ContractError
from vspforms.fields import RationalFunction, coerce, format_scalar
from vspforms.linalg import Matrix

Monomial = tuple[int, int, int]
_XYZ = sympy.symbols("x y z")


def monomials(d: int) -> list[Monomial]:
    """Degree-``d`` monomials in x, y, z in lexicographic order (x^d first)."""
    return [(i, j, d - i - j) for i in range(d, -1, -1) for j in range(d - i, -1, -1)]


class Form:
    """A polynomial in x, y, z stored as ``{(i, j, k): coefficient}``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, object]):
        self.terms = {tuple(m): coerce(c) for m, c in terms.items() if c != 0}

    @classmethod
    def linear(cls, coeffs: Sequence) -> "Form":
        return cls({(1, 0, 0): coeffs[0], (0, 1, 0): coeffs[1], (0, 0, 1): coeffs[2]})

    @classmethod
    def from_gram(cls, gram: Matrix) -> "Form":
        g = gram.rows
        return cls(
            {
                (2, 0, 0): g[0][0],
                (0, 2, 0): g[1][1],
                (0, 0, 2): g[2][2],
                (0, 1, 1): 2 * g[1][2],
                (1, 0, 1): 2 * g[0][2],
                (1, 1, 0): 2 * g[0][1],
            }
        )

    @classmethod
    def parse(cls, text: str) -> "Form":
        """Parse text such as ``"x^2 + y*z - 3/2*z^2"``; coefficients may involve s, t."""
        s, t = sympy.symbols("s t")
        try:
            expr = sympy.sympify(
                text.replace("^", "**"), locals={"x": _XYZ[0], "y": _XYZ[1], "z": _XYZ[2], "s": s, "t": t}
            )
        except (sympy.SympifyError, SyntaxError, TypeError) as exc:
            raise ContractError(f"cannot parse form {text!r}") from exc
        extra = expr.free_symbols - set(_XYZ) - {s, t}
        if extra:
            raise ContractError(f"form {text!r} uses unknown symbols {sorted(map(str, extra))}")
        poly = sympy.Poly(sympy.expand(expr), *_XYZ)
        terms = {}
        for mon, c in poly.terms():
            if c.free_symbols:
                from vspforms.fields import parse_scalar

                terms[mon] = parse_scalar(str(sympy.together(c)))
            elif c.is_Rational:
                terms[mon] = Fraction(int(c.p), int(c.q))
            else:
                raise ContractError(f"coefficient {c} of {text!r} is not exact rational")
        return cls(terms)

    def degrees(self) -> set[int]:
        return {sum(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int:
        degs = self.degrees()
        if len(degs) > 1:
            raise ContractError(f"form {self} is not homogeneous")
        return degs.pop() if degs else 0

    def is_zero(self) -> bool:
        return not self.terms

    def __mul__(self, other: "Form") -> "Form":
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                out[m] = out.get(m, coerce(0)) + c1 * c2
        return Form(out)

    def __add__(self, other: "Form") -> "Form":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, coerce(0)) + c
        return Form(out)

    def scale(self, c) -> "Form":
        return Form({m: c * v for m, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __call__(self, point: Sequence):
        total = coerce(0)
        for (i, j, k), c in self.terms.items():
            total = total + c * point[0] ** i * point[1] ** j * point[2] ** k
        return total

    def evaluate_series(self, series: Sequence[Sequence], order: int) -> list:
        """Evaluate at a point whose coordinates are power series in eps, truncated at ``order``."""

        def mul(a, b):
            out = [coerce(0)] * order
            for i, x in enumerate(a[:order]):
                if x == 0:
                    continue
                for j, y in enumerate(b[: order - i]):
                    out[i + j] = out[i + j] + x * y
            return out

        one = [coerce(1)] + [coerce(0)] * (order - 1)
        coords = [list(s[:order]) + [coerce(0)] * (order - len(s)) for s in series]
        total = [coerce(0)] * order
        for (i, j, k), c in self.terms.items():
            term = one
            for var, e in zip(coords, (i, j, k)):
                for _ in range(e):
                    term = mul(term, var)
            total = [a + c * b for a, b in zip(total, term)]
        return total

    def primitive(self) -> "Form":
        """Scale to a primitive integer form with positive leading coefficient (rational forms only)."""
        from vspforms.projective import normalize

        keys = sorted(self.terms, reverse=True)
        if not keys:
            return self
        vec = normalize([self.terms[m] for m in keys])
        return Form(dict(zip(keys, vec)))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            mon = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip("xyz", m) if e
            )
            cs = format_scalar(c)
            if not mon:
                parts.append(cs)
            elif cs == "1":
                parts.append(mon)
            elif cs == "-1":
                parts.append("-" + mon)
            else:
                parts.append(f"{cs}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def scheme_length_from_forms(generators: Iterable[Form], d: int) -> int:
    """``dim (S/I)_d`` for the ideal ``I`` generated by homogeneous ternary forms.

    The degree-``d`` part of ``I`` is spanned by the products of each
    generator with all monomials of the complementary degree; its exact rank
    is subtracted from the number of degree-``d`` monomials.
    """
    if d < 3:
        raise ContractError("length is evaluated in degree d >= 3")
    gens = [g for g in generators if not g.is_zero()]
    for g in gens:
        if not g.is_homogeneous():
            raise ContractError(f"generator {g} is not homogeneous")
    basis = monomials(d)
    index = {m: i for i, m in enumerate(basis)}
    rows = []
    for g in gens:
        e = d - g.degree
        if e < 0:
            continue
        for m in monomials(e):
            prod = g * Form({m: 1})
            row = [coerce(0)] * len(basis)
            for mon, c in prod.terms.items():
                row[index[mon]] = c
            rows.append(row)
    rank = Matrix(rows).rank() if rows else 0
    return len(basis) - rank
