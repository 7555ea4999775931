"""Smooth conics in P^2: duals, polars, rational points with certificates,
parametrization, and descent of a quadratic point to a rational one."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt
from typing import Sequence

from vspforms.errors import ContractError, SearchLimitError, UnsupportedFieldError
from vspforms.fields import QuadraticElement, as_fraction, coerce, conjugate, field_of, is_rational
from vspforms.linalg import Matrix, diagonalize_symmetric, dot
from vspforms.numtheory import (
    factor,
    integer_sqrt_exact,
    is_square_mod_prime,
    rational_squarefree,
    squarefree_decomposition,
)
from vspforms.polys import Form
from vspforms.projective import ProjLine, ProjPoint, cross, normalize, proportional

DEFAULT_SEARCH_BUDGET = 20_000_000


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    """A ternary quadratic form ``f(v) = v^T M v`` given by its symmetric Gram matrix ``M``."""

    gram: Matrix

    def __post_init__(self):
        if not isinstance(self.gram, Matrix):
            object.__setattr__(self, "gram", Matrix(self.gram))
        if self.gram.nrows != 3 or self.gram.ncols != 3:
            raise ContractError("Gram matrix must be 3x3", pointer="/gram")
        if not self.gram.is_symmetric():
            raise ContractError("Gram matrix is not symmetric", pointer="/gram")

    @classmethod
    def diagonal(cls, a, b, c) -> "QuadraticForm":
        return cls(Matrix.diagonal([a, b, c]))

    @classmethod
    def from_form(cls, form: Form) -> "QuadraticForm":
        if form.degrees() - {2}:
            raise ContractError(f"{form} is not a quadratic form", pointer="/form")
        t = form.terms
        z = coerce(0)

        def c(m):
            return t.get(m, z)

        half = Fraction(1, 2)
        return cls(
            Matrix(
                [
                    [c((2, 0, 0)), c((1, 1, 0)) * half, c((1, 0, 1)) * half],
                    [c((1, 1, 0)) * half, c((0, 2, 0)), c((0, 1, 1)) * half],
                    [c((1, 0, 1)) * half, c((0, 1, 1)) * half, c((0, 0, 2))],
                ]
            )
        )

    @classmethod
    def parse(cls, text: str) -> "QuadraticForm":
        return cls.from_form(Form.parse(text))

    def __eq__(self, other):
        if not isinstance(other, QuadraticForm):
            return NotImplemented
        return self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        return f"QuadraticForm({self.form()})"

    @cached_property
    def det(self):
        return self.gram.det()

    @cached_property
    def adjugate(self) -> Matrix:
        return self.gram.adjugate()

    @property
    def is_smooth(self) -> bool:
        return self.det != 0

    @property
    def field(self) -> str:
        return field_of(x for row in self.gram.rows for x in row)

    def dual(self) -> "QuadraticForm":
        """The dual conic, with Gram matrix adj(M)."""
        return QuadraticForm(self.adjugate)

    def form(self) -> Form:
        return Form.from_gram(self.gram)

    def __call__(self, v: Sequence):
        return dot(v, self.gram @ tuple(v))

    def bilinear(self, u: Sequence, v: Sequence):
        return dot(u, self.gram @ tuple(v))

    def require_smooth(self):
        if not self.is_smooth:
            raise ContractError("conic is degenerate (det = 0)", pointer="/gram")


@dataclass(frozen=True)
class ConicInvariants:
    smooth: bool
    det: object
    dual: QuadraticForm


def conic_invariants(f: QuadraticForm) -> ConicInvariants:
    return ConicInvariants(smooth=f.is_smooth, det=f.det, dual=f.dual())


def polar_line(n: QuadraticForm, u: Sequence) -> ProjLine:
    """The polar of ``u`` with respect to the conic of ``n``: the line with coefficients ``N u``."""
    n.require_smooth()
    u = tuple(coerce(x) for x in u)
    if all(x == 0 for x in u):
        raise ContractError("the zero vector is not a point", pointer="/point")
    return ProjLine(normalize(n.gram @ u))


# --- Legendre decision ------------------------------------------------------


@dataclass(frozen=True)
class LegendreReduction:
    """Diagonal model ``kappa * sum(a_i * X_i**2)`` of a form over Q.

    ``a`` are squarefree, pairwise coprime integers; a zero ``X`` of the
    model pulls back to the zero ``P @ (X_i / scales_i)`` of the original form.
    """

    a: tuple[int, int, int]
    scales: tuple[Fraction, Fraction, Fraction]
    kappa: Fraction
    change: Matrix

    def pull_back(self, x: Sequence[int]) -> tuple:
        w = tuple(Fraction(xi) / r for xi, r in zip(x, self.scales))
        return self.change @ w


def legendre_reduction(f: QuadraticForm) -> LegendreReduction:
    d, p = diagonalize_symmetric(f.gram)
    diag = [as_fraction(d[i, i]) for i in range(3)]
    if any(x == 0 for x in diag):
        raise ContractError("conic is degenerate (det = 0)", pointer="/gram")
    a, scales = [], []
    for x in diag:
        ai, ri = rational_squarefree(x)
        a.append(ai)
        scales.append(ri)
    kappa = Fraction(1)
    while True:
        pair = next(
            ((i, j) for i in range(3) for j in range(i + 1, 3) if gcd(a[i], a[j]) > 1), None
        )
        if pair is None:
            break
        i, j = pair
        k = 3 - i - j
        g = gcd(a[i], a[j])
        kappa /= g
        a[i] //= g
        a[j] //= g
        scales[i] *= g
        scales[j] *= g
        ak, s = squarefree_decomposition(a[k] * g)
        a[k] = ak
        scales[k] *= s
    return LegendreReduction(tuple(a), tuple(scales), kappa, p)


def holzer_bounds(a: int, b: int, c: int) -> tuple[int, int, int]:
    return isqrt(abs(b * c)), isqrt(abs(a * c)), isqrt(abs(a * b))


def legendre_obstruction(a: int, b: int, c: int) -> dict | None:
    """``None`` if ``aX^2 + bY^2 + cZ^2`` has a nontrivial zero, else the obstruction.

    Coefficients must be squarefree and pairwise coprime.
    """
    if (a > 0 and b > 0 and c > 0) or (a < 0 and b < 0 and c < 0):
        return {"kind": "definite", "sign": 1 if a > 0 else -1}
    for coef, other in ((a, -b * c), (b, -a * c), (c, -a * b)):
        if abs(coef) == 1:
            continue
        for prime in sorted(factor(coef)):
            if not is_square_mod_prime(other, prime):
                residue = other % prime
                return {
                    "kind": "local",
                    "prime": prime,
                    "coefficient": coef,
                    "residue": residue,
                    "euler": pow(residue, (prime - 1) // 2, prime),
                }
    return None


def _search_budget() -> int:
    raw = os.environ.get("QF_MAX_SEARCH")
    return int(raw) if raw else DEFAULT_SEARCH_BUDGET


def search_legendre_witness(a: int, b: int, c: int, budget: int | None = None) -> tuple[int, int, int] | None:
    """Exhaustive search for a primitive zero of ``aX^2+bY^2+cZ^2`` inside the Holzer box.

    Loops over the two coordinates with the smaller bounds and solves for the
    third with an exact integer square root.
    """
    coeffs = (a, b, c)
    bounds = holzer_bounds(a, b, c)
    order = sorted(range(3), key=lambda i: (bounds[i], i))
    i, j, k = order
    if budget is None:
        budget = _search_budget()
    cost = (2 * bounds[i] + 1) * (2 * bounds[j] + 1)
    if cost > budget:
        raise SearchLimitError(
            f"witness search needs {cost} candidates, budget is {budget} (QF_MAX_SEARCH)"
        )

    def signed(n):
        yield 0
        for v in range(1, n + 1):
            yield v
            yield -v

    for v in signed(bounds[j]):
        for u in signed(bounds[i]):
            rest = -(coeffs[i] * u * u + coeffs[j] * v * v)
            if rest % coeffs[k]:
                continue
            w = integer_sqrt_exact(rest // coeffs[k])
            if w is None or w > bounds[k]:
                continue
            if u == v == w == 0:
                continue
            x = [0, 0, 0]
            x[i], x[j], x[k] = u, v, w
            g = gcd(*x)
            return tuple(t // g for t in x)
    return None


@dataclass(frozen=True)
class PointCertificate:
    """Outcome of the rational-point decision.

    ``witness`` is set exactly when ``status == "solvable"``; otherwise
    ``obstruction`` records the definiteness sign or the prime where the
    residue condition fails.
    """

    status: str
    witness: ProjPoint | None = None
    obstruction: dict | None = None
    legendre: tuple[int, int, int] | None = None

    @property
    def solvable(self) -> bool:
        return self.status == "solvable"


def verify_point(f: QuadraticForm, point: Sequence) -> bool:
    """Exact check that ``point`` is a nonzero zero of ``f``; works over every supported field."""
    point = tuple(coerce(x) for x in point)
    return any(x != 0 for x in point) and f(point) == 0


def has_rational_point(f: QuadraticForm) -> PointCertificate:
    """Decide whether the conic ``f = 0`` has a point over Q, with a certificate."""
    if f.field != "QQ":
        raise UnsupportedFieldError(
            f"rational-point decision is implemented over QQ only (form lives in {f.field})",
            pointer="/gram",
        )
    f.require_smooth()
    red = legendre_reduction(f)
    a, b, c = red.a
    obstruction = legendre_obstruction(a, b, c)
    if obstruction is not None:
        return PointCertificate("insolvable", obstruction=obstruction, legendre=red.a)
    x = search_legendre_witness(a, b, c)
    if x is None:
        raise AssertionError(f"Holzer search failed for solvable ({a}, {b}, {c})")
    witness = ProjPoint(normalize(red.pull_back(x)))
    assert verify_point(f, witness.coords), "witness does not lie on the conic"
    return PointCertificate("solvable", witness=witness, legendre=red.a)


# --- parametrization ----------------------------------------------------------


@dataclass(frozen=True)
class Parametrization:
    """A degree-2 map P^1 -> P^2; each component is ``(c_tt, c_tu, c_uu)``."""

    components: tuple[tuple, tuple, tuple]

    def __call__(self, t, u) -> ProjPoint:
        t, u = coerce(t), coerce(u)
        return ProjPoint(tuple(c[0] * t * t + c[1] * t * u + c[2] * u * u for c in self.components))

    def binary_forms(self) -> list[dict[str, object]]:
        return [{"t^2": c[0], "t*u": c[1], "u^2": c[2]} for c in self.components]


def parametrize(f: QuadraticForm, p: Sequence) -> Parametrization:
    """Rational parametrization of the conic through its point ``p``.

    With ``a`` off the tangent at ``p`` and ``b`` on it, ``q = t*a + u*b``
    maps to the second intersection ``B(q,q) p - 2 B(p,q) q`` of the line
    through ``p`` and ``q``. The parameter ``[0:1]`` returns ``p``.
    """
    f.require_smooth()
    p = tuple(coerce(x) for x in p)
    if not verify_point(f, p):
        raise ContractError("point is not on the conic", pointer="/point")
    tangent = f.gram @ p
    a_idx = next(i for i in range(3) if tangent[i] != 0)
    a = tuple(coerce(1 if i == a_idx else 0) for i in range(3))
    b = next(v for v in Matrix([tangent]).nullspace() if not proportional(v, p))
    b_pa = f.bilinear(p, a)
    t2 = tuple(f(a) * pi - 2 * b_pa * ai for pi, ai in zip(p, a))
    tu = tuple(2 * f.bilinear(a, b) * pi - 2 * b_pa * bi for pi, bi in zip(p, b))
    u2 = tuple(f(b) * pi for pi in p)
    return Parametrization(tuple(zip(t2, tu, u2)))


# --- descent ------------------------------------------------------------------


def descend_rational_point(f: QuadraticForm, p: Sequence) -> ProjPoint:
    """Turn a point of the conic over Q(sqrt d) into a point of P^2 over Q.

    A Galois-invariant ``p`` is returned as is. Otherwise the tangent lines
    at ``p`` and its conjugate meet in a single point, which is fixed by
    conjugation and hence rational.
    """
    if f.field != "QQ":
        raise UnsupportedFieldError("descent needs a form defined over QQ", pointer="/gram")
    f.require_smooth()
    p = tuple(coerce(x) for x in p)
    field_of(p)
    if not verify_point(f, p):
        raise ContractError("point is not on the conic", pointer="/point")
    point = ProjPoint(p)
    if point.is_galois_invariant():
        return ProjPoint(point.normal)
    t1 = f.gram @ p
    t2 = tuple(conjugate(x) for x in t1)
    meet = cross(t1, t2)
    assert any(x != 0 for x in meet), "conjugate tangents coincide"
    if not all(is_rational(x) for x in meet):
        d = next(x.d for x in p if isinstance(x, QuadraticElement) and x.b != 0)
        root = QuadraticElement.sqrt(d)
        meet = tuple(x / root for x in meet)
    out = ProjPoint(normalize(meet))
    assert all(is_rational(x) for x in out.coords)
    assert f(out.coords) != 0, "pole of a chord landed on the conic"
    return out
