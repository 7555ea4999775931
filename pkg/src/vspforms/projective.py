"""Points and lines of the projective plane with exact coordinates."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from vspforms.errors import ContractError
from vspforms.fields import coerce, conjugate, field_of, is_rational, as_fraction


def normalize(vec: Sequence) -> tuple:
    """Projective normal form.

    Rational vectors become primitive integer vectors with positive leading
    nonzero entry; anything else is scaled so the first nonzero entry is 1.
    """
    vec = tuple(coerce(x) for x in vec)
    if all(x == 0 for x in vec):
        raise ContractError("the zero vector is not a projective point")
    if all(is_rational(x) for x in vec):
        fr = [as_fraction(x) for x in vec]
        den = lcm(*(x.denominator for x in fr))
        ints = [x.numerator * (den // x.denominator) for x in fr]
        g = gcd(*ints)
        lead = next(x for x in ints if x != 0)
        g = g if lead > 0 else -g
        return tuple(Fraction(x // g) for x in ints)
    lead = next(x for x in vec if x != 0)
    inv = 1 / lead
    return tuple(coerce(x * inv) for x in vec)


def cross(u: Sequence, v: Sequence) -> tuple:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def proportional(u: Sequence, v: Sequence) -> bool:
    """True when ``u`` and ``v`` span at most a line (zero vectors count as proportional)."""
    n = len(u)
    return all(u[i] * v[j] == u[j] * v[i] for i in range(n) for j in range(i + 1, n))


class ProjPoint:
    """A point of P^n given by homogeneous coordinates.

    The coordinates are kept exactly as supplied (so scalar multipliers
    attached to them keep their meaning); equality and hashing go through the
    normal form.
    """

    __slots__ = ("coords", "_normal")

    def __init__(self, coords: Sequence):
        coords = tuple(coerce(x) for x in coords)
        self._normal = normalize(coords)
        self.coords = coords

    @property
    def normal(self) -> tuple:
        return self._normal

    def normalized(self) -> "ProjPoint":
        return type(self)(self._normal)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self._normal == other._normal

    def __hash__(self):
        return hash(self._normal)

    def __repr__(self):
        return f"{type(self).__name__}[" + ":".join(str(x) for x in self._normal) + "]"

    def field(self) -> str:
        return field_of(self.coords)

    def conjugate(self) -> "ProjPoint":
        return type(self)(tuple(conjugate(x) for x in self.coords))

    def is_galois_invariant(self) -> bool:
        return proportional(self.coords, self.conjugate().coords)


class ProjLine(ProjPoint):
    """A line of P^2, stored by its coefficient vector (a point of the dual plane)."""

    def contains(self, point: Sequence) -> bool:
        return sum((a * b for a, b in zip(self.coords, point)), coerce(0)) == 0


def line_through(p: Sequence, q: Sequence) -> ProjLine:
    c = cross(p, q)
    if all(x == 0 for x in c):
        raise ContractError("points coincide; no unique line through them")
    return ProjLine(normalize(c))


def intersection(l1: Sequence, l2: Sequence) -> ProjPoint:
    c = cross(l1, l2)
    if all(x == 0 for x in c):
        raise ContractError("lines coincide; no unique intersection")
    return ProjPoint(c)


def collinear(p: Sequence, q: Sequence, r: Sequence) -> bool:
    from vspforms.linalg import Matrix

    return Matrix([p, q, r]).det() == 0
