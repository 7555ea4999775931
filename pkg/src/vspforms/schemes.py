"""Length-3 subschemes of the projective plane as structured data.

Three shapes occur: three distinct points, a point with a tangent direction
plus a second point, and a curvilinear triple point given by a 2-jet
``l + eps*m + eps^2*n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from vspforms.errors import ContractError
from vspforms.fields import coerce
from vspforms.linalg import Matrix
from vspforms.projective import ProjPoint, proportional


def sym2_product(u: Sequence, v: Sequence) -> tuple:
    """Coordinates of the product of two linear forms in the basis (x², y², z², yz, xz, xy)."""
    return (
        u[0] * v[0],
        u[1] * v[1],
        u[2] * v[2],
        u[1] * v[2] + u[2] * v[1],
        u[0] * v[2] + u[2] * v[0],
        u[0] * v[1] + u[1] * v[0],
    )


def _as_point(p) -> ProjPoint:
    return p if isinstance(p, ProjPoint) else ProjPoint(p)


@dataclass(frozen=True)
class Reduced:
    """Three distinct points."""

    points: tuple[ProjPoint, ProjPoint, ProjPoint]

    def __post_init__(self):
        pts = tuple(_as_point(p) for p in self.points)
        if len(pts) != 3:
            raise ContractError("a reduced scheme needs exactly three points", pointer="/scheme/points")
        if len(set(pts)) != 3:
            raise ContractError("the three points must be distinct", pointer="/scheme/points")
        object.__setattr__(self, "points", pts)

    kind = "reduced"

    @property
    def support(self) -> tuple[ProjPoint, ...]:
        return self.points

    def span_columns(self) -> list[tuple]:
        return [sym2_product(p.coords, p.coords) for p in self.points]

    def jets(self) -> list[tuple[list, int]]:
        return [([[c] for c in p.coords], 1) for p in self.points]

    def transform(self, g: Matrix) -> "Reduced":
        return Reduced(tuple(ProjPoint(g @ p.coords) for p in self.points))


@dataclass(frozen=True)
class DoublePlusOne:
    """A double point at ``point`` pointing towards ``direction``, plus a simple point ``other``."""

    point: ProjPoint
    direction: ProjPoint
    other: ProjPoint

    def __post_init__(self):
        for name in ("point", "direction", "other"):
            object.__setattr__(self, name, _as_point(getattr(self, name)))
        if self.direction == self.point:
            raise ContractError(
                "tangent direction must differ from the double point", pointer="/scheme/direction"
            )
        if self.other == self.point:
            raise ContractError("the simple point must differ from the double point", pointer="/scheme/other")

    kind = "double_plus_one"

    @property
    def support(self) -> tuple[ProjPoint, ...]:
        return (self.point, self.other)

    def span_columns(self) -> list[tuple]:
        p, m, q = self.point.coords, self.direction.coords, self.other.coords
        return [sym2_product(p, p), sym2_product(p, m), sym2_product(q, q)]

    def jets(self) -> list[tuple[list, int]]:
        p, m = self.point.coords, self.direction.coords
        return [([[a, b] for a, b in zip(p, m)], 2), ([[c] for c in self.other.coords], 1)]

    def transform(self, g: Matrix) -> "DoublePlusOne":
        return DoublePlusOne(
            ProjPoint(g @ self.point.coords),
            ProjPoint(g @ self.direction.coords),
            ProjPoint(g @ self.other.coords),
        )


@dataclass(frozen=True)
class Curvilinear:
    """A curvilinear triple point: the 2-jet ``point + eps*tangent + eps^2*second_order``.

    ``tangent`` and ``second_order`` are raw vectors (not projective points);
    they only matter modulo ``point`` and modulo reparametrization.
    """

    point: ProjPoint
    tangent: tuple
    second_order: tuple = (0, 0, 0)

    def __post_init__(self):
        object.__setattr__(self, "point", _as_point(self.point))
        tangent = tuple(coerce(x) for x in self.tangent)
        second = tuple(coerce(x) for x in self.second_order)
        if len(tangent) != 3 or len(second) != 3:
            raise ContractError("jet vectors need three coordinates", pointer="/scheme")
        if proportional(tangent, self.point.coords):
            raise ContractError(
                "tangent vector must not be proportional to the support point", pointer="/scheme/tangent"
            )
        object.__setattr__(self, "tangent", tangent)
        object.__setattr__(self, "second_order", second)

    kind = "curvilinear"

    @property
    def support(self) -> tuple[ProjPoint, ...]:
        return (self.point,)

    def span_columns(self) -> list[tuple]:
        p, m, n = self.point.coords, self.tangent, self.second_order
        mm = sym2_product(m, m)
        pn = sym2_product(p, n)
        return [sym2_product(p, p), sym2_product(p, m), tuple(a + 2 * b for a, b in zip(mm, pn))]

    def jets(self) -> list[tuple[list, int]]:
        p, m, n = self.point.coords, self.tangent, self.second_order
        return [([[a, b, c] for a, b, c in zip(p, m, n)], 3)]

    def transform(self, g: Matrix) -> "Curvilinear":
        return Curvilinear(ProjPoint(g @ self.point.coords), g @ self.tangent, g @ self.second_order)


LengthThreeScheme = Union[Reduced, DoublePlusOne, Curvilinear]


def vanishes_on(form, scheme: LengthThreeScheme) -> bool:
    """True when the ternary ``form`` lies in the ideal of ``scheme``.

    Checked by evaluating the form along each jet modulo the jet order.
    """
    for series, order in scheme.jets():
        if any(c != 0 for c in form.evaluate_series(series, order)):
            return False
    return True
