"""Base schemes of standard quadratic involutions of P^2.

Type I: three non-collinear points. Type II: a simple point plus a double
point. Type III: a curvilinear triple point. In Type I the graph of the
involution is the blow-up of the three points, whose Picard lattice has basis
(H, e1, e2, e3) with H² = 1, ei² = -1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from vspforms.errors import ContractError
from vspforms.linalg import Matrix
from vspforms.polys import Form, scheme_length_from_forms
from vspforms.projective import ProjPoint, collinear, line_through
from vspforms.schemes import Curvilinear, DoublePlusOne, LengthThreeScheme, Reduced, vanishes_on


class InvolutionType(enum.Enum):
    I = "I"
    II = "II"
    III = "III"


@dataclass(frozen=True)
class InvolutionBaseScheme:
    scheme: LengthThreeScheme
    generators: tuple[Form, ...] | None = None

    def __post_init__(self):
        if self.generators is None:
            return
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        lengths = [scheme_length_from_forms(gens, d) for d in (3, 4)]
        if lengths != [3, 3]:
            raise ContractError(
                f"generators cut out a scheme with Hilbert function {lengths} in degrees 3, 4; expected 3",
                pointer="/generators",
            )
        for g in gens:
            if not vanishes_on(g, self.scheme):
                raise ContractError(f"generator {g} does not vanish on the scheme", pointer="/generators")


def classify_base_scheme(base: InvolutionBaseScheme | LengthThreeScheme) -> InvolutionType:
    if not isinstance(base, InvolutionBaseScheme):
        base = InvolutionBaseScheme(base)
    z = base.scheme
    if isinstance(z, Reduced):
        if collinear(*(p.coords for p in z.points)):
            raise ContractError("not a quadratic-involution base scheme: the points are collinear", pointer="/scheme")
        return InvolutionType.I
    if isinstance(z, DoublePlusOne):
        return InvolutionType.II
    if isinstance(z, Curvilinear):
        return InvolutionType.III
    raise ContractError(f"unknown scheme {z!r}", pointer="/scheme")


# --- Type I lattice -----------------------------------------------------------------


LABELS = ("H", "e1", "e2", "e3")


@dataclass(frozen=True)
class SurfaceLattice:
    """Picard lattice of P^2 blown up at three points."""

    gram: tuple[tuple[int, ...], ...] = ((1, 0, 0, 0), (0, -1, 0, 0), (0, 0, -1, 0), (0, 0, 0, -1))

    def pair(self, u: Sequence[int], v: Sequence[int]) -> int:
        return sum(u[i] * self.gram[i][j] * v[j] for i in range(4) for j in range(4))


def _add(*vs):
    return tuple(sum(c) for c in zip(*vs))


def _scale(k, v):
    return tuple(k * x for x in v)


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    lhs: tuple | int
    rhs: tuple | int

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class TypeILatticeReport:
    classes: dict
    checks: tuple[IdentityCheck, ...] = field(default_factory=tuple)

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks)


def typeI_lattice_verify(p1: Sequence, p2: Sequence, p3: Sequence) -> TypeILatticeReport:
    """Check the canonical-class and pullback identities on the blow-up of three points.

    The proper transform of the line through ``p_j, p_k`` is
    ``H - sum(e_q)`` over the points ``q`` lying on it; ``e'_1`` is the line
    through ``p2, p3`` and so on cyclically.
    """
    pts = [ProjPoint(p) for p in (p1, p2, p3)]
    if collinear(*(p.coords for p in pts)):
        raise ContractError("points are collinear", pointer="/points")
    lat = SurfaceLattice()
    h = (1, 0, 0, 0)
    e_i = [(0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    e = _add(*e_i)
    e_prime_i = []
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        line = line_through(pts[j].coords, pts[k].coords)
        on_line = [q for q in range(3) if line.contains(pts[q].coords)]
        e_prime_i.append(_add(h, *(_scale(-1, e_i[q]) for q in on_line)))
    e_prime = _add(*e_prime_i)
    k_cls = _add(_scale(-3, h), *e_i)
    checks = [
        IdentityCheck("e' = 3H - 2e", e_prime, _add(_scale(3, h), _scale(-2, e))),
        IdentityCheck("K = -(e + e')", k_cls, _scale(-1, _add(e, e_prime))),
        IdentityCheck("2e + e' = 3H", _add(_scale(2, e), e_prime), _scale(3, h)),
        IdentityCheck("e + 2e' = 3(2H - e)", _add(e, _scale(2, e_prime)), _scale(3, _add(_scale(2, h), _scale(-1, e)))),
        *(IdentityCheck(f"e'{i + 1}^2 = -1", lat.pair(v, v), -1) for i, v in enumerate(e_prime_i)),
        IdentityCheck("K^2 = 6", lat.pair(k_cls, k_cls), 6),
        IdentityCheck("e.e' = 6", lat.pair(e, e_prime), 6),
    ]
    classes = {
        "H": h,
        "e": e,
        "e'": e_prime,
        "e'1": e_prime_i[0],
        "e'2": e_prime_i[1],
        "e'3": e_prime_i[2],
        "K": k_cls,
    }
    return TypeILatticeReport(classes, tuple(checks))


def involution_length(generators: Sequence[Form], degree: int = 3) -> dict:
    return {
        "length": scheme_length_from_forms(generators, degree),
        "length_next": scheme_length_from_forms(generators, degree + 1),
    }
