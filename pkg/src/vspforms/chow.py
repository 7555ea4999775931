"""Intersection numbers on P^1-bundles over P^2 and the two link lattices.

For ``X = P(E)`` with ``E`` of rank 2, the Chow ring is generated by the
tautological class ``xi`` and the pullback ``A`` of a line, subject to
``A^3 = 0``, ``xi^2 = c1*xi*A - c2*A^2`` and ``xi*A^2 = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import sympy

from vspforms.errors import ContractError


@dataclass(frozen=True)
class ChowRing:
    c1: int
    c2: int

    def cls(self, xi=0, a=0) -> "ChowClass":
        return ChowClass(self, {(1, 0): Fraction(xi), (0, 1): Fraction(a)})

    @property
    def xi(self) -> "ChowClass":
        return self.cls(1, 0)

    @property
    def A(self) -> "ChowClass":
        return self.cls(0, 1)

    def one(self) -> "ChowClass":
        return ChowClass(self, {(0, 0): Fraction(1)})


class ChowClass:
    """A polynomial in ``xi`` and ``A`` reduced to the normal form of its ring.

    Normal form: monomials ``xi^i A^j`` with ``i <= 1``, ``j <= 2``,
    total degree at most 3, and the top class written as a multiple of ``xi*A^2``.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: ChowRing, terms: Mapping[tuple[int, int], object]):
        self.ring = ring
        self.terms = _reduce(ring, {k: Fraction(v) for k, v in terms.items()})

    def _check(self, other):
        if isinstance(other, ChowClass) and other.ring != self.ring:
            raise ValueError("classes from different Chow rings")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.one().scale(other)
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return ChowClass(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "ChowClass":
        return ChowClass(self.ring, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for (i1, j1), v1 in self.terms.items():
            for (i2, j2), v2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + v1 * v2
        return ChowClass(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, ChowClass):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def degrees(self) -> set[int]:
        return {i + j for i, j in self.terms}

    def degree_part(self, d: int) -> "ChowClass":
        return ChowClass(self.ring, {k: v for k, v in self.terms.items() if sum(k) == d})

    def integrate(self) -> Fraction:
        """Degree of the 0-dimensional part."""
        return self.terms.get((1, 2), Fraction(0))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j), v in sorted(self.terms.items()):
            mon = "*".join(s for s in ("xi" * i, "A" if j == 1 else f"A^{j}" if j else "") if s)
            parts.append(f"{v}*{mon}" if mon else f"{v}")
        return " + ".join(parts)


def _reduce(ring: ChowRing, terms: dict) -> dict:
    todo = dict(terms)
    out: dict = {}
    while todo:
        (i, j), v = todo.popitem()
        if v == 0 or i + j > 3 or j >= 3:
            continue
        if i >= 2:
            # xi^2 = c1 xi A - c2 A^2
            for key, c in (((i - 1, j + 1), ring.c1), ((i - 2, j + 2), -ring.c2)):
                if c:
                    todo[key] = todo.get(key, 0) + c * v
            continue
        out[(i, j)] = out.get((i, j), 0) + v
    return {k: v for k, v in out.items() if v != 0}


def parse_class(ring: ChowRing, value) -> ChowClass:
    """A degree-1 class from ``[a, b]`` (meaning ``a*xi + b*A``) or text like ``"-2*xi - 4*A"``."""
    if isinstance(value, ChowClass):
        return value
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return ring.cls(Fraction(value[0]), Fraction(value[1]))
    if isinstance(value, str):
        xi, a = sympy.symbols("xi A")
        aliases = {"K": -2 * xi - 4 * a, "Gamma": xi + a, "G": xi + a}
        try:
            expr = sympy.expand(sympy.sympify(value.replace("^", "**"), locals={"xi": xi, "A": a, **aliases}))
        except (sympy.SympifyError, SyntaxError, TypeError) as exc:
            raise ContractError(f"cannot parse class {value!r}", pointer="/classes") from exc
        poly = sympy.Poly(expr, xi, a)
        if poly.total_degree() != 1 or poly.coeff_monomial(1) != 0:
            raise ContractError(f"class {value!r} is not a divisor class", pointer="/classes")
        cx, ca = poly.coeff_monomial(xi), poly.coeff_monomial(a)
        return ring.cls(Fraction(int(cx.p), int(cx.q)), Fraction(int(ca.p), int(ca.q)))
    raise ContractError(f"cannot interpret class {value!r}", pointer="/classes")


def pbundle_intersection(c1: int, c2: int, classes: Sequence) -> Fraction:
    """Triple intersection number of three divisor classes on ``P(E)`` with Chern numbers ``c1, c2``."""
    ring = ChowRing(c1, c2)
    if len(classes) != 3:
        raise ContractError("need exactly three divisor classes", pointer="/classes")
    parsed = [parse_class(ring, c) for c in classes]
    for c in parsed:
        if c.degrees() - {1}:
            raise ContractError("triple intersection takes divisor (degree-1) classes", pointer="/classes")
    return (parsed[0] * parsed[1] * parsed[2]).integrate()


# --- the link from P(E) to the form Y -----------------------------------------


BUNDLE_C1 = -1
BUNDLE_C2 = 3
CONTRACTED_NORMAL_DEGREE = -1


def sarkisov_numerology() -> dict[str, Fraction]:
    """Intersection numbers along the link ``P(E) --> X+ --> Y``.

    On ``P(E)`` with ``c1 = -1, c2 = 3``: ``K = -2xi - 4A`` and the graph
    ``Gamma = xi + A``. The flop keeps ``K^2.Gamma`` and ``K.Gamma^2`` and
    replaces ``Gamma^3`` by that of the contracted plane, whose normal bundle is
    ``O(-1)``. Then ``K_Y^3 = K^3 - 6 K^2.G + 12 K.G^2 - 8 G+^3`` and
    ``H^3 = K_Y^3 / (-8)`` since ``-K_Y = 2H``.
    """
    ring = ChowRing(BUNDLE_C1, BUNDLE_C2)
    k = ring.cls(-2, -4)
    g = ring.cls(1, 1)
    k3 = (k * k * k).integrate()
    k2g = (k * k * g).integrate()
    kg2 = (k * g * g).integrate()
    g3 = (g * g * g).integrate()
    # restriction of the contracted plane to itself is a line class times the normal degree
    g3_plus = Fraction(CONTRACTED_NORMAL_DEGREE) ** 2
    ky3 = k3 - 6 * k2g + 12 * kg2 - 8 * g3_plus
    h3 = ky3 / -8
    return {"K3": k3, "K2G": k2g, "KG2": kg2, "G3": g3, "G3plus": g3_plus, "KY3": ky3, "H3": h3}


@dataclass(frozen=True)
class LinkDivisor:
    """Integer class ``h*q^*H + e*E`` on the blow-up of Y along a line."""

    h: int
    e: int

    def __add__(self, other):
        return LinkDivisor(self.h + other.h, self.e + other.e)

    def __sub__(self, other):
        return LinkDivisor(self.h - other.h, self.e - other.e)

    def __rmul__(self, k: int):
        return LinkDivisor(k * self.h, k * self.e)

    def pushforward(self) -> int:
        """Coefficient of H in ``q_*``; the exceptional divisor is contracted."""
        return self.h

    def __str__(self):
        return f"{self.h}*qH {'+' if self.e >= 0 else '-'} {abs(self.e)}*E"


def quadric_link_divisors() -> dict:
    """Divisor bookkeeping for the projection of Y from a line onto a quadric threefold.

    Inputs: ``q'^*O_Q(1) = q^*H - E``, ``K_Ybar = q^*K_Y + E`` with
    ``K_Y = -2H``, ``K_Q = -3 O_Q(1)``, and ``K_Ybar = q'^*K_Q + Z'``.
    """
    qH = LinkDivisor(1, 0)
    E = LinkDivisor(0, 1)
    hyperplane_pullback = qH - E
    k_y = -2  # in units of H
    k_blowup = k_y * qH + E
    k_quadric_pullback = -3 * hyperplane_pullback
    z_prime = k_blowup - k_quadric_pullback
    q0_prime = hyperplane_pullback - z_prime
    minus_k_y = -k_y
    checks = {
        "Z' = q*H - 2E": z_prime == qH - 2 * E,
        "q_*Z' = H": z_prime.pushforward() == 1,
        "-K_Y = 2 q_*Z'": minus_k_y == 2 * z_prime.pushforward(),
        "Q0' = E": q0_prime == E,
        "-K_Ybar = 3Q0' + 2Z'": (-1) * k_blowup == 3 * q0_prime + 2 * z_prime,
    }
    return {
        "Z_prime": z_prime,
        "Q0_prime": q0_prime,
        "pushforward_Z_prime": z_prime.pushforward(),
        "minus_K_Y": minus_k_y,
        "minus_K_Y_minus_2_pushforward": minus_k_y - 2 * z_prime.pushforward(),
        "checks": checks,
    }
