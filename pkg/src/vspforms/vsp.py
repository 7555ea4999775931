"""Apolar schemes of a smooth conic and the variety of trisecant lines VSP(f).

Elements of Sym^2 V* are written in the fixed monomial basis
(x², y², z², yz, xz, xy). A point ``[l]`` of P(V*) is a linear form; its
Veronese image is ``l²``. W is Sym^2 V* modulo ``f``, described through a basis
of the five linear functionals on Sym^2 V* that vanish at ``f``.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

from vspforms.conics import (
    PointCertificate,
    QuadraticForm,
    descend_rational_point,
    has_rational_point,
    polar_line,
)
from vspforms.errors import ContractError, SearchLimitError
from vspforms.fields import QuadraticElement, coerce, is_rational
from vspforms.linalg import Matrix, diagonalize_symmetric, dot, rank_of
from vspforms.numtheory import rational_squarefree
from vspforms.polys import Form, scheme_length_from_forms
from vspforms.projective import ProjLine, ProjPoint, normalize
from vspforms.schemes import Curvilinear, DoublePlusOne, LengthThreeScheme, Reduced, sym2_product

SYM2_BASIS = ("x^2", "y^2", "z^2", "yz", "xz", "xy")
PLUECKER_PAIRS = tuple(combinations(range(5), 2))

A2_THEOREM = "A^2-cylinder: unconditional for twisted forms of V5 in characteristic 0"
A3_THEOREM = "A^3-cylinder <=> rational special line <=> rational point on V(f) (special lines = dual conic)"


def gram_to_sym2(gram: Matrix) -> tuple:
    g = gram.rows
    return (g[0][0], g[1][1], g[2][2], 2 * g[1][2], 2 * g[0][2], 2 * g[0][1])


def sym2_to_gram(v: Sequence) -> Matrix:
    half = Fraction(1, 2)
    return Matrix(
        [
            [v[0], v[5] * half, v[4] * half],
            [v[5] * half, v[1], v[3] * half],
            [v[4] * half, v[3] * half, v[2]],
        ]
    )


def veronese_square(l: Sequence) -> tuple:
    """Coordinates of ``l²`` for ``l = ax + by + cz``: ``(a², b², c², 2bc, 2ac, 2ab)``."""
    l = tuple(coerce(x) for x in l)
    if all(x == 0 for x in l):
        raise ContractError("the zero form has no Veronese image", pointer="/point")
    return sym2_product(l, l)


# --- apolarity ----------------------------------------------------------------


@dataclass(frozen=True)
class ApolarityResult:
    apolar: bool
    coefficients: tuple | None = None


def apolar_check(f: QuadraticForm, scheme: LengthThreeScheme) -> ApolarityResult:
    """Test whether ``f`` lies in the span of the Veronese image of ``scheme``.

    For a reduced scheme the coefficients are the ``lambda_i`` with
    ``f = sum(lambda_i * l_i**2)``; for the other shapes they are the
    coordinates of ``f`` along the jet columns.
    """
    f.require_smooth()
    columns = scheme.span_columns()
    span = Matrix.from_columns(columns)
    if span.rank() != 3:
        raise ContractError("scheme data is degenerate: Veronese span is not 3-dimensional", pointer="/scheme")
    target = gram_to_sym2(f.gram)
    sol = span.solve(target)
    if sol is None:
        return ApolarityResult(False)
    return ApolarityResult(True, sol)


@dataclass(frozen=True)
class ApolarDecomposition:
    """``f = sum(coefficients[i] * scheme.points[i]**2)`` with the stored representatives."""

    scheme: Reduced
    coefficients: tuple

    def reconstruct(self) -> tuple:
        total = [coerce(0)] * 6
        for lam, p in zip(self.coefficients, self.scheme.points):
            total = [t + lam * v for t, v in zip(total, veronese_square(p.coords))]
        return tuple(total)


def apolar_decompose(f: QuadraticForm) -> ApolarDecomposition:
    """Write ``f`` as a sum of three squares of linear forms by congruence diagonalization.

    With ``P^T M P = D`` the rows of ``P^-1`` are the linear forms and the
    diagonal of ``D`` the coefficients.
    """
    f.require_smooth()
    d, p = diagonalize_symmetric(f.gram)
    forms = p.inverse().rows
    lam = tuple(d[i, i] for i in range(3))
    dec = ApolarDecomposition(Reduced(tuple(ProjPoint(r) for r in forms)), lam)
    assert all(x != 0 for x in lam)
    assert dec.reconstruct() == gram_to_sym2(f.gram)
    return dec


class Stratum(enum.Enum):
    O = "O"
    S2 = "S2"
    C6 = "C6"
    OUTSIDE = "outside_trichotomy"


def stratum_classify(f: QuadraticForm, scheme: LengthThreeScheme) -> Stratum:
    """Orbit label of an apolar scheme.

    Reduced schemes with a point on the dual conic are reported as
    ``Stratum.OUTSIDE`` before apolarity is examined; for a smooth ``f`` such
    a triple is never apolar, and no orbit label is assigned to it.
    """
    f.require_smooth()
    dual = f.dual()
    if isinstance(scheme, Reduced) and any(dual(p.coords) == 0 for p in scheme.points):
        return Stratum.OUTSIDE
    if not apolar_check(f, scheme).apolar:
        raise ContractError("scheme is not apolar to f", pointer="/scheme")
    if isinstance(scheme, Reduced):
        return Stratum.O
    if isinstance(scheme, DoublePlusOne):
        l1, l2 = scheme.point.coords, scheme.other.coords
        if dual(l1) == 0 and polar_line(dual, l1).contains(l2):
            return Stratum.S2
    elif isinstance(scheme, Curvilinear):
        l, m = scheme.point.coords, scheme.tangent
        if dual(l) == 0 and dual.bilinear(l, m) == 0:
            return Stratum.C6
    raise ContractError("apolar scheme does not match any of the strata O, S2, C6", pointer="/scheme")


# --- trisecant lines ----------------------------------------------------------


def w_basis(f: QuadraticForm) -> tuple[tuple, ...]:
    """Default basis of W*: the kernel of evaluation at ``f``, one functional per free column."""
    return tuple(Matrix([gram_to_sym2(f.gram)]).nullspace())


def project(basis: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in basis)


def pluecker(a: Sequence, b: Sequence) -> tuple:
    return tuple(a[i] * b[j] - a[j] * b[i] for i, j in PLUECKER_PAIRS)


def pluecker_relations(p: Sequence) -> list:
    idx = {pair: k for k, pair in enumerate(PLUECKER_PAIRS)}

    def c(i, j):
        return p[idx[(i, j)]]

    return [
        c(i, j) * c(k, l) - c(i, k) * c(j, l) + c(i, l) * c(j, k)
        for i, j, k, l in combinations(range(5), 4)
    ]


@dataclass(frozen=True)
class PlueckerLine:
    """A line of P(W) by its ten Plücker coordinates, relative to ``basis`` of W*."""

    coords: tuple
    basis: tuple[tuple, ...]

    def __post_init__(self):
        coords = tuple(coerce(x) for x in self.coords)
        basis = tuple(tuple(coerce(x) for x in row) for row in self.basis)
        if len(coords) != 10:
            raise ContractError("a line of P^4 has 10 Plücker coordinates", pointer="/line/pluecker")
        if all(x == 0 for x in coords):
            raise ContractError("Plücker coordinates are all zero", pointer="/line/pluecker")
        if any(r != 0 for r in pluecker_relations(coords)):
            raise ContractError("coordinates violate the Plücker relations", pointer="/line/pluecker")
        if len(basis) != 5 or any(len(r) != 6 for r in basis) or rank_of(basis) != 5:
            raise ContractError("W* basis must be five independent functionals on Sym^2", pointer="/line/basis")
        object.__setattr__(self, "coords", normalize(coords))
        object.__setattr__(self, "basis", basis)

    def span(self) -> tuple[tuple, tuple]:
        """Two vectors of W spanning the line."""
        idx = {pair: k for k, pair in enumerate(PLUECKER_PAIRS)}
        rows = []
        for i in range(5):
            row = []
            for j in range(5):
                if i == j:
                    row.append(coerce(0))
                elif i < j:
                    row.append(self.coords[idx[(i, j)]])
                else:
                    row.append(-self.coords[idx[(j, i)]])
            rows.append(row)
        reduced, pivots = Matrix(rows).rref()
        assert len(pivots) == 2
        return reduced.rows[0], reduced.rows[1]


def veronese_images(f: QuadraticForm, scheme: LengthThreeScheme, basis=None) -> list[tuple]:
    basis = tuple(basis) if basis is not None else w_basis(f)
    return [project(basis, col) for col in scheme.span_columns()]


def trisecant_line(f: QuadraticForm, scheme: LengthThreeScheme, basis=None) -> PlueckerLine:
    """The line of P(W) spanned by the projected Veronese image of an apolar scheme."""
    basis = tuple(tuple(coerce(x) for x in r) for r in basis) if basis is not None else w_basis(f)
    f_vec = gram_to_sym2(f.gram)
    if any(dot(r, f_vec) != 0 for r in basis):
        raise ContractError("W* basis does not vanish at f", pointer="/basis")
    if not apolar_check(f, scheme).apolar:
        raise ContractError("scheme is not apolar to f; its Veronese image spans a plane", pointer="/scheme")
    images = veronese_images(f, scheme, basis)
    if rank_of(images) != 2:
        raise ContractError("projected Veronese images are not collinear", pointer="/scheme")
    a = images[0]
    b = next(v for v in images[1:] if rank_of([a, v]) == 2)
    return PlueckerLine(pluecker(a, b), basis)


@dataclass(frozen=True)
class PullbackResult:
    """Three conics on P(V*) cutting out the preimage of a line, and their length count.

    ``length`` is the Hilbert function in degree 3, ``length_d4`` in degree 4;
    they agree for every 0-dimensional scheme of length at most 3.
    """

    conics: tuple[Form, Form, Form]
    length: int
    length_d4: int

    @property
    def stable(self) -> bool:
        return self.length == self.length_d4

    @property
    def trisecant(self) -> bool:
        return self.length == 3 and self.length_d4 == 3


def _functional_to_conic(c: Sequence) -> Form:
    form = Form(
        {
            (2, 0, 0): c[0],
            (0, 2, 0): c[1],
            (0, 0, 2): c[2],
            (0, 1, 1): 2 * c[3],
            (1, 0, 1): 2 * c[4],
            (1, 1, 0): 2 * c[5],
        }
    )
    return form.primitive() if all(is_rational(x) for x in form.terms.values()) else form


def veronese_pullback(f: QuadraticForm, line: PlueckerLine) -> PullbackResult:
    """Pull the plane spanned by ``f`` and ``line`` back through the Veronese map."""
    f_vec = gram_to_sym2(f.gram)
    if any(dot(r, f_vec) != 0 for r in line.basis):
        raise ContractError("line is given in a W* basis that does not vanish at f", pointer="/line/basis")
    b = Matrix(line.basis)
    lifts = []
    for w in line.span():
        u = b.solve(w)
        if u is None:
            raise ContractError("line does not lift to Sym^2", pointer="/line")
        lifts.append(u)
    plane = Matrix([f_vec, *lifts])
    if plane.rank() != 3:
        raise ContractError("degenerate line: plane through f is not 2-dimensional", pointer="/line")
    functionals = plane.nullspace()
    conics = tuple(_functional_to_conic(c) for c in functionals)
    return PullbackResult(
        conics,
        scheme_length_from_forms(conics, 3),
        scheme_length_from_forms(conics, 4),
    )


def random_line(f: QuadraticForm, seed: int, basis=None, bound: int = 9) -> PlueckerLine:
    """A line through two random rational points of P(W) (generally not trisecant)."""
    basis = tuple(basis) if basis is not None else w_basis(f)
    rng = random.Random(seed)
    while True:
        a = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(5))
        b = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(5))
        if rank_of([a, b]) == 2:
            return PlueckerLine(pluecker(a, b), basis)


# --- lines of VSP(f) ------------------------------------------------------------


def is_special_line(f: QuadraticForm, x: Sequence) -> bool:
    """``x`` labels a special line iff it lies on the dual conic."""
    f.require_smooth()
    return f.dual()(tuple(coerce(c) for c in x)) == 0


def incidence_locus(f: QuadraticForm, x: Sequence) -> ProjLine:
    """Labels of the lines meeting the line labelled ``x``: the polar of ``x`` for the dual conic."""
    f.require_smooth()
    return polar_line(f.dual(), x)


@dataclass(frozen=True)
class CylinderReport:
    """Existence of A^2 and A^3 cylinders in VSP(f).

    ``status`` is ``"decided"`` or ``"unsupported"``; in the latter case
    ``a3`` is ``None``. ``witness`` is a special line (a zero of the dual
    conic), ``conic_point`` the rational point of ``f`` it came from.
    """

    a2: bool
    a3: bool | None
    status: str
    a2_reference: str = A2_THEOREM
    a3_reference: str = A3_THEOREM
    witness: ProjPoint | None = None
    conic_point: ProjPoint | None = None
    certificate: PointCertificate | None = None
    witness_verified: bool | None = None
    note: str = ""


def decide_cylinders(f: QuadraticForm, witness: Sequence | None = None) -> CylinderReport:
    f.require_smooth()
    if f.field != "QQ":
        if witness is not None:
            x = ProjPoint(witness)
            if is_special_line(f, x.coords):
                return CylinderReport(
                    a2=True, a3=True, status="decided", witness=x, witness_verified=True,
                    note="supplied special line verified exactly",
                )
            return CylinderReport(
                a2=True, a3=None, status="unsupported", witness_verified=False,
                note="decision unsupported over this field; supplied witness is not on the dual conic",
            )
        return CylinderReport(
            a2=True, a3=None, status="unsupported",
            note="decision unsupported over this field; no witness known",
        )
    cert = has_rational_point(f)
    if not cert.solvable:
        return CylinderReport(a2=True, a3=False, status="decided", certificate=cert)
    p = cert.witness
    x = ProjPoint(normalize(f.gram @ p.coords))
    note = ""
    if witness is not None:
        ok = is_special_line(f, witness)
        note = "supplied special line verified exactly" if ok else "supplied witness is not on the dual conic"
    return CylinderReport(
        a2=True, a3=True, status="decided", witness=x, conic_point=p, certificate=cert,
        witness_verified=is_special_line(f, x.coords), note=note,
    )


HILBERT_SEARCH_CANDIDATES = 1000
HILBERT_D_BOUND = 50


def _extension_degrees() -> list[int]:
    from vspforms.numtheory import is_squarefree

    out = [-1]
    for n in range(2, HILBERT_D_BOUND + 1):
        if is_squarefree(n):
            out.extend([n, -n])
    return out


def _candidate_pairs(limit: int):
    n, count = 1, 0
    while True:
        ring = [
            (a, b)
            for a in range(-n, n + 1)
            for b in range(-n, n + 1)
            if max(abs(a), abs(b)) == n and gcd(a, b) == 1 and (a > 0 or (a == 0 and b > 0))
        ]
        for pair in sorted(ring, key=lambda ab: (abs(ab[0]) + abs(ab[1]), -ab[0], -ab[1])):
            yield pair
            count += 1
            if count >= limit:
                return
        n += 1


def hilbert_rational_point(f: QuadraticForm) -> ProjPoint:
    """A rational point of P(V*), the model of the Hilbert scheme of lines of VSP(f).

    A rational point of the dual conic (a special line) is returned when one
    exists. Otherwise a point of the dual conic over some Q(sqrt d) is found
    on its diagonal model and descended through the conjugate tangents.
    """
    f.require_smooth()
    dual = f.dual()
    cert = has_rational_point(dual)
    if cert.solvable:
        return cert.witness
    d_mat, p_mat = diagonalize_symmetric(dual.gram)
    lam = [d_mat[i, i] for i in range(3)]
    found: dict[int, tuple] = {}
    for w1, w3 in _candidate_pairs(HILBERT_SEARCH_CANDIDATES):
        r = -(lam[0] * w1 * w1 + lam[2] * w3 * w3) / lam[1]
        if r == 0:
            continue
        a, s = rational_squarefree(r)
        found.setdefault(a, (w1, s, w3))
    for d in _extension_degrees():
        if d in found:
            w1, s, w3 = found[d]
            w = (Fraction(w1), s * QuadraticElement.sqrt(d), Fraction(w3))
            point = p_mat @ w
            assert dual(point) == 0
            return descend_rational_point(dual, point)
    raise SearchLimitError("no quadratic point of the dual conic found within the search bound")
