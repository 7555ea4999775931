import random
from fractions import Fraction

import pytest

from vspforms.conics import QuadraticForm, has_rational_point
from vspforms.errors import ContractError
from vspforms.fields import RationalFunction
from vspforms.linalg import Matrix, rank_of
from vspforms.projective import ProjPoint
from vspforms.schemes import Curvilinear, DoublePlusOne, Reduced, vanishes_on
from vspforms.vsp import (
    PlueckerLine,
    Stratum,
    apolar_check,
    apolar_decompose,
    decide_cylinders,
    gram_to_sym2,
    hilbert_rational_point,
    incidence_locus,
    is_special_line,
    pluecker_relations,
    random_line,
    stratum_classify,
    sym2_to_gram,
    trisecant_line,
    veronese_images,
    veronese_pullback,
    veronese_square,
)

SPLIT = QuadraticForm.diagonal(1, 1, -1)
SUM = QuadraticForm.diagonal(1, 1, 1)
COORD = Reduced(((1, 0, 0), (0, 1, 0), (0, 0, 1)))
S2_EXAMPLE = DoublePlusOne((1, 0, 1), (1, 0, -1), (0, 1, 0))
C6_EXAMPLE = Curvilinear((1, 0, 1), (0, 1, 0), (Fraction(1, 2), 0, Fraction(-1, 2)))


@pytest.mark.parametrize(
    "l, v",
    [((1, 0, 0), (1, 0, 0, 0, 0, 0)), ((1, 1, 0), (1, 1, 0, 0, 0, 2)), ((1, 1, 1), (1, 1, 1, 2, 2, 2))],
)
def test_veronese_square(l, v):
    assert veronese_square(l) == v


def test_sym2_gram_round_trip():
    g = QuadraticForm.parse("x^2 + 3*x*y - 2*y*z + 5*z^2").gram
    v = gram_to_sym2(g)
    assert v == (1, 0, 5, -2, 0, 3)
    assert sym2_to_gram(v) == g


def test_apolar_check_examples():
    res = apolar_check(SUM, COORD)
    assert res.apolar and res.coefficients == (1, 1, 1)
    res = apolar_check(SPLIT, COORD)
    assert res.apolar and res.coefficients == (1, 1, -1)
    assert not apolar_check(SUM, Reduced(((1, 0, 0), (0, 1, 0), (1, 1, 0)))).apolar


def test_apolar_decompose_examples():
    dec = apolar_decompose(SPLIT)
    assert set(dec.scheme.points) == set(COORD.points)
    assert sorted(dec.coefficients) == [-1, 1, 1]
    dec = apolar_decompose(QuadraticForm.parse("x^2 + x*y + y^2 + z^2"))
    assert dec.coefficients == (1, Fraction(3, 4), 1)
    assert dec.scheme.points[0] == ProjPoint((2, 1, 0))
    assert dec.reconstruct() == gram_to_sym2(QuadraticForm.parse("x^2 + x*y + y^2 + z^2").gram)


def test_apolar_decompose_function_field():
    s, t = RationalFunction.s, RationalFunction.t
    dec = apolar_decompose(QuadraticForm.diagonal(1, s, t))
    assert dec.coefficients == (1, s, t)
    assert dec.scheme == COORD


def test_strata_examples():
    assert stratum_classify(SPLIT, COORD) is Stratum.O
    assert stratum_classify(SPLIT, S2_EXAMPLE) is Stratum.S2
    assert stratum_classify(SPLIT, C6_EXAMPLE) is Stratum.C6
    outside = Reduced(((1, 0, 1), (0, 1, 0), (1, 0, -1)))
    assert stratum_classify(SPLIT, outside) is Stratum.OUTSIDE


def test_non_apolar_nonreduced_rejected():
    z = DoublePlusOne((1, 0, 0), (0, 1, 0), (0, 0, 1))
    with pytest.raises(ContractError):
        stratum_classify(SPLIT, z)


def test_scheme_invariants():
    with pytest.raises(ContractError):
        Reduced(((1, 0, 0), (2, 0, 0), (0, 0, 1)))
    with pytest.raises(ContractError):
        DoublePlusOne((1, 0, 0), (1, 0, 0), (0, 1, 0))
    with pytest.raises(ContractError):
        DoublePlusOne((1, 0, 0), (0, 1, 0), (1, 0, 0))


def test_trisecant_example():
    line = trisecant_line(SUM, COORD)
    imgs = veronese_images(SUM, COORD, line.basis)
    assert rank_of(imgs) == 2
    res = veronese_pullback(SUM, line)
    assert sorted(str(c) for c in res.conics) == ["x*y", "x*z", "y*z"]
    assert res.length == 3 and res.length_d4 == 3 and res.trisecant


def test_trisecant_of_split_form():
    line = trisecant_line(SPLIT, COORD)
    assert all(r == 0 for r in pluecker_relations(line.coords))
    assert veronese_pullback(SPLIT, line).trisecant


def test_trisecant_rejects_non_apolar():
    with pytest.raises(ContractError):
        trisecant_line(SUM, Reduced(((1, 0, 0), (0, 1, 0), (1, 1, 0))))


def test_trisecant_for_nonreduced_strata():
    for z in (S2_EXAMPLE, C6_EXAMPLE):
        res = veronese_pullback(SPLIT, trisecant_line(SPLIT, z))
        assert res.length == 3 and res.length_d4 == 3
        assert all(vanishes_on(c, z) for c in res.conics)


def test_random_line_not_trisecant():
    seen = set()
    for seed in range(5):
        res = veronese_pullback(SUM, random_line(SUM, seed))
        assert res.length != 3 or res.length_d4 != 3
        seen.add((res.length, res.length_d4))
    assert seen


def test_random_line_deterministic():
    assert random_line(SUM, 7) == random_line(SUM, 7)


def test_pluecker_validation():
    line = trisecant_line(SUM, COORD)
    bad = list(line.coords)
    bad[0], bad[9] = 1, 1  # p01 p23 term breaks one relation in general
    with pytest.raises(ContractError):
        PlueckerLine(tuple(bad), line.basis)
    with pytest.raises(ContractError):
        PlueckerLine((0,) * 10, line.basis)


def test_special_lines():
    assert is_special_line(SPLIT, (1, 0, 1))
    assert not is_special_line(SPLIT, (1, 0, 0))
    assert not is_special_line(SUM, (0, 0, 1))


def test_incidence_examples():
    assert incidence_locus(SUM, (1, 0, 0)) == ProjPoint((1, 0, 0))
    l = incidence_locus(SPLIT, (1, 0, 1))
    assert l == ProjPoint((-1, 0, 1)) and l.contains((1, 0, 1))
    l = incidence_locus(SUM, (1, 1, 1))
    assert l == ProjPoint((1, 1, 1)) and not l.contains((1, 1, 1))


def test_cylinders():
    rep = decide_cylinders(SPLIT)
    assert rep.a2 and rep.a3 and rep.witness_verified
    assert rep.witness == ProjPoint((1, 0, -1))
    assert SPLIT.dual()(rep.witness.coords) == 0
    rep = decide_cylinders(SUM)
    assert rep.a2 and rep.a3 is False
    assert rep.certificate.obstruction["kind"] == "definite"
    rep = decide_cylinders(QuadraticForm.diagonal(1, 2, -3))
    assert rep.a3 and rep.conic_point == ProjPoint((1, 1, 1))


def test_cylinders_function_field():
    s, t = RationalFunction.s, RationalFunction.t
    f = QuadraticForm.diagonal(1, s, t)
    rep = decide_cylinders(f)
    assert rep.status == "unsupported" and rep.a3 is None
    assert rep.note == "decision unsupported over this field; no witness known"
    rep = decide_cylinders(f, (1, 1, 1))
    assert rep.status == "unsupported" and rep.witness_verified is False


def test_cylinders_consistent_with_conic_decision():
    rng = random.Random(11)
    for _ in range(30):
        f = QuadraticForm.diagonal(*(rng.choice([-1, 1]) * rng.randint(1, 15) for _ in range(3)))
        assert decide_cylinders(f).a3 == has_rational_point(f).solvable


def test_hilbert_points():
    assert hilbert_rational_point(SPLIT) == ProjPoint((1, 0, 1))
    x = hilbert_rational_point(SUM)
    assert x == ProjPoint((0, 0, 1))
    x = hilbert_rational_point(QuadraticForm.diagonal(-3, -3, -1))
    assert x.is_galois_invariant()


def test_scheme_transform_preserves_kind():
    g = Matrix([[1, 2, 0], [0, 1, 0], [1, 0, 1]])
    assert isinstance(S2_EXAMPLE.transform(g), DoublePlusOne)
    assert isinstance(C6_EXAMPLE.transform(g), Curvilinear)
