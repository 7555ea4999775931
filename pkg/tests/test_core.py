from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vspforms.errors import ContractError, FactorizationLimitError
from vspforms.fields import (
    QuadraticElement,
    RationalFunction,
    field_of,
    format_scalar,
    parse_scalar,
)
from vspforms.linalg import Matrix, diagonalize_symmetric
from vspforms.numtheory import (
    factor,
    integer_sqrt_exact,
    is_square_mod_prime,
    rational_squarefree,
    squarefree_decomposition,
)
from vspforms.polys import Form, scheme_length_from_forms
from vspforms.projective import ProjPoint, collinear, cross, intersection, line_through, normalize

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=20)
small_d = st.sampled_from([-1, 2, -2, 3, 5, -7])


# --- numbers and fields ---------------------------------------------------------------


def test_factor_and_squarefree():
    assert factor(360) == {2: 3, 3: 2, 5: 1}
    assert factor(-7) == {7: 1}
    assert squarefree_decomposition(-72) == (-2, 6)
    assert rational_squarefree(Fraction(-8, 9)) == (-2, Fraction(2, 3))


def test_factor_limit():
    p = 1_000_003
    q = 1_000_033
    # product of two primes above the trial-division bound, not a square
    with pytest.raises(FactorizationLimitError):
        factor(p * q * p)
    assert factor(p * p) == {p: 2}


def test_residues_and_sqrt():
    assert is_square_mod_prime(2, 7)
    assert not is_square_mod_prime(3, 7)
    assert integer_sqrt_exact(144) == 12
    assert integer_sqrt_exact(145) is None


@given(fractions, fractions, fractions, fractions, small_d)
def test_quadratic_field_axioms(a, b, c, e, d):
    x = QuadraticElement(a, b, d)
    y = QuadraticElement(c, e, d)
    assert x + y == y + x
    assert x * y == y * x
    assert x * (y + 1) == x * y + x
    if y:
        assert (x / y) * y == x
    assert (x * x.conjugate()).conjugate() == x * x.conjugate()


def test_quadratic_canonical_form():
    r2 = QuadraticElement.sqrt(2)
    assert r2 * r2 == 2
    assert format_scalar(r2) == "(0+1√2)"
    assert format_scalar(QuadraticElement(1, 1, 2) / 2) == "(1+1√2)/2"
    assert QuadraticElement(Fraction(3, 4), 0, 5) == Fraction(3, 4)
    assert format_scalar(parse_scalar("(0+1√-1)") ** 2) == "-1"
    assert parse_scalar("(1+1√2)/2") == QuadraticElement(Fraction(1, 2), Fraction(1, 2), 2)


@given(fractions)
def test_rational_round_trip(x):
    assert parse_scalar(format_scalar(x)) == x


def test_rational_function_arithmetic():
    s, t = RationalFunction.s, RationalFunction.t
    x = (s + 1) / (t - s)
    assert x * (t - s) == s + 1
    assert parse_scalar(format_scalar(x)) == x
    assert field_of([Fraction(1), s]) == "QQ(s,t)"
    assert field_of([QuadraticElement.sqrt(3), 1]) == "QQ(sqrt 3)"
    assert field_of([1, Fraction(1, 2)]) == "QQ"
    assert RationalFunction(Fraction(2, 3)).constant() == Fraction(2, 3)


def test_canonical_rational_strings():
    assert format_scalar(Fraction(-6, 4)) == "-3/2"
    assert format_scalar(Fraction(4, 2)) == "2"


# --- linear algebra ------------------------------------------------------------------

gram_entries = st.fractions(min_value=-9, max_value=9, max_denominator=5)


@st.composite
def symmetric(draw):
    a = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(i, 3):
            a[i][j] = a[j][i] = draw(gram_entries)
    return Matrix(a)


@settings(max_examples=150)
@given(symmetric())
def test_diagonalization_certificate(m):
    d, p = diagonalize_symmetric(m)
    assert d.is_diagonal()
    assert p.T @ m @ p == d
    assert p.det() != 0
    assert d.rank() == m.rank()


@settings(max_examples=100)
@given(symmetric())
def test_adjugate_identities(m):
    adj = m.adjugate()
    assert adj @ m == Matrix.identity(3).scale(m.det())
    assert adj.adjugate() == m.scale(m.det())


def test_diagonalize_examples():
    d, p = diagonalize_symmetric(Matrix.identity(3))
    assert d == Matrix.identity(3) and p == Matrix.identity(3)
    half = Fraction(1, 2)
    m = Matrix([[1, half, 0], [half, 1, 0], [0, 0, 1]])
    d, _ = diagonalize_symmetric(m)
    assert d == Matrix.diagonal([1, Fraction(3, 4), 1])
    xy = Matrix([[0, half, 0], [half, 0, 0], [0, 0, 0]])
    d, p = diagonalize_symmetric(xy)
    assert p.T @ xy @ p == d
    signs = sorted((x > 0) - (x < 0) for x in (d[0, 0], d[1, 1], d[2, 2]))
    assert signs == [-1, 0, 1]


def test_diagonalize_rejects_non_symmetric():
    with pytest.raises(ContractError) as exc:
        diagonalize_symmetric(Matrix([[1, 2, 0], [0, 1, 0], [0, 0, 1]]))
    assert exc.value.pointer == "/gram"


def test_nullspace_solve_inverse():
    m = Matrix([[1, 2, 3], [2, 4, 6]])
    assert m.rank() == 1
    for v in m.nullspace():
        assert all(x == 0 for x in m @ v)
    a = Matrix([[2, 1, 0], [1, 3, 1], [0, 1, 4]])
    assert a @ a.inverse() == Matrix.identity(3)
    x = a.solve((1, 2, 3))
    assert a @ x == tuple(Fraction(v) for v in (1, 2, 3))


def test_matrix_over_quadratic_field():
    r = QuadraticElement.sqrt(2)
    m = Matrix([[1, r], [r, 2]])
    assert m.det() == 0
    assert m.rank() == 1


# --- projective ----------------------------------------------------------------------


def test_normalization():
    assert normalize((Fraction(-2, 3), 4, 0)) == (1, -6, 0)
    assert ProjPoint((2, 4, 6)) == ProjPoint((-1, -2, -3))
    p = ProjPoint((QuadraticElement.sqrt(2), 2, 0))
    assert p.normal[0] == 1
    assert p.normalized().normalized() == p.normalized()
    with pytest.raises(ContractError):
        ProjPoint((0, 0, 0))


def test_lines_and_incidence():
    l = line_through((1, 0, 0), (0, 1, 0))
    assert l == ProjPoint((0, 0, 1))
    assert l.contains((1, 1, 0))
    assert intersection((1, 0, 0), (0, 1, 0)) == ProjPoint((0, 0, 1))
    assert collinear((1, 0, 0), (0, 1, 0), (1, 1, 0))
    assert cross((1, 0, 0), (0, 1, 0)) == (0, 0, 1)


# --- forms and lengths -----------------------------------------------------------------


def test_form_parse_and_print():
    f = Form.parse("x^2 - 3*y*z + z**2/2")
    assert f.degree == 2
    assert f((1, 1, 1)) == Fraction(-3, 2)
    assert str(Form.parse("x*y")) == "x*y"


@pytest.mark.parametrize(
    "gens, expected",
    [
        (["y*z", "x*z", "x*y"], 3),
        (["x^2", "x*y", "y^2"], 3),
        (["x", "y"], 1),
        (["x^2", "x*y", "y^2 - x*z"], 3),
    ],
)
@pytest.mark.parametrize("d", [3, 4])
def test_scheme_length(gens, expected, d):
    assert scheme_length_from_forms([Form.parse(g) for g in gens], d) == expected


def test_scheme_length_rejects_inhomogeneous():
    with pytest.raises(ContractError):
        scheme_length_from_forms([Form.parse("x^2 + y")], 3)
