import pytest
import sympy
from hypothesis import given, strategies as st

from sigchev.diffpoly import (
    DiffPolyRing,
    LevelPresentation,
    benign_quadratic,
    limit_degree,
    reinterpret_power,
    ritt_reduce,
)
from sigchev.errors import ConstantPolynomial, NotStabilized
from sigchev.fieldtower import QQ, make_morphism

Q_SQRT2 = QQ.extend_algebraic("r2", [-2, 0, 1])
R = DiffPolyRing(QQ, ["x"])
X0, X1, X2 = R.x("x", 0), R.x("x", 1), R.x("x", 2)


def to_sympy(p, ring):
    syms = {}
    expr = sympy.Integer(0)
    for mono, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for v, e in mono:
            name = f"v{v}"
            syms.setdefault(name, sympy.Symbol(name))
            term *= syms[name] ** e
        expr += term
    return expr


def in_sympy_ideal(p, gens, nvars):
    syms = sympy.symbols(f"v0:{nvars}")
    G = sympy.groebner([to_sympy(g, None) for g in gens], *syms, order="lex")
    return G.reduce(to_sympy(p, None))[1] == 0


# ---------------------------------------------------------------- shifting

def test_shift_with_fixed_coefficient():
    Fu = QQ.extend_transcendental("u")
    Ru = DiffPolyRing(Fu, ["x"])
    u = Ru.const(Fu.gen())
    assert Ru.sigma_shift(u * Ru.x("x")) == u * Ru.x("x", 1)


def test_double_shift_of_product():
    R2 = DiffPolyRing(QQ, ["x1", "x2"])
    p = R2.x("x1") * R2.x("x2")
    assert R2.sigma_shift(p, 2) == R2.x("x1", 2) * R2.x("x2", 2)


def test_shift_applies_sigma_to_coefficients():
    r = Q_SQRT2.gen()
    Rc = DiffPolyRing(Q_SQRT2, ["x"], make_morphism(Q_SQRT2, Q_SQRT2, [-r]))
    p = Rc.const(r) * Rc.x("x") + Rc.x("x", 1) ** 2
    assert Rc.sigma_shift(p) == Rc.const(-r) * Rc.x("x", 1) + Rc.x("x", 2) ** 2
    assert Rc.sigma_shift(p, 2) == Rc.sigma_shift(Rc.sigma_shift(p))


# ---------------------------------------------------------------- leader / initial

def test_leader_of_benign_quadratic():
    leader, initial, degree = R.leader_initial(X1**2 - X0)
    assert leader == R.rank(0, 1) and initial == R.one() and degree == 2


def test_leader_with_nontrivial_initial():
    Fu = QQ.extend_transcendental("u")
    Ru = DiffPolyRing(Fu, ["x"])
    u = Ru.const(Fu.gen())
    leader, initial, _ = Ru.leader_initial(u * Ru.x("x", 1) ** 3 + Ru.x("x") * Ru.x("x", 1))
    assert leader == Ru.rank(0, 1) and initial == u


def test_constant_has_no_leader():
    with pytest.raises(ConstantPolynomial):
        R.leader_initial(R.const(5))


# ---------------------------------------------------------------- Ritt reduction

def test_shifted_minpoly_reduces_to_zero():
    res = ritt_reduce(R, X1**2 - 2, [X0**2 - 2])
    assert res.remainder.is_zero()
    assert res.certificate == R.one()
    # oracle: s(x)^2 - 2 lies in the ideal generated by x^2 - 2 and its shift
    assert in_sympy_ideal(X1**2 - 2, [X0**2 - 2, X1**2 - 2], 2)


def test_lower_variable_is_already_reduced():
    res = ritt_reduce(R, X0, [X1])
    assert res.remainder == X0 and res.certificate == R.one()


def test_benign_shift_reduces_to_zero():
    f = X1**2 - X0
    res = ritt_reduce(R, R.sigma_shift(f, 2), [f])
    assert res.remainder.is_zero()


polys = st.lists(
    st.tuples(st.integers(-3, 3), st.integers(0, 2), st.integers(0, 2), st.integers(0, 3)),
    min_size=1, max_size=4,
)


def build(terms):
    p = R.zero()
    for c, a, b, e in terms:
        p = p + R.const(QQ(c)) * X0**a * X1**b * X2**e
    return p


@given(polys, st.sampled_from([[X1**2 - X0], [X0 * X1 - 1], [X1 - X0**2], [X0**2 - 2]]))
def test_ritt_certificate_sound(terms, basis):
    p = build(terms)
    res = ritt_reduce(R, p, basis)
    assert res.verify(R, p, basis)
    # remainder is reduced with respect to every shift of the basis
    for b in basis:
        lead, _, deg = R.leader_initial(b)
        for j in range(3):
            v = lead + j * R.n
            assert res.remainder.degree_in(v) < deg or v > R.rank(0, 2) + 1
    # independent oracle: certificate*p - remainder in the ideal of shifts
    shifts = [R.sigma_shift(b, j) if j else b for b in basis for j in range(3)]
    assert in_sympy_ideal(res.certificate * p - res.remainder, shifts, 4)


@given(polys)
def test_ritt_reduced_input_is_fixed(terms):
    p = build(terms)
    basis = [R.x("x", 3) ** 2 - 1]  # leader above everything in p
    res = ritt_reduce(R, p, basis)
    assert res.remainder == p and res.certificate == R.one()


# ---------------------------------------------------------------- power reinterpretation

def test_reinterpret_identity():
    P = reinterpret_power(R, 1)
    assert P.ring is R


def test_reinterpret_index_arithmetic():
    P = reinterpret_power(R, 2)
    assert P.ring.names == ("x", "s1(x)")
    assert P.describe(R.rank(0, 3)) == ("s1(x)", 1)


@given(polys, st.integers(1, 3))
def test_reinterpret_round_trip_and_shift(terms, d):
    p = build(terms)
    P = reinterpret_power(R, d)
    assert P.untranslate(P.translate(p)) == p
    assert P.ring.sigma_shift(P.translate(p)) == P.translate(R.sigma_shift(p, d))


# ---------------------------------------------------------------- limit degree

def sympy_block_degree(d):
    """Degree of w^(1/2^d) over Q(w): irreducibility of s^(2^d) - w."""
    s, w = sympy.symbols("s w")
    factors = sympy.factor_list(s ** (2 ** d) - w, s)[1]
    assert len(factors) == 1
    return sympy.degree(factors[0][0], s)


@pytest.mark.parametrize("d,expected", [(1, 2), (2, 4), (3, 8)])
def test_benign_limit_degree(d, expected):
    value = limit_degree(benign_quadratic(3 * d + 1), d)
    assert value == expected == sympy_block_degree(d)
    assert value == limit_degree(benign_quadratic(4), 1) ** d


def test_fixed_generator_has_limit_degree_one():
    pres = LevelPresentation((2,) + (1,) * 9)
    for d in (1, 2, 3):
        assert limit_degree(pres, d) == 1


def test_insufficient_depth():
    with pytest.raises(NotStabilized):
        limit_degree(benign_quadratic(3), 3)
