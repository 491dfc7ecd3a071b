from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from sigchev.errors import CommutationFails, SampleDependent
from sigchev.fieldtower import QQ, FieldMorphism
from sigchev.galois import (
    Fail,
    MinimalL,
    NotSimple,
    Pass,
    Simple,
    constraint_search,
    delta_constants,
    dmatrix,
    make_deltasigma_field,
    pseudo_simple_probe,
    pv_construct,
    sigma_l_isomorphism_search,
    sigma_separability_witness,
)
from sigchev.pseudofield import sigma_field, trivial_extension
from sigchev.sigmaideal import SigmaAlgebra

Q_SQRT2 = QQ.extend_algebraic("r2", [-2, 0, 1])
K_FIELD = Q_SQRT2.extend_transcendental("x")
X = K_FIELD.gen("x")
R2 = K_FIELD.gen("r2")
DS = make_deltasigma_field(K_FIELD, {"x": X}, {"x": 2 * X})
HALF = Fraction(1, 2)

SX, SR2 = sympy.symbols("x r2")


def to_sympy(elem):
    text = str(elem).replace("^", "**")
    return sympy.sympify(text, locals={"x": SX, "r2": SR2}).subs(SR2, sympy.sqrt(2))


# ---------------------------------------------------------------- delta-sigma fields

def test_euler_derivation_commutes_with_scaling():
    assert DS.delta(DS.sigma(X)) == DS.sigma(DS.delta(X)) == 2 * X


def test_shift_does_not_commute():
    with pytest.raises(CommutationFails):
        make_deltasigma_field(K_FIELD, {"x": X}, {"x": X + 1})


def test_zero_derivation_always_commutes():
    ds = make_deltasigma_field(K_FIELD, {}, {"x": X + 1})
    assert ds.delta.is_zero()


coeff = st.integers(-3, 3)


@st.composite
def rational_functions(draw):
    num = sum((K_FIELD(draw(coeff)) * X**i + K_FIELD(draw(coeff)) * R2 * X**i for i in range(3)),
              K_FIELD(0))
    den = X + K_FIELD(draw(st.integers(1, 4))) * R2
    return num / den


@settings(max_examples=25)
@given(rational_functions())
def test_derivation_matches_sympy(f):
    oracle = sympy.simplify(SX * sympy.diff(to_sympy(f), SX) - to_sympy(DS.delta(f)))
    assert oracle == 0


@settings(max_examples=25)
@given(rational_functions(), rational_functions())
def test_leibniz_and_commutation(f, g):
    assert DS.delta(f * g) == DS.delta(f) * g + f * DS.delta(g)
    assert DS.delta(f + g) == DS.delta(f) + DS.delta(g)
    assert DS.delta(DS.sigma(f)) == DS.sigma(DS.delta(f))


# ---------------------------------------------------------------- PV rings

PLUS = pv_construct(DS, HALF, "+")
MINUS = pv_construct(DS, HALF, "-")
TRIVIAL = pv_construct(DS, 0)


def test_plus_choice_multiplier():
    assert PLUS.to_json()["sigma_y"] == "r2*y"
    assert PLUS.kind == "quadratic"


def test_minus_choice_multiplier():
    assert MINUS.to_json()["sigma_y"] == "-r2*y"


def test_zero_equation_gives_base():
    assert TRIVIAL.kind == "base"


@pytest.mark.parametrize("R", [PLUS, MINUS, TRIVIAL])
def test_pv_invariants(R):
    L = R.field
    y = L.element(R.y)
    a = L.element(L.embed(R.base.field, R.a))
    assert R.delta(y) == a * y
    sig = R.sigma
    assert R.delta(sig(y)) == sig(R.delta(y))


# ---------------------------------------------------------------- D matrix

def test_dmatrix_same_choice():
    D = dmatrix(PLUS, PLUS).to_json()
    assert D["delta_D"] == "0" and D["sigma_D"] == "D" and D["certified"]


def test_dmatrix_opposite_choice():
    D = dmatrix(PLUS, MINUS).to_json()
    assert D["delta_D"] == "0" and D["sigma_D"] == "-D"


def test_dmatrix_trivial():
    assert dmatrix(TRIVIAL, TRIVIAL).to_json()["D"] == "1"


# ---------------------------------------------------------------- constants

def test_base_constants_are_scalars():
    for bound in (1, 2, 3, 4):
        c = delta_constants(DS, bound)
        assert c.only_base_constants and c.to_json()["constants"] == ["1"]


def test_pv_ring_has_no_new_constants():
    for R in (PLUS, MINUS):
        assert delta_constants(R, 4).to_json()["constants"] == ["1"]


def test_zero_derivation_everything_constant():
    ds = make_deltasigma_field(K_FIELD, {}, {"x": 2 * X})
    c = delta_constants(ds, 2)
    assert len(c.basis) > 1 and not c.only_base_constants


# ---------------------------------------------------------------- twists

def sympy_minimal_twist(sign1, sign2, bound=8):
    """Least l with (sign1*sqrt2)^l == (sign2*sqrt2)^l, the sigma^l-equivariance of y1 -> y2."""
    for l in range(1, bound + 1):
        if sympy.simplify((sign1 * sympy.sqrt(2)) ** l - (sign2 * sympy.sqrt(2)) ** l) == 0:
            return l
    return None


def test_opposite_choices_need_square():
    res = sigma_l_isomorphism_search(PLUS, MINUS)
    assert isinstance(res, MinimalL) and res.l == 2 == sympy_minimal_twist(1, -1)


def test_same_choice_twist_one():
    for R in (PLUS, MINUS, TRIVIAL):
        assert sigma_l_isomorphism_search(R, R).l == 1


@given(st.sampled_from([(PLUS, MINUS), (MINUS, PLUS), (PLUS, PLUS), (MINUS, MINUS)]),
       st.integers(1, 6))
def test_equivariance_doubles(pair, l):
    R1, R2 = pair
    if R1.sigma_ratio(l) == R2.sigma_ratio(l):
        assert R1.sigma_ratio(2 * l) == R2.sigma_ratio(2 * l)


# ---------------------------------------------------------------- simplicity and constraints

def test_trivial_extension_is_simple():
    assert isinstance(pseudo_simple_probe(trivial_extension(sigma_field(QQ), 3)), Simple)


def test_free_constant_is_not_simple():
    S = SigmaAlgebra(QQ, ["c"], lambda c: [c])
    assert isinstance(pseudo_simple_probe(S), NotSimple)


def test_cycle_quotient_is_simple():
    S = SigmaAlgebra(QQ, ["a"], lambda a: [-a], lambda a: [a**2 - 1])
    assert isinstance(pseudo_simple_probe(S), Simple)


def test_algebraic_element_is_constrained():
    S = SigmaAlgebra(QQ, ["a"], lambda a: [-a], lambda a: [a**2 - 2])
    w = constraint_search(S)
    assert w.verdict == "Constrained"


def test_free_constant_is_not_constrained():
    S = SigmaAlgebra(QQ, ["c"], lambda c: [c])
    w = constraint_search(S)
    assert w.verdict == "NotConstrained" and w.tested


def test_base_element_constraint_is_one():
    S = SigmaAlgebra(QQ, ["a"], lambda a: [a], lambda a: [a - 3])
    w = constraint_search(S)
    assert w.verdict == "Constrained" and w.constraint == "1"


# ---------------------------------------------------------------- separability

QX = QQ.extend_transcendental("x")
XX = QX.gen()


def test_scaling_keeps_monomials_independent():
    ds = make_deltasigma_field(QX, {"x": XX}, {"x": 2 * XX})
    res = sigma_separability_witness(ds, [QX(1), XX, XX**2])
    assert res == Pass(3)
    # oracle: Vandermonde determinant of the images
    M = sympy.Matrix([[1, 0, 0], [0, 2, 0], [0, 0, 4]])
    assert M.rank() == 3


def test_collapse_fails():
    res = sigma_separability_witness((QX, FieldMorphism(QX, QX, (QX.zero,))), [QX(1), XX])
    assert isinstance(res, Fail)


def test_dependent_sample_rejected():
    ds = make_deltasigma_field(QX, {"x": XX}, {"x": 2 * XX})
    with pytest.raises(SampleDependent):
        sigma_separability_witness(ds, [XX, 2 * XX])
