import pytest
from hypothesis import given, strategies as st

from sigchev.errors import CyclicStructureBroken
from sigchev.fieldtower import GF, QQ, identity_morphism, make_morphism
from sigchev.pseudofield import (
    MinimalPeriod,
    NoneUpTo,
    apply_sigma,
    compat_test,
    idempotents,
    make_pseudofield,
    sigma_field,
    trivial_extension,
)

Q_SQRT2 = QQ.extend_algebraic("r2", [-2, 0, 1])
CONJ = make_morphism(Q_SQRT2, Q_SQRT2, [-Q_SQRT2.gen()])
F2 = GF(2)
F4 = F2.extend_algebraic("g", [1, 1, 1])
FROB4 = make_morphism(F4, F4, [F4.gen() ** 2])
F3 = GF(3)
F9 = F3.extend_algebraic("h", [1, 0, 1])
FROB9 = make_morphism(F9, F9, [F9.gen() ** 3])


def gf2n_frobenius_orbit(modulus_bits: int, n: int) -> int:
    """Orbit length of the class of y under squaring in GF(2)[y]/(modulus); plain bit arithmetic."""
    def mulmod(a, b):
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a >> n & 1:
                a ^= modulus_bits
        return r
    y = 0b10
    z, k = mulmod(y, y), 1
    while z != y:
        z, k = mulmod(z, z), k + 1
    return k


# ---------------------------------------------------------------- construction

def test_period_one_is_sigma_field():
    K = make_pseudofield([QQ], [identity_morphism(QQ)])
    assert K.period == 1 and K.is_field


def test_period_two_conjugation():
    K = make_pseudofield([Q_SQRT2, Q_SQRT2], [CONJ, CONJ])
    assert K.period == 2
    assert CONJ.compose(CONJ).is_identity()


def test_mismatched_endpoints_rejected():
    with pytest.raises(CyclicStructureBroken):
        make_pseudofield([QQ, Q_SQRT2], [identity_morphism(QQ), identity_morphism(Q_SQRT2)])


# ---------------------------------------------------------------- idempotents

def test_idempotents_period_one():
    K = sigma_field(QQ)
    (e,) = idempotents(K)
    assert e == K.one()


def test_idempotents_shift_cyclically():
    T = trivial_extension(sigma_field(QQ), 3)
    e1, e2, e3 = idempotents(T)
    assert apply_sigma(T, e1) == e2
    assert apply_sigma(T, e2) == e3
    assert apply_sigma(T, e3) == e1


def test_idempotents_orthogonal_and_sum_to_one():
    T = trivial_extension(sigma_field(QQ), 3)
    e1, e2, e3 = idempotents(T)
    assert (e1 * e2).is_zero()
    assert e1 + e2 + e3 == T.one()


# ---------------------------------------------------------------- sigma action

def test_trivial_extension_swaps_coordinates():
    T = trivial_extension(sigma_field(QQ), 2)
    x = T.element([QQ(1), QQ(2)])
    assert apply_sigma(T, x) == T.element([QQ(2), QQ(1)])


def test_conjugation_on_period_one():
    K = sigma_field(Q_SQRT2, CONJ)
    r = K.element([Q_SQRT2.gen()])
    assert apply_sigma(K, r) == K.element([-Q_SQRT2.gen()])


def test_sigma_period_returns_idempotent():
    T = trivial_extension(sigma_field(QQ), 4)
    e1 = idempotents(T)[0]
    assert apply_sigma(T, e1, 4) == e1


def test_trivial_extension_of_period_three():
    T = trivial_extension(sigma_field(QQ), 3)
    assert T.period == 3
    x = T.element([QQ(1), QQ(2), QQ(3)])
    assert apply_sigma(T, x) == T.element([QQ(3), QQ(1), QQ(2)])


def test_trivial_extension_one_copy():
    K = sigma_field(Q_SQRT2, CONJ)
    assert trivial_extension(K, 1).period == 1


def test_diagonal_embedding_commutes_with_sigma():
    K = sigma_field(Q_SQRT2, CONJ)
    T = trivial_extension(K, 3)
    c = Q_SQRT2(1) + Q_SQRT2.gen()
    assert apply_sigma(T, T.diag(c)) == T.diag(CONJ(c))


# ---------------------------------------------------------------- compatibility

def test_compat_identity_on_sqrt2():
    K = sigma_field(QQ)
    L = sigma_field(Q_SQRT2)
    assert compat_test(L, L, K) == MinimalPeriod(1, ((0, 0, 0),), {(0, 0, 0): (0, 0, 0), (0, 0, 1): (0, 0, 1)})


def test_compat_frobenius_gf8():
    F8 = F2.extend_algebraic("a", [1, 1, 0, 1])
    frob = make_morphism(F8, F8, [F8.gen() ** 2])
    res = compat_test(sigma_field(F8, frob), sigma_field(F8), sigma_field(F2))
    assert isinstance(res, MinimalPeriod)
    assert res.period == gf2n_frobenius_orbit(0b1011, 3) == 3


def test_compat_conjugation_swaps():
    res = compat_test(sigma_field(Q_SQRT2, CONJ), sigma_field(Q_SQRT2), sigma_field(QQ))
    assert res.period == 2
    assert len(res.cycle) == 2


def test_compat_bound():
    F8 = F2.extend_algebraic("a", [1, 1, 0, 1])
    frob = make_morphism(F8, F8, [F8.gen() ** 2])
    assert compat_test(sigma_field(F8, frob), sigma_field(F8), sigma_field(F2), max_period=2) == NoneUpTo(2)


@pytest.mark.parametrize("n,bits", [(2, 0b111), (3, 0b1011), (4, 0b10011), (5, 0b100101)])
def test_frobenius_family_period_equals_degree(n, bits):
    coeffs = [(bits >> i) & 1 for i in range(n + 1)]
    F = F2.extend_algebraic("a", coeffs)
    frob = make_morphism(F, F, [F.gen() ** 2])
    res = compat_test(sigma_field(F, frob), sigma_field(F), sigma_field(F2))
    assert res.period == gf2n_frobenius_orbit(bits, n) == n


# ---------------------------------------------------------------- properties

FIELDS = [
    (QQ, [identity_morphism(QQ)]),
    (Q_SQRT2, [identity_morphism(Q_SQRT2), CONJ]),
    (F4, [identity_morphism(F4), FROB4]),
    (F9, [identity_morphism(F9), FROB9]),
]


@st.composite
def pseudofields(draw):
    field, autos = draw(st.sampled_from(FIELDS))
    d = draw(st.integers(1, 4))
    maps = [draw(st.sampled_from(autos)) for _ in range(d)]
    return make_pseudofield([field] * d, maps)


@st.composite
def field_values(draw, field):
    if field.is_finite:
        return field.element(draw(st.sampled_from(list(field.elements()))))
    base = st.integers(-3, 3)
    out = field(draw(base))
    for g in field.gens():
        out = out + field(draw(base)) * g
    return out


@st.composite
def pseudofield_with_elements(draw):
    K = draw(pseudofields())
    zero_bias = st.booleans()

    def elem():
        coords = []
        for F in K.components:
            coords.append(F(0) if draw(zero_bias) else draw(field_values(F)))
        return K.element(coords)

    return K, elem(), elem()


@given(pseudofield_with_elements())
def test_sigma_is_ring_endomorphism(data):
    K, x, y = data
    assert apply_sigma(K, x + y) == apply_sigma(K, x) + apply_sigma(K, y)
    assert apply_sigma(K, x * y) == apply_sigma(K, x) * apply_sigma(K, y)


@given(pseudofield_with_elements())
def test_idempotent_axioms_hold(data):
    K, x, _ = data
    es = idempotents(K)
    total = es[0]
    for i, e in enumerate(es):
        assert e * e == e
        assert apply_sigma(K, e) == es[(i + 1) % K.period]
        for j, f in enumerate(es):
            if i != j:
                assert (e * f).is_zero()
        if i:
            total = total + e
    assert total == K.one()
    assert sum((e * x for e in es[1:]), es[0] * x) == x


@given(pseudofield_with_elements())
def test_invertible_iff_not_zero_divisor(data):
    K, x, _ = data
    assert x.is_invertible() != x.is_zero_divisor()
    if x.is_invertible():
        assert x * x.inverse() == K.one()


def test_invertible_iff_not_zero_divisor_exhaustive_f4_squared():
    K = make_pseudofield([F4, F4], [FROB4, identity_morphism(F4)])
    elems = [F4.element(d) for d in F4.elements()]
    for a in elems:
        for b in elems:
            x = K.element([a, b])
            has_partner = any(not y.is_zero() and (x * y).is_zero()
                              for y in (K.element([c, e]) for c in elems for e in elems))
            assert x.is_zero_divisor() == has_partner
            assert x.is_invertible() == (not has_partner)
