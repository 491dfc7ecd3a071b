import pytest
from hypothesis import given, strategies as st

from oracles import eliminate, same_ideal, to_sympy
from sigchev.errors import BoundExceeded, ConditionOneFails, NotPrimeInScope
from sigchev.fieldtower import QQ
from sigchev.kernels import (
    check_condition_one,
    inversive_closure,
    make_kernel,
    prolong,
    realize,
    sigma_period,
    spec_transport,
)
from sigchev.kernels import _namer
from sigchev.polyring import Ideal, PolyRing
from sigchev.pseudofield import sigma_field
from sigchev.sigmaideal import SigmaAlgebra

K = sigma_field(QQ)
RING = PolyRing(QQ, _namer(("x",)))
X0, X1, X2 = RING.var(0), RING.var(1), RING.var(2)


def generic():
    return make_kernel(K, ["x"], [[]], 0)


def intro():
    return make_kernel(K, ["x"], [[X0**2 - 2, X1 + X0]], 1)


def benign():
    return make_kernel(K, ["x"], [[X1**2 - X0]], 1)


def splitting():
    return make_kernel(K, ["x"], [[X1**2 - 2 * X0**2]], 1)


# ---------------------------------------------------------------- construction

def test_generic_kernel_any_length():
    for t in range(4):
        k = make_kernel(K, ["x"], [[]], t)
        assert all(I.is_zero() for I in k.ideals())


def test_intro_kernel_valid():
    k = intro()
    check_condition_one(k)
    assert [g.format() for g in k.ideal(0).basis] == ["s1(x) + x", "x^2 - 2"]


def test_mismatched_image_fails_condition_one():
    with pytest.raises(ConditionOneFails):
        make_kernel(K, ["x"], [[X0**2 - 2, X1 - 1]], 1)


def test_reducible_component_rejected():
    with pytest.raises(NotPrimeInScope):
        make_kernel(K, ["x"], [[X0**2 - 4]], 1)


# ---------------------------------------------------------------- prolongation

def test_generic_prolongation_stays_free():
    p = prolong(generic())
    assert p.length == 1 and p.ideal(0).is_zero()


def test_benign_degrees_double():
    r = realize(benign(), 6)
    assert [k.tower_degrees()[0] for k in r.kernels] == [2**t for t in range(1, 7)]


def test_splitting_choice_is_lex_least():
    p = prolong(splitting())
    entry = p.provenance[-1]
    assert entry["factors"] == ["y - 2*x", "y + 2*x"]
    assert entry["chosen"] == "y - 2*x"


# ---------------------------------------------------------------- realization

def test_generic_realization_all_zero():
    r = realize(generic(), 5)
    assert all(all(I.is_zero() for I in k.ideals()) for k in r.kernels)


@pytest.mark.parametrize("make", [intro, benign, splitting])
def test_truncation_law_exact(make):
    r = realize(make(), 6)
    assert all(ok for _, ok in r.truncation_law())
    for lower, upper in zip(r.kernels, r.kernels[1:]):
        check_condition_one(upper)
        t = lower.length
        keep = set(range(t + 1))
        drop = {t + 1}
        # sympy elimination as independent oracle
        ours = [to_sympy(g) for g in lower.ideal(0).basis]
        theirs = eliminate(upper.ideal(0).basis, drop, keep)
        assert same_ideal(ours, theirs, keep)


def test_benign_realization_is_shifted_quadratics():
    r = realize(benign(), 4)
    top = r.kernels[-1].ideal(0)
    expected = Ideal(top.ring, [top.ring.var(j + 1) ** 2 - top.ring.var(j) for j in range(4)])
    assert top.equals(expected)


@given(st.integers(1, 5), st.sampled_from([intro, benign, splitting]))
def test_realization_replay_consistent(t, make):
    full = realize(make(), 5)
    part = realize(make(), t)
    for a, b in zip(part.kernels, full.kernels):
        assert a.ideal(0).equals(b.ideal(0))
    assert part.provenance == full.provenance[: len(part.provenance)]


# ---------------------------------------------------------------- inversive closure

def squaring():
    return SigmaAlgebra(QQ, ["x"], lambda x: [x**2])


def negation():
    return SigmaAlgebra(QQ, ["x"], lambda x: [-x])


def test_inversive_ring_normalizes_to_shift_zero():
    A = negation()
    C = inversive_closure(A)
    x = A.var("x")
    assert C.is_inversive_presentation()
    e = C.element(x**2 + x, 3)
    assert e.shift == 0 and e.rep == x**2 - x


def test_square_root_tower():
    A = squaring()
    C = inversive_closure(A)
    x = A.var("x")
    half = C.element(x, 1)
    assert half.sigma() == C.u(x)
    assert half * half == C.u(x)
    assert not C.is_inversive_presentation()


def test_nilpotent_kernel():
    A = SigmaAlgebra(QQ, ["x"], lambda x: [0])
    C = inversive_closure(A)
    assert C.kernel_contains(A.var(0))
    assert not C.kernel_contains(A.var(0) + 1)


def test_transport_identity_on_inversive_ring():
    A = negation()
    C = inversive_closure(A)
    x = A.var("x")
    q_star, back, p_ring, p_closure = spec_transport(C, [x**2 - 2])
    assert back.equals(Ideal(A.ring, [x**2 - 2]))
    assert p_ring == p_closure == 1


def test_transport_of_origin_under_squaring():
    A = squaring()
    C = inversive_closure(A)
    x = A.var("x")
    q_star, back, p_ring, p_closure = spec_transport(C, [x])
    assert back.equals(Ideal(A.ring, [x]))
    assert q_star.contains(C.element(x, 5))
    assert not q_star.contains(C.element(x - 1, 3))


@pytest.mark.parametrize("make,gens", [
    (squaring, lambda x: [x]),
    (squaring, lambda x: [x - 1]),
    (squaring, lambda x: [x**2 + x + 1]),
    (negation, lambda x: [x]),
    (negation, lambda x: [x**2 - 2]),
    (negation, lambda x: [x - 1]),
])
def test_transport_round_trip_preserves_period(make, gens):
    A = make()
    C = inversive_closure(A)
    q = gens(A.var("x"))
    q_star, back, p_ring, p_closure = spec_transport(C, q)
    assert back.equals(Ideal(A.ring, q))
    assert p_ring == p_closure == sigma_period(A, q)


def test_period_two_prime():
    A = negation()
    x = A.var("x")
    assert sigma_period(A, [x - 1]) == 2


def test_transport_bound_is_explicit():
    A = squaring()
    C = inversive_closure(A)
    x = A.var("x")
    with pytest.raises(BoundExceeded):
        q_star, *_ = spec_transport(C, [x], n_max=1)
        q_star.contains(C.element(x + 3, 6))
