import itertools
import random

import pytest
from hypothesis import given, strategies as st

from oracles import divide_by_one

from sigchev.diffpoly import DiffPolyRing
from sigchev.fieldtower import GF, QQ, make_morphism
from sigchev.polyring import Ideal, Poly
from sigchev.sigmaideal import (
    In,
    Inclusion,
    NotInUpTo,
    NotStable,
    SigmaAlgebra,
    SigmaIdeal,
    Stable,
    WitnessInstance,
    chevalley_witness,
    groebner,
    lift_search,
    membership,
    notin_sigma,
    pseudo_prime_assemble,
    sigma_stability,
)

Q_SQRT2 = QQ.extend_algebraic("r2", [-2, 0, 1])
Q_I = QQ.extend_algebraic("i", [1, 0, 1])


def intro_inclusion(a):
    K = QQ if a == 0 else QQ.extend_algebraic(f"r{a}", [-a, 0, 1])
    S = SigmaAlgebra(K, ["u", "x"], lambda u, x: [u, -x], lambda u, x: [u - x**2])
    R = S.subalgebra(["u"])
    return Inclusion(R, S)


def statement_a_inclusion(d):
    mult = {1: Q_I(-1), 2: Q_I.gen(), 3: Q_I(-1)}[d]
    td = f"t{d}"
    S = SigmaAlgebra(Q_I, ["t", td, "s"], {}, check=False)
    t, u, s = S.gens()
    S = SigmaAlgebra(Q_I, ["t", td, "s"], {"t": t, td: u * S.const(mult), "s": s}, [s**2 - t])
    R = S.subalgebra(["t", td])
    return Inclusion(R, S), [R.var("t") - R.var(td) ** 2]


# ---------------------------------------------------------------- Groebner bases

def test_groebner_principal_over_q():
    A = SigmaAlgebra(QQ, ["x"], lambda x: [x])
    x = A.var("x")
    I = SigmaIdeal(A, [x**2 - 2])
    assert [g.format() for g in groebner(I)] == ["x^2 - 2"]
    assert membership(I, x**4 - 4)
    assert not membership(I, x**3)


def test_elimination_over_sqrt2():
    B = SigmaAlgebra(Q_SQRT2, ["x", "y"], lambda x, y: [x, y])
    x, y = B.gens()
    r = B.const(Q_SQRT2.gen())
    I = SigmaIdeal(B, [x - r, y - r])
    assert I.ideal().eliminate([0]).equals(Ideal(B.ring, [y - r]))


def random_poly(rng, A, nvars, max_deg, max_terms):
    gens = A.gens()
    p = A.const(0)
    for _ in range(rng.randint(1, max_terms)):
        term = A.const(rng.randint(-4, 4))
        for v in range(nvars):
            term = term * gens[v] ** rng.randint(0, max_deg)
        p = p + term
    return p


def test_principal_membership_matches_division_oracle():
    rng = random.Random(20240517)
    A = SigmaAlgebra(QQ, ["x", "y", "z"], lambda x, y, z: [x, y, z])
    agree = 0
    for _ in range(40):
        g = random_poly(rng, A, 3, 2, 3)
        if g.is_constant():
            continue
        p = g * random_poly(rng, A, 3, 1, 2)
        if rng.random() < 0.5:
            p = p + random_poly(rng, A, 3, 2, 2)
        I = SigmaIdeal(A, [g])
        oracle = not divide_by_one(p.terms, g.terms, 3)
        assert membership(I, p) == oracle
        agree += 1
    assert agree >= 20


def f2_points(nvars):
    return list(itertools.product((0, 1), repeat=nvars))


@given(st.integers(0, 2**32))
def test_f2_membership_matches_exhaustive_evaluation(seed):
    rng = random.Random(seed)
    nvars = rng.choice([1, 2])
    names = ["x", "y"][:nvars]
    A = SigmaAlgebra(GF(2), names, lambda *v: list(v))
    gens = A.gens()
    ideal_gens = [random_poly(rng, A, nvars, 3, 3) for _ in range(rng.randint(1, 2))]
    field_eqs = [v**2 + v for v in gens]
    I = SigmaIdeal(A, ideal_gens + field_eqs)
    p = random_poly(rng, A, nvars, 3, 3)
    zeros = [pt for pt in f2_points(nvars)
             if all(g.evaluate(list(pt)) % 2 == 0 for g in ideal_gens)]
    oracle = all(p.evaluate(list(pt)) % 2 == 0 for pt in zeros)
    assert membership(I, p) == oracle


# ---------------------------------------------------------------- stability

def test_intro_stability_needs_square():
    C = SigmaAlgebra(Q_SQRT2, ["x"], lambda x: [-x])
    x = C.var("x")
    q = SigmaIdeal(C, [x - C.const(Q_SQRT2.gen())])
    res1 = sigma_stability(q, 1)
    assert isinstance(res1, NotStable) and res1.residue == "-2*r2"
    assert sigma_stability(q, 2) == Stable(2, True)


def test_rational_quadratic_is_stable():
    C = SigmaAlgebra(Q_SQRT2, ["x"], lambda x: [-x])
    x = C.var("x")
    assert sigma_stability(SigmaIdeal(C, [x**2 - 2]), 1) == Stable(1, True)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_statement_a_prime_is_stable(d):
    inc, q = statement_a_inclusion(d)
    res = sigma_stability(SigmaIdeal(inc.R, q), d)
    assert isinstance(res, Stable) and res.reflexive


def test_polynomial_endomorphism_preimage_is_certified():
    A = SigmaAlgebra(QQ, ["x"], lambda x: [x**2])
    x = A.var("x")
    assert sigma_stability(SigmaIdeal(A, [x]), 1) == Stable(1, True)


def test_forward_only_flag_when_coefficient_map_has_infinite_order():
    Qt = QQ.extend_transcendental("t")
    t = Qt.gen()
    A = SigmaAlgebra(Qt, ["x"], lambda x: [x], sigma_K=make_morphism(Qt, Qt, [2 * t]))
    res = sigma_stability(SigmaIdeal(A, [A.var("x")]), 1)
    assert isinstance(res, Stable)
    assert not res.reflexive and res.flag == "forward-stable only"


# ---------------------------------------------------------------- orbit membership

def test_shift_lands_in_ideal():
    R = DiffPolyRing(QQ, ["x"])
    I = SigmaIdeal(R.truncation(1), [R.x("x", 1)])
    assert notin_sigma(R.x("x"), I, 4) == In(1)


def test_evaluation_witness_keeps_out():
    A = SigmaAlgebra(QQ, ["x"], lambda x: [x])
    x = A.var(0)
    assert notin_sigma(x**2 - 2, SigmaIdeal(A, [x - 1]), 10) == NotInUpTo(10)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_statement_a_t_stays_out(d):
    inc, q = statement_a_inclusion(d)
    I = SigmaIdeal(inc.R, q)
    t = inc.R.var("t")
    assert notin_sigma(t, I, 6) == NotInUpTo(6)
    assert notin_sigma(t, I, 6, stable_power=d) == NotInUpTo(6)


# ---------------------------------------------------------------- assembly

def test_assemble_period_one_returns_input():
    A = SigmaAlgebra(QQ, ["x"], lambda x: [-x])
    x = A.var("x")
    q = SigmaIdeal(A, [x**2 - 2])
    assert pseudo_prime_assemble(q, 1).ideal().equals(q.ideal())


def test_assemble_intro_intersection():
    C = SigmaAlgebra(Q_SQRT2, ["x"], lambda x: [-x])
    x = C.var("x")
    p = pseudo_prime_assemble(SigmaIdeal(C, [x - C.const(Q_SQRT2.gen())]), 2)
    assert p.ideal().equals(Ideal(C.ring, [x**2 - 2]))
    for g in p.generators:
        assert p.contains(C.apply_sigma(g))


def test_assemble_symmetric_coordinates():
    A = SigmaAlgebra(QQ, ["x", "y"], lambda x, y: [y, x])
    x, y = A.gens()
    p = pseudo_prime_assemble(SigmaIdeal(A, [x, y - 1]), 2)
    assert p.ideal().equals(Ideal(A.ring, [x, y - 1]).intersect(Ideal(A.ring, [y, x - 1])))


# ---------------------------------------------------------------- lifts

def contracts_to_source(inc, lift, q):
    back = lift.ideal.eliminate(inc.extra)
    return back.equals(Ideal(inc.S.ring, [Poly(inc.S.ring, g.terms) for g in q]))


@pytest.mark.parametrize("a", [2, 3, 5])
def test_intro_lifts(a):
    inc = intro_inclusion(a)
    q = [inc.R.var("u") - a]
    rep = lift_search(inc, q, 1, 4)
    assert len(rep.lifts_at(1)) == 0
    assert len(rep.lifts_at(2)) == 2
    assert rep.permutation == [1, 0]
    assert len(rep.factors) == 2
    for lift in rep.lifts:
        assert contracts_to_source(inc, lift, q)
    # sigma maps each lift onto the other
    first, second = rep.lifts
    moved = Ideal(inc.S.ring, [inc.S.apply_sigma(g) for g in first.ideal.gens])
    assert moved.equals(second.ideal)


def test_intro_zero_parameter():
    inc = intro_inclusion(0)
    rep = lift_search(inc, [inc.R.var("u")], 1, 4)
    assert len(rep.lifts_at(1)) == 1
    assert rep.lifts[0].generators == ["x"] or "x" in rep.lifts[0].generators


def test_statement_a_d2_lifts():
    inc, q = statement_a_inclusion(2)
    rep = lift_search(inc, q, 2, 4)
    assert len(rep.lifts_at(2)) == 0
    assert len(rep.lifts_at(4)) == 2
    for lift in rep.lifts:
        assert contracts_to_source(inc, lift, q)


def test_witness_intro_family():
    family = []
    for a in (2, 3, 5):
        inc = intro_inclusion(a)
        family.append(WitnessInstance(f"a={a}", inc, (inc.R.var("u") - a,), 1))
    table = chevalley_witness(family, 4)
    assert table.uniform_l == 2 and not table.naive_holds


def test_witness_statement_a_family():
    family = []
    for d in (1, 2, 3):
        inc, q = statement_a_inclusion(d)
        family.append(WitnessInstance(f"d={d}", inc, tuple(q), d))
    table = chevalley_witness(family, 4)
    assert table.uniform_l == 2 and not table.naive_holds


def test_witness_identity_inclusion():
    A = SigmaAlgebra(QQ, ["x"], lambda x: [-x])
    x = A.var("x")
    table = chevalley_witness([WitnessInstance("id", Inclusion(A, A), (x,), 1),
                               WitnessInstance("id2", Inclusion(A, A), (x**2 - 2,), 1)], 4)
    assert table.uniform_l == 1 and table.naive_holds
