import re

import pytest
from hypothesis import given, strategies as st

from sigchev.cli import list_builtin, load_builtin
from sigchev.errors import ScenarioSyntaxError, TypeMismatch, UnknownName
from sigchev.scenario import (
    DECL_KINDS,
    KEYWORDS,
    BinOp,
    Bool,
    Call,
    Command,
    Decl,
    Expect,
    ListE,
    MapE,
    Name,
    Neg,
    Num,
    Scenario,
    Shift,
    Str,
    parse_scenario,
    render_scenario,
)


def test_minimal_scenario_has_one_command():
    sc = parse_scenario("field F = Q; pseudofield K = trivial(F, 3); cmd decompose K;")
    assert len(sc.commands) == 1 and len(sc.declarations) == 2


def test_undeclared_reference():
    with pytest.raises(UnknownName):
        parse_scenario("cmd lift undeclared_ideal;")


def test_kind_mismatch():
    with pytest.raises(TypeMismatch):
        parse_scenario("field F = Q; cmd decompose F;")


def test_syntax_error_position():
    with pytest.raises(ScenarioSyntaxError) as err:
        parse_scenario("field F = Q\ncmd decompose F;")
    assert (err.value.line, err.value.column) == (2, 1)
    assert "';'" in err.value.expected


def test_both_shift_spellings():
    a = parse_scenario("kernel B = kernel(sigmafield(Q), [x], [[s1(x)^2 - x]], 1);", check=False)
    b = parse_scenario("kernel B = kernel(sigmafield(Q), [x], [[s^1(x)^2 - x]], 1);", check=False)
    assert a == b


def test_comments_ignored():
    sc = parse_scenario("# heading\nfield F = Q; # trailing\n")
    assert len(sc.declarations) == 1


def test_intro_builtin_structure():
    sc = parse_scenario(load_builtin("intro-example"))
    verbs = [c.verb for c in sc.commands]
    assert verbs.count("lift") == 4
    first_lift = next(c for c in sc.commands if c.verb == "lift")
    paths = {".".join(e.path) for e in first_lift.expects}
    assert {"lift_counts.1", "lift_counts.2", "permutation"} <= paths


@pytest.mark.parametrize("name", [n for n, _ in list_builtin()])
def test_builtins_round_trip(name):
    sc = parse_scenario(load_builtin(name))
    assert parse_scenario(render_scenario(sc)) == sc


# ---------------------------------------------------------------- round trip property

_SHIFT = re.compile(r"s\d+$")
identifiers = st.from_regex(r"[a-z][a-z0-9]{0,3}", fullmatch=True).filter(
    lambda s: s not in KEYWORDS and not _SHIFT.match(s) and s not in ("s", "null"))


def expressions():
    leaves = st.one_of(
        st.integers(0, 50).map(Num),
        identifiers.map(Name),
        st.builds(Shift, st.integers(1, 4), identifiers),
    )

    def extend(inner):
        return st.one_of(
            st.builds(BinOp, st.sampled_from("+-*/"), inner, inner),
            st.builds(BinOp, st.just("^"), inner, st.integers(0, 5).map(Num)),
            st.builds(Neg, inner),
            st.builds(Call, identifiers, st.lists(inner, max_size=3).map(tuple)),
            st.lists(inner, max_size=3).map(lambda xs: ListE(tuple(xs))),
            st.lists(st.tuples(identifiers, inner), max_size=2).map(lambda xs: MapE(tuple(xs))),
        )

    return st.recursive(leaves, extend, max_leaves=8)


literals = st.one_of(
    st.integers(0, 9).map(Num),
    st.booleans().map(Bool),
    st.from_regex(r"[a-z0-9 *+-]{0,6}", fullmatch=True).map(Str),
    st.lists(st.integers(0, 3).map(Num), max_size=3).map(lambda xs: ListE(tuple(xs))),
)

path = st.lists(st.one_of(identifiers, st.integers(0, 9).map(str)), min_size=1, max_size=3).map(tuple)

declarations = st.builds(Decl, st.sampled_from(DECL_KINDS), identifiers, expressions())
commands = st.builds(
    Command,
    identifiers,
    st.lists(expressions(), max_size=3).map(tuple),
    st.lists(st.tuples(identifiers, expressions()), max_size=2).map(tuple),
    st.lists(st.builds(Expect, path, literals), max_size=2).map(tuple),
)
scenarios = st.lists(st.one_of(declarations, commands), max_size=5).map(lambda xs: Scenario(tuple(xs)))


@given(scenarios)
def test_parse_render_round_trip(sc):
    text = render_scenario(sc)
    again = parse_scenario(text, check=False)
    assert again == sc
    assert render_scenario(again) == text
