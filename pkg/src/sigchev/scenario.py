"""Scenario language: tokenizer, parser, canonical renderer and type checker.

A scenario is a sequence of ``;``-terminated statements::

    field F = algebraic(Q, r2, r2^2 - 2);
    algebra S = algebra(F, [u, x], {u: u, x: -x}, [u - x^2]);
    algebra R = subalgebra(S, [u]);
    ideal q = ideal(R, [u - 2]);
    cmd lift S, q, d=1;
    expect lift_counts.2 == 2;

``expect`` lines attach to the preceding command and compare a dotted path
into its JSON result with a literal.  Difference indeterminates are written
``s2(x)`` or ``s^2(x)``.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .errors import ScenarioSyntaxError, TypeMismatch, UnknownName


# ---------------------------------------------------------------------------- AST

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Str:
    value: str


@dataclass(frozen=True)
class Bool:
    value: bool


@dataclass(frozen=True)
class Name:
    id: str
    pos: Optional[tuple] = field(default=None, compare=False)


@dataclass(frozen=True)
class Shift:
    power: int
    name: str


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple
    kwargs: tuple = ()  # (key, expr) pairs
    pos: Optional[tuple] = field(default=None, compare=False)


@dataclass(frozen=True)
class ListE:
    items: tuple


@dataclass(frozen=True)
class MapE:
    pairs: tuple  # (key, expr)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Decl:
    kind: str
    name: str
    value: object
    pos: Optional[tuple] = field(default=None, compare=False)


@dataclass(frozen=True)
class Expect:
    path: tuple
    value: object


@dataclass(frozen=True)
class Command:
    verb: str
    args: tuple
    kwargs: tuple
    expects: tuple = ()
    pos: Optional[tuple] = field(default=None, compare=False)


@dataclass(frozen=True)
class Scenario:
    statements: tuple

    @property
    def commands(self) -> list:
        return [s for s in self.statements if isinstance(s, Command)]

    @property
    def declarations(self) -> list:
        return [s for s in self.statements if isinstance(s, Decl)]


DECL_KINDS = ("field", "pseudofield", "algebra", "ideal", "kernel", "dsfield", "pv")
KEYWORDS = set(DECL_KINDS) | {"cmd", "expect", "true", "false"}
_SHIFT_NAME = re.compile(r"s(\d+)$")

# ---------------------------------------------------------------------------- tokens

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+)
  | (?P<str>"[^"\n]*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>==|[-+*/^(),;=\[\]{}:.])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    out = []
    line, start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ScenarioSyntaxError(line, i - start + 1, "a token")
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind != "ws":
            out.append(Token(kind, m.group(), line, i - start + 1))
        i = m.end()
    out.append(Token("eof", "", line, i - start + 1))
    return out


# ---------------------------------------------------------------------------- parser

class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, expected: str):
        t = self.tok
        raise ScenarioSyntaxError(t.line, t.col, expected)

    def accept(self, text: str) -> bool:
        if self.tok.kind in ("op", "ident") and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            self.error(repr(text))

    def ident(self) -> Token:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            self.error("an identifier")
        self.i += 1
        return t

    def integer(self) -> int:
        t = self.tok
        if t.kind != "num":
            self.error("an integer")
        self.i += 1
        return int(t.text)

    # statements --------------------------------------------------------------
    def scenario(self) -> Scenario:
        stmts = []
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind == "ident" and t.text == "cmd":
                stmts.append(self.command())
            elif t.kind == "ident" and t.text == "expect":
                if not stmts or not isinstance(stmts[-1], Command):
                    self.error("a command before 'expect'")
                e = self.expectation()
                c = stmts[-1]
                stmts[-1] = Command(c.verb, c.args, c.kwargs, c.expects + (e,), c.pos)
            elif t.kind == "ident" and t.text in DECL_KINDS:
                stmts.append(self.declaration())
            else:
                self.error("a declaration, 'cmd' or 'expect'")
        return Scenario(tuple(stmts))

    def declaration(self) -> Decl:
        t = self.tok
        kind = t.text
        self.i += 1
        name = self.ident().text
        self.expect("=")
        value = self.expr()
        self.expect(";")
        return Decl(kind, name, value, (t.line, t.col))

    def command(self) -> Command:
        t = self.tok
        self.i += 1
        if self.tok.kind != "ident":
            self.error("a command name")
        verb = self.tok.text
        self.i += 1
        args, kwargs = [], []
        if not self.accept(";"):
            while True:
                if self.tok.kind == "ident" and self.peek().text == "=" and self.peek().kind == "op":
                    key = self.ident().text
                    self.expect("=")
                    kwargs.append((key, self.expr()))
                else:
                    if kwargs:
                        self.error("a keyword argument")
                    args.append(self.expr())
                if self.accept(";"):
                    break
                self.expect(",")
        return Command(verb, tuple(args), tuple(kwargs), (), (t.line, t.col))

    def expectation(self) -> Expect:
        self.i += 1
        path = [self._path_part()]
        while self.accept("."):
            path.append(self._path_part())
        self.expect("==")
        value = self.expr()
        self.expect(";")
        return Expect(tuple(path), value)

    def _path_part(self):
        if self.tok.kind == "num":
            return str(self.integer())
        t = self.tok
        if t.kind != "ident":
            self.error("a path component")
        self.i += 1
        return t.text

    # expressions -------------------------------------------------------------
    def expr(self):
        left = self.product()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            left = BinOp(op, left, self.product())
        return left

    def product(self):
        left = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            left = BinOp(op, left, self.unary())
        return left

    def unary(self):
        if self.tok.kind == "op" and self.tok.text == "-":
            self.i += 1
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.i += 1
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Num(int(t.text))
        if t.kind == "str":
            self.i += 1
            return Str(t.text[1:-1])
        if t.kind == "op" and t.text == "(":
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "op" and t.text == "[":
            self.i += 1
            items = []
            if not self.accept("]"):
                while True:
                    items.append(self.expr())
                    if self.accept("]"):
                        break
                    self.expect(",")
            return ListE(tuple(items))
        if t.kind == "op" and t.text == "{":
            self.i += 1
            pairs = []
            if not self.accept("}"):
                while True:
                    key = self.ident().text
                    self.expect(":")
                    pairs.append((key, self.expr()))
                    if self.accept("}"):
                        break
                    self.expect(",")
            return MapE(tuple(pairs))
        if t.kind == "ident":
            if t.text in ("true", "false"):
                self.i += 1
                return Bool(t.text == "true")
            if t.text in DECL_KINDS and self.peek().text == "(":
                # constructor sharing its name with a declaration kind
                name = t
                self.i += 1
            else:
                name = self.ident()
            # s^j(x)
            if (name.text == "s" and self.tok.text == "^" and self.peek().kind == "num"
                    and self.peek(2).text == "("):
                self.i += 1
                j = self.integer()
                self.expect("(")
                inner = self.ident().text
                self.expect(")")
                return Shift(j, inner)
            if self.tok.kind == "op" and self.tok.text == "(":
                m = _SHIFT_NAME.match(name.text)
                self.i += 1
                if m:
                    inner = self.ident().text
                    self.expect(")")
                    return Shift(int(m.group(1)), inner)
                args, kwargs = [], []
                if not self.accept(")"):
                    while True:
                        if self.tok.kind == "ident" and self.peek().text == "=":
                            key = self.ident().text
                            self.expect("=")
                            kwargs.append((key, self.expr()))
                        else:
                            args.append(self.expr())
                        if self.accept(")"):
                            break
                        self.expect(",")
                return Call(name.text, tuple(args), tuple(kwargs), (name.line, name.col))
            return Name(name.text, (name.line, name.col))
        self.error("an expression")


def parse_scenario(text: str, check: bool = True) -> Scenario:
    """Parse scenario text; with ``check`` also resolve names and argument types."""
    sc = _Parser(text).scenario()
    if check:
        check_scenario(sc)
    return sc


# ---------------------------------------------------------------------------- rendering

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_UNARY = 3


def render_expr(e, prec: int = 0) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Str):
        return f'"{e.value}"'
    if isinstance(e, Bool):
        return "true" if e.value else "false"
    if isinstance(e, Name):
        return e.id
    if isinstance(e, Shift):
        return f"s{e.power}({e.name})"
    if isinstance(e, ListE):
        return "[" + ", ".join(render_expr(x) for x in e.items) + "]"
    if isinstance(e, MapE):
        return "{" + ", ".join(f"{k}: {render_expr(v)}" for k, v in e.pairs) + "}"
    if isinstance(e, Call):
        parts = [render_expr(a) for a in e.args] + [f"{k}={render_expr(v)}" for k, v in e.kwargs]
        return f"{e.func}(" + ", ".join(parts) + ")"
    if isinstance(e, Neg):
        text = "-" + render_expr(e.operand, _UNARY)
        return f"({text})" if prec > _UNARY else text
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        if e.op == "^":
            text = f"{render_expr(e.left, p + 1)}^{render_expr(e.right, _UNARY)}"
        else:
            sep = f" {e.op} " if p == 1 else e.op
            text = f"{render_expr(e.left, p)}{sep}{render_expr(e.right, p + 1)}"
        return f"({text})" if prec > p else text
    raise TypeError(f"not an expression node: {e!r}")


def render_scenario(sc: Scenario) -> str:
    lines = []
    for s in sc.statements:
        if isinstance(s, Decl):
            lines.append(f"{s.kind} {s.name} = {render_expr(s.value)};")
        else:
            parts = [render_expr(a) for a in s.args] + [f"{k}={render_expr(v)}" for k, v in s.kwargs]
            lines.append(f"cmd {s.verb}" + (" " + ", ".join(parts) if parts else "") + ";")
            for e in s.expects:
                lines.append(f"expect {'.'.join(e.path)} == {render_expr(e.value)};")
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------- type checking

# positional argument kinds, keyword argument kinds, result kind
CONSTRUCTORS = {
    "GF": ("field", ["int"], {}),
    "algebraic": ("field", ["field", "name", "expr"], {}),
    "transcendental": ("field", ["field", "name"], {}),
    "sigmafield": ("pseudofield", ["field", "map?"], {}),
    "frobenius": ("pseudofield", ["field"], {}),
    "trivial": ("pseudofield", ["field|pseudofield", "int"], {}),
    "algebra": ("algebra", ["field", "names", "map", "exprs?"], {"over": "pseudofield"}),
    "subalgebra": ("algebra", ["algebra", "names"], {}),
    "ideal": ("ideal", ["algebra", "exprs"], {}),
    "kernel": ("kernel", ["pseudofield", "names", "nested", "int"], {}),
    "deltasigma": ("dsfield", ["field", "map", "map"], {}),
    "pv": ("pv", ["dsfield", "expr", "str?"], {}),
}

COMMANDS = {
    "decompose": (["pseudofield"], {}),
    "compat": (["pseudofield", "pseudofield", "pseudofield"], {"max_period": "int"}),
    "stable": (["ideal"], {"d": "int"}),
    "lift": (["algebra", "ideal"], {"d": "int", "l_max": "int"}),
    "witness": (["lifts"], {"l_max": "int"}),
    "prolong": (["kernel"], {}),
    "realize": (["kernel"], {"T": "int"}),
    "limitdegree": (["kernel"], {"d": "int", "T": "int"}),
    "invclosure": (["algebra", "ideals"], {"n_max": "int", "d": "int"}),
    "pv": (["pv", "pv"], {"bound": "int", "l_max": "int"}),
    "probe": (["pseudofield|algebra"], {"bound": "int", "constraint": "bool"}),
    "show": (["any"], {}),
}

BUILTIN_NAMES = {"Q": "field"}
_OBJECT_KINDS = set(DECL_KINDS)
_VALUE_SPECS = {"int", "bool", "str", "name", "names", "map", "exprs", "nested", "expr", "lifts", "ideals"}


def _is_int(e) -> bool:
    return isinstance(e, Num) or (isinstance(e, Neg) and isinstance(e.operand, Num))


def _kind_of(e, env: dict) -> str:
    """Kind of an object-valued expression, checking references."""
    if isinstance(e, Name):
        if e.id in env:
            return env[e.id]
        if e.id in BUILTIN_NAMES:
            return BUILTIN_NAMES[e.id]
        where = f" at line {e.pos[0]}, column {e.pos[1]}" if e.pos else ""
        raise UnknownName(f"{e.id!r} is not declared{where}")
    if isinstance(e, Call):
        if e.func not in CONSTRUCTORS:
            raise UnknownName(f"unknown constructor {e.func!r}")
        result, pos, kw = CONSTRUCTORS[e.func]
        _check_args(e.func, e.args, e.kwargs, pos, kw, env)
        return result
    raise TypeMismatch(f"expected an object reference, got {render_expr(e)!r}")


def _check_arg(where: str, spec: str, e, env: dict):
    spec = spec.rstrip("?")
    if spec == "int":
        if not _is_int(e):
            raise TypeMismatch(f"{where}: expected an integer, got {render_expr(e)!r}")
    elif spec == "bool":
        if not isinstance(e, Bool):
            raise TypeMismatch(f"{where}: expected true or false")
    elif spec == "str":
        if not isinstance(e, Str):
            raise TypeMismatch(f"{where}: expected a string")
    elif spec == "name":
        if not isinstance(e, Name):
            raise TypeMismatch(f"{where}: expected a generator name")
    elif spec == "names":
        if not isinstance(e, ListE) or not all(isinstance(x, Name) for x in e.items):
            raise TypeMismatch(f"{where}: expected a list of names")
    elif spec == "map":
        if not isinstance(e, MapE):
            raise TypeMismatch(f"{where}: expected a map {{name: value}}")
    elif spec == "exprs":
        if not isinstance(e, ListE):
            raise TypeMismatch(f"{where}: expected a list")
    elif spec == "nested":
        if not isinstance(e, ListE) or not all(isinstance(x, ListE) for x in e.items):
            raise TypeMismatch(f"{where}: expected a list of lists")
    elif spec == "expr":
        if isinstance(e, (ListE, MapE, Str, Bool, Call)):
            raise TypeMismatch(f"{where}: expected an arithmetic expression")
    elif spec == "lifts":
        if not isinstance(e, ListE):
            raise TypeMismatch(f"{where}: expected a list of lift(...) instances")
        for item in e.items:
            if not isinstance(item, Call) or item.func != "lift":
                raise TypeMismatch(f"{where}: expected lift(algebra, ideal, d)")
            _check_args("lift", item.args, item.kwargs, ["algebra", "ideal", "int"], {}, env)
    elif spec == "ideals":
        if not isinstance(e, ListE):
            raise TypeMismatch(f"{where}: expected a list of ideals")
        for item in e.items:
            _check_arg(where, "ideal", item, env)
    elif spec == "any":
        _kind_of(e, env)
    else:
        allowed = spec.split("|")
        got = _kind_of(e, env)
        if got not in allowed:
            raise TypeMismatch(f"{where}: expected {spec}, got {got} {render_expr(e)!r}")


def _check_args(where, args, kwargs, pos_specs, kw_specs, env):
    # undeclared references are reported before arity problems
    for i, a in enumerate(args):
        spec = pos_specs[i].rstrip("?") if i < len(pos_specs) else "any"
        if isinstance(a, Name) and spec not in _VALUE_SPECS:
            _kind_of(a, env)
    required = [s for s in pos_specs if not s.endswith("?")]
    if not len(required) <= len(args) <= len(pos_specs):
        raise TypeMismatch(f"{where}: expected {len(required)} to {len(pos_specs)} arguments, got {len(args)}")
    for spec, a in zip(pos_specs, args):
        _check_arg(where, spec, a, env)
    for key, v in kwargs:
        if key not in kw_specs:
            raise TypeMismatch(f"{where}: unknown keyword {key!r}")
        _check_arg(f"{where}.{key}", kw_specs[key], v, env)


def check_scenario(sc: Scenario) -> dict:
    """Resolve names in order and type-check every argument; return the kind table."""
    env = {}
    for s in sc.statements:
        if isinstance(s, Decl):
            got = _kind_of(s.value, env)
            if got != s.kind:
                raise TypeMismatch(f"{s.name}: declared {s.kind} but the value is a {got}")
            if s.name in env or s.name in BUILTIN_NAMES:
                raise TypeMismatch(f"{s.name} is declared twice")
            env[s.name] = s.kind
        else:
            if s.verb not in COMMANDS:
                raise UnknownName(f"unknown command {s.verb!r}")
            pos, kw = COMMANDS[s.verb]
            _check_args(s.verb, s.args, s.kwargs, pos, kw, env)
    return env


def literal(e):
    """Python value of a literal expression (used by ``expect``)."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Neg) and isinstance(e.operand, Num):
        return -e.operand.value
    if isinstance(e, Str):
        return e.value
    if isinstance(e, Bool):
        return e.value
    if isinstance(e, Name) and e.id == "null":
        return None
    if isinstance(e, ListE):
        return [literal(x) for x in e.items]
    raise TypeMismatch(f"expected a literal, got {render_expr(e)!r}")
