"""Scenario runner and the ``sigchev`` command line."""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass
from importlib import resources

from . import __version__
from .errors import (
    ScenarioSyntaxError,
    SigchevError,
    TypeMismatch,
    UnknownName,
)
from .fieldtower import (
    GF,
    QQ,
    FieldTower,
    UPoly,
    extend_algebraic,
    extend_transcendental,
    make_morphism,
)
from .galois import (
    constraint_search,
    delta_constants,
    dmatrix,
    make_deltasigma_field,
    pseudo_simple_probe,
    pv_construct,
    sigma_l_isomorphism_search,
)
from .diffpoly import LevelPresentation, limit_degree
from .kernels import _namer, inversive_closure, make_kernel, prolong, realize, spec_transport
from .polyring import Poly, PolyRing
from .pseudofield import (
    PseudoField,
    apply_sigma,
    compat_test,
    idempotents,
    sigma_field,
    trivial_extension,
)
from .scenario import (
    BinOp,
    Call,
    Command,
    Decl,
    Name,
    Neg,
    Num,
    Scenario,
    Shift,
    literal,
    parse_scenario,
    render_expr,
)
from .sigmaideal import (
    Inclusion,
    SigmaAlgebra,
    SigmaIdeal,
    WitnessInstance,
    chevalley_witness,
    lift_search,
    sigma_stability,
)

SCHEMA_VERSION = 1
EXIT_PASS, EXIT_ASSERT, EXIT_PARSE, EXIT_OPERATION = 0, 1, 2, 3


# ---------------------------------------------------------------------------- expression evaluation

def _eval(e, leaf):
    """Evaluate arithmetic; ``leaf`` turns numbers, names and shifts into ring values."""
    if isinstance(e, (Num, Name, Shift)):
        return leaf(e)
    if isinstance(e, Neg):
        return -_eval(e.operand, leaf)
    if isinstance(e, BinOp):
        if e.op == "^":
            n = _int(e.right)
            base = _eval(e.left, leaf)
            if n < 0:
                return _invert(base) ** (-n)
            return base ** n
        a, b = _eval(e.left, leaf), _eval(e.right, leaf)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        return a * _invert(b)
    raise TypeMismatch(f"not an arithmetic expression: {render_expr(e)!r}")


def _invert(x):
    if isinstance(x, Poly):
        if not x.is_constant() or not x.terms:
            raise TypeMismatch(f"cannot divide by the non-constant {x.format()}")
        return x.ring.const_data(x.field.inv(x.constant_data()))
    return 1 / x


def _int(e) -> int:
    v = literal(e)
    if not isinstance(v, int) or isinstance(v, bool):
        raise TypeMismatch(f"expected an integer, got {render_expr(e)!r}")
    return v


def field_value(F: FieldTower, e):
    """A field element from an expression in the generator names of ``F``."""
    def leaf(x):
        if isinstance(x, Num):
            return F(x.value)
        if isinstance(x, Name):
            if x.id not in F.names:
                raise UnknownName(f"{x.id!r} is not a generator of {F}")
            return F.gen(x.id)
        raise TypeMismatch("difference indeterminates are not field elements")
    return _eval(e, leaf)


def poly_value(ring: PolyRing, e, variables: dict, n_shift: int | None = None):
    """A polynomial; ``variables`` maps names to indices, shifts use ``n_shift``."""
    F = ring.field

    def leaf(x):
        if isinstance(x, Num):
            return ring.const(x.value)
        if isinstance(x, Name):
            if x.id in variables:
                return ring.var(variables[x.id])
            if x.id in F.names:
                return ring.const(F.gen(x.id))
            raise UnknownName(f"{x.id!r} is neither a variable nor a generator")
        if n_shift is None:
            raise TypeMismatch("shift notation needs a difference polynomial ring")
        if x.name not in variables:
            raise UnknownName(f"{x.name!r} is not a variable")
        return ring.var(x.power * n_shift + variables[x.name])
    return _eval(e, leaf)


def _names(e) -> list:
    return [x.id for x in e.items]


# ---------------------------------------------------------------------------- runtime objects

@dataclass
class IdealValue:
    algebra: SigmaAlgebra
    gens: list


@dataclass
class Options:
    max_power: int = 4
    bound: int | None = None
    seed: int = 0
    assert_mode: bool = False


class Interpreter:
    def __init__(self, options: Options):
        self.options = options
        self.env = {"Q": QQ}
        self.rng = random.Random(options.seed)

    def ref(self, e):
        if isinstance(e, Name):
            if e.id not in self.env:
                raise UnknownName(f"{e.id!r} is not declared")
            return self.env[e.id]
        if isinstance(e, Call):
            return self.construct(e)
        raise TypeMismatch(f"expected a reference, got {render_expr(e)!r}")

    # declarations ----------------------------------------------------------
    def construct(self, c: Call):
        f, a = c.func, c.args
        kw = dict(c.kwargs)
        if f == "GF":
            return GF(_int(a[0]))
        if f == "algebraic":
            F = self.ref(a[0])
            name = a[1].id
            ring = PolyRing(F, lambda v: name)
            p = poly_value(ring, a[2], {name: 0})
            coeffs = p.coefficients_in(0)
            raw = [F.zero] * (max(coeffs) + 1)
            for k, cf in coeffs.items():
                raw[k] = cf.constant_data()
            return extend_algebraic(F, UPoly(F, tuple(raw)), name)
        if f == "transcendental":
            return extend_transcendental(self.ref(a[0]), a[1].id)
        if f == "sigmafield":
            F = self.ref(a[0])
            given = dict(a[1].pairs) if len(a) > 1 else {}
            unknown = set(given) - set(F.names)
            if unknown:
                raise UnknownName(f"{sorted(unknown)} are not generators of {F}")
            imgs = [field_value(F, given[nm]) if nm in given else F.gen(nm) for nm in F.names]
            return sigma_field(F, make_morphism(F, F, imgs))
        if f == "frobenius":
            F = self.ref(a[0])
            p = F.characteristic
            if p == 0:
                raise TypeMismatch("frobenius needs a finite field")
            return sigma_field(F, make_morphism(F, F, [F.gen(nm) ** p for nm in F.names]))
        if f == "trivial":
            K = self.ref(a[0])
            if isinstance(K, FieldTower):
                K = sigma_field(K)
            return trivial_extension(K, _int(a[1]))
        if f == "algebra":
            F = self.ref(a[0])
            names = _names(a[1])
            sigma_K = None
            if "over" in kw:
                K = self.ref(kw["over"])
                if K.field != F:
                    raise TypeMismatch("the coefficient difference field must have the algebra's field")
                sigma_K = K.sigma
            images = dict(a[2].pairs)
            rel_exprs = list(a[3].items) if len(a) > 3 else []
            index = {nm: i for i, nm in enumerate(names)}

            def build_images(*gens):
                ring = gens[0].ring if gens else None
                return {nm: poly_value(ring, ex, index) for nm, ex in images.items()}

            def build_rels(*gens):
                ring = gens[0].ring
                return [poly_value(ring, ex, index) for ex in rel_exprs]
            unknown = set(images) - set(names)
            if unknown:
                raise UnknownName(f"{sorted(unknown)} are not generators of the algebra")
            return SigmaAlgebra(F, names, build_images, build_rels, sigma_K)
        if f == "subalgebra":
            return self.ref(a[0]).subalgebra(_names(a[1]))
        if f == "ideal":
            S = self.ref(a[0])
            index = {nm: i for i, nm in enumerate(S.names)}
            return IdealValue(S, [poly_value(S.ring, ex, index) for ex in a[1].items])
        if f == "kernel":
            K = self.ref(a[0])
            names = _names(a[1])
            index = {nm: i for i, nm in enumerate(names)}
            specs = []
            for i, comp in enumerate(a[2].items):
                ring = PolyRing(K.components[i % K.period], _namer(tuple(names)))
                specs.append([poly_value(ring, ex, index, len(names)) for ex in comp.items])
            return make_kernel(K, names, specs, _int(a[3]))
        if f == "deltasigma":
            F = self.ref(a[0])
            delta = {k: field_value(F, v) for k, v in a[1].pairs}
            sigma = {k: field_value(F, v) for k, v in a[2].pairs}
            return make_deltasigma_field(F, delta, sigma)
        if f == "pv":
            k = self.ref(a[0])
            coeff = field_value(k.field, a[1])
            choice = a[2].value if len(a) > 2 else "+"
            return pv_construct(k, coeff, choice)
        raise UnknownName(f"unknown constructor {f!r}")

    # commands --------------------------------------------------------------
    def kwarg(self, cmd: Command, key: str, default):
        for k, v in cmd.kwargs:
            if k == key:
                return literal(v)
        return default

    def bound(self, default: int) -> int:
        return self.options.bound if self.options.bound is not None else default

    def run(self, cmd: Command) -> dict:
        return getattr(self, f"cmd_{cmd.verb}")(cmd)

    def cmd_decompose(self, cmd):
        K = self.ref(cmd.args[0])
        es = idempotents(K)
        shift_ok = all(apply_sigma(K, es[i]).coords == es[(i + 1) % K.period].coords
                       for i in range(K.period))
        return {"period": K.period, "is_field": K.is_field,
                "components": [str(F) for F in K.components],
                "idempotents_shift": shift_ok}

    def cmd_compat(self, cmd):
        L, Lp, K = (self.ref(x) for x in cmd.args)
        return compat_test(L, Lp, K, self.kwarg(cmd, "max_period", self.bound(16))).to_json()

    def cmd_stable(self, cmd):
        q = self.ref(cmd.args[0])
        return sigma_stability(SigmaIdeal(q.algebra, q.gens), self.kwarg(cmd, "d", 1)).to_json()

    def _lift(self, S, q, d, l_max):
        return lift_search(Inclusion(q.algebra, S), q.gens, d, l_max)

    def cmd_lift(self, cmd):
        S, q = self.ref(cmd.args[0]), self.ref(cmd.args[1])
        d = self.kwarg(cmd, "d", 1)
        l_max = self.kwarg(cmd, "l_max", self.options.max_power)
        rep = self._lift(S, q, d, l_max)
        out = rep.to_json()
        out["lift_counts"] = {str(l): len(rep.lifts_at(l * d)) for l in range(1, l_max + 1)}
        return out

    def cmd_witness(self, cmd):
        family = []
        for item in cmd.args[0].items:
            S, q = self.ref(item.args[0]), self.ref(item.args[1])
            d = _int(item.args[2])
            label = f"{render_expr(item.args[1])} (d={d})"
            family.append(WitnessInstance(label, Inclusion(q.algebra, S), tuple(q.gens), d))
        return chevalley_witness(family, self.kwarg(cmd, "l_max", self.options.max_power)).to_json()

    def cmd_prolong(self, cmd):
        k = prolong(self.ref(cmd.args[0]))
        out = k.describe()
        out["provenance"] = k.provenance
        return out

    def cmd_realize(self, cmd):
        k = self.ref(cmd.args[0])
        T = self.kwarg(cmd, "T", self.bound(6))
        real = realize(k, T)
        law = real.truncation_law()
        return {
            "lengths": [kk.length for kk in real.kernels],
            "ideals": {str(kk.length): [[g.format() for g in I.basis] for I in kk.ideals()]
                       for kk in real.kernels},
            "tower_degrees": [kk.tower_degrees() for kk in real.kernels],
            "truncation_law": [ok for _, ok in law],
            "truncation_law_holds": all(ok for _, ok in law),
            "provenance": real.provenance,
        }

    def cmd_limitdegree(self, cmd):
        k = self.ref(cmd.args[0])
        d = self.kwarg(cmd, "d", 1)
        T = self.kwarg(cmd, "T", 3 * d)
        while k.length < T:
            k = prolong(k)
        comp = k.components[0]
        degrees = []
        for r in range(k.n * (T + 1)):
            kind = comp.kind(r)
            if kind == "free":
                degrees.append(None)
            elif kind == "value":
                degrees.append(1)
            else:
                idx = len(comp.base.steps) + comp.step_ranks.index(r)
                degrees.append(comp.field.steps[idx].degree)
        if k.n != 1:
            raise TypeMismatch("limitdegree expects a kernel in one variable")
        return {"degrees": degrees, "d": d, "value": limit_degree(LevelPresentation(tuple(degrees)), d)}

    def cmd_invclosure(self, cmd):
        R = self.ref(cmd.args[0])
        C = inversive_closure(R)
        n_max = self.kwarg(cmd, "n_max", self.bound(32))
        d = self.kwarg(cmd, "d", None)
        rows = []
        for item in cmd.args[1].items:
            q = self.ref(item)
            q_star, back, p_R, p_C = spec_transport(C, q.gens, d, n_max)
            original = R.ideal(q.gens)
            rows.append({"prime": render_expr(item), "generators": [g.format() for g in original.basis],
                         "period_ring": p_R, "period_closure": p_C,
                         "round_trip": back.equals(original)})
        return {"inversive_presentation": C.is_inversive_presentation(), "transports": rows,
                "count": len(rows), "all_round_trip": all(r["round_trip"] for r in rows),
                "periods_match": all(r["period_ring"] == r["period_closure"] for r in rows)}

    def cmd_pv(self, cmd):
        R1, R2 = self.ref(cmd.args[0]), self.ref(cmd.args[1])
        bound = self.kwarg(cmd, "bound", self.bound(4))
        D = dmatrix(R1, R2)
        twist = sigma_l_isomorphism_search(R1, R2, self.kwarg(cmd, "l_max", 2 * self.options.max_power))
        consts = [delta_constants(R, bound).to_json() for R in (R1, R2)]
        return {"rings": [R1.to_json(), R2.to_json()], "dmatrix": D.to_json(),
                "twist": twist.to_json(), "constants": consts}

    def cmd_show(self, cmd):
        obj = self.ref(cmd.args[0])
        if isinstance(obj, IdealValue):
            return {"kind": "ideal", "text": obj.algebra.ideal(obj.gens).format()}
        if hasattr(obj, "to_json"):
            return {"kind": type(obj).__name__, "value": obj.to_json()}
        if hasattr(obj, "describe"):
            return {"kind": type(obj).__name__, "value": obj.describe()}
        return {"kind": type(obj).__name__, "text": str(obj)}

    def cmd_probe(self, cmd):
        A = self.ref(cmd.args[0])
        bound = self.kwarg(cmd, "bound", self.bound(4))
        if self.kwarg(cmd, "constraint", False):
            if isinstance(A, PseudoField):
                raise TypeMismatch("constraint search needs a presented algebra")
            return constraint_search(A, bound).to_json()
        return pseudo_simple_probe(A, bound).to_json()


# ---------------------------------------------------------------------------- reports

def _lookup(result, path):
    cur = result
    for part in path:
        if isinstance(cur, list):
            cur = cur[int(part)]
        elif isinstance(cur, dict):
            cur = cur[part]
        else:
            raise KeyError(part)
    return cur


def _error_record(exc: Exception) -> dict:
    return {"type": type(exc).__name__, "message": str(exc)}


def run_scenario(sc: Scenario, options: Options | None = None, name: str = "<scenario>") -> dict:
    """Execute declarations and commands in order and build the report."""
    options = options or Options()
    interp = Interpreter(options)
    records = []
    decl_errors = []
    referenced = set()
    timing = {}
    t_all = time.perf_counter()
    for stmt in sc.statements:
        if isinstance(stmt, Decl):
            try:
                interp.env[stmt.name] = interp.construct(stmt.value) if isinstance(stmt.value, Call) \
                    else interp.ref(stmt.value)
            except (SigchevError, ValueError, ZeroDivisionError) as exc:
                interp.env[stmt.name] = exc
                decl_errors.append({"name": stmt.name, "error": _error_record(exc)})
            continue
        idx = len(records)
        text = render_expr(Call(stmt.verb, stmt.args, stmt.kwargs))
        t0 = time.perf_counter()
        referenced.update(a.id for a in stmt.args if isinstance(a, Name))
        try:
            bad = [a.id for a in stmt.args if isinstance(a, Name) and isinstance(interp.env.get(a.id), Exception)]
            if bad:
                raise interp.env[bad[0]]
            result = interp.run(stmt)
            status = "ok"
        except (SigchevError, ValueError, ZeroDivisionError, KeyError) as exc:
            result = {"error": _error_record(exc)}
            status = "error"
        timing[str(idx)] = round(time.perf_counter() - t0, 6)
        checks = []
        for ex in stmt.expects:
            want = literal(ex.value)
            try:
                got = _lookup(result, ex.path)
            except (KeyError, IndexError, ValueError):
                got = "<missing>"
            checks.append({"path": ".".join(ex.path), "expected": want, "actual": got, "passed": got == want})
        expected_error = any(c["path"].startswith("error") for c in checks)
        records.append({"index": idx, "command": text, "status": status, "result": result,
                        "expectations": checks,
                        "unexpected_error": status == "error" and not expected_error})
    timing["total"] = round(time.perf_counter() - t_all, 6)
    assertions_ok = all(c["passed"] for r in records for c in r["expectations"])
    op_errors = any(r["unexpected_error"] for r in records) or any(
        d["name"] not in referenced for d in decl_errors)
    return {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "scenario": name,
        "seed": options.seed,
        "declaration_errors": decl_errors,
        "commands": records,
        "assertions_passed": assertions_ok,
        "operation_errors": op_errors,
        "passed": assertions_ok and not op_errors,
        "timing": timing,
    }


def exit_code(report: dict, assert_mode: bool) -> int:
    if report["operation_errors"]:
        return EXIT_OPERATION
    if assert_mode and not report["assertions_passed"]:
        return EXIT_ASSERT
    return EXIT_PASS


def deterministic_view(report: dict) -> dict:
    """The report without its timing field."""
    return {k: v for k, v in report.items() if k != "timing"}


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=str)


# ---------------------------------------------------------------------------- builtins

def _builtin_dir():
    return resources.files("sigchev") / "scenarios"


def list_builtin() -> list:
    """``(name, description)`` for every embedded scenario."""
    out = []
    for entry in sorted(_builtin_dir().iterdir(), key=lambda p: p.name):
        if not entry.name.endswith(".sigma"):
            continue
        first = entry.read_text(encoding="utf-8").splitlines()[0]
        out.append((entry.name[:-6], first.lstrip("# ").strip()))
    return out


def load_builtin(name: str) -> str:
    path = _builtin_dir() / f"{name}.sigma"
    if not path.is_file():
        raise UnknownName(f"no builtin scenario named {name!r}")
    return path.read_text(encoding="utf-8")


# ---------------------------------------------------------------------------- command line

def _text_report(report: dict) -> str:
    lines = [f"scenario {report['scenario']}"]
    for d in report["declaration_errors"]:
        lines.append(f"  declaration {d['name']}: {d['error']['type']}: {d['error']['message']}")
    for r in report["commands"]:
        lines.append(f"[{r['status']}] {r['command']}")
        if r["status"] == "error":
            lines.append(f"    {r['result']['error']['type']}: {r['result']['error']['message']}")
        for c in r["expectations"]:
            mark = "pass" if c["passed"] else "FAIL"
            extra = "" if c["passed"] else f" (got {json.dumps(c['actual'], default=str)})"
            lines.append(f"    {mark} {c['path']} == {json.dumps(c['expected'])}{extra}")
    lines.append("PASSED" if report["passed"] else "FAILED")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sigchev", description="Exact difference-algebra scenarios.")
    p.add_argument("--version", action="version", version=f"sigchev {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario file or a builtin scenario")
    run.add_argument("file", nargs="?", help="path to a .sigma scenario")
    run.add_argument("--builtin", help="name of a packaged scenario (see `list`)")
    run.add_argument("--assert", dest="assert_mode", action="store_true",
                     help="exit non-zero when an expectation fails")
    run.add_argument("--json", dest="json_out", help="write the JSON report here")
    run.add_argument("--max-power", type=int, default=4, help="default search bound for powers of s")
    run.add_argument("--bound", type=int, help="default bound for periods, tower lengths and probes")
    run.add_argument("--seed", type=int, default=0, help="seed recorded in the report")
    sub.add_parser("list", help="list builtin scenarios")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for name, desc in list_builtin():
            print(f"{name:22s} {desc}")
        return EXIT_PASS
    if bool(args.file) == bool(args.builtin):
        print("give exactly one of a scenario file or --builtin NAME", file=sys.stderr)
        return EXIT_PARSE
    try:
        if args.builtin:
            text, name = load_builtin(args.builtin), args.builtin
        else:
            with open(args.file, encoding="utf-8") as fh:
                text, name = fh.read(), args.file
        sc = parse_scenario(text)
    except (ScenarioSyntaxError, UnknownName, TypeMismatch, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    opts = Options(args.max_power, args.bound, args.seed, args.assert_mode)
    report = run_scenario(sc, opts, name)
    print(_text_report(report))
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(dumps(report) + "\n")
    return exit_code(report, args.assert_mode)


if __name__ == "__main__":
    sys.exit(main())
