"""Independent checks built on sympy, shared by the test modules."""

from fractions import Fraction

import sympy


def sym(v: int) -> sympy.Symbol:
    return sympy.Symbol(f"v{v}")


def to_sympy(p) -> sympy.Expr:
    """Rational-coefficient Poly to a sympy expression in symbols v0, v1, ..."""
    expr = sympy.Integer(0)
    for mono, c in p.terms.items():
        c = Fraction(c)
        term = sympy.Rational(c.numerator, c.denominator)
        for v, e in mono:
            term *= sym(v) ** e
        expr += term
    return expr


def eliminate(gens, drop, keep):
    """Reduced lex basis of the contraction of (gens) to the variables ``keep``."""
    exprs = [to_sympy(g) for g in gens]
    if not exprs:
        return []
    order = [sym(v) for v in sorted(drop, reverse=True)] + [sym(v) for v in sorted(keep, reverse=True)]
    G = sympy.groebner(exprs, *order, order="lex")
    keep_syms = {sym(v) for v in keep}
    return [g for g in G.exprs if g.free_symbols <= keep_syms]


def same_ideal(a, b, variables):
    syms = [sym(v) for v in sorted(variables, reverse=True)]
    if not a or not b:
        return not a and not b
    Ga = sympy.groebner(a, *syms, order="lex")
    Gb = sympy.groebner(b, *syms, order="lex")
    return list(Ga.exprs) == list(Gb.exprs)


def divide_by_one(p_terms: dict, g_terms: dict, nvars: int) -> dict:
    """Remainder of naive multivariate division by a single polynomial (lex order)."""

    def lex(m):
        exps = dict(m)
        return tuple(exps.get(v, 0) for v in range(nvars))

    def lead(f):
        return max(f, key=lex)

    rem = {}
    f = dict(p_terms)
    lg = lead(g_terms)
    eg = dict(lg)
    while f:
        lf = lead(f)
        ef = dict(lf)
        if all(ef.get(v, 0) >= e for v, e in eg.items()):
            q = {v: ef.get(v, 0) - eg.get(v, 0) for v in range(nvars)}
            c = f[lf] / g_terms[lg]
            for m, cm in g_terms.items():
                prod = dict(m)
                for v, e in q.items():
                    prod[v] = prod.get(v, 0) + e
                mm = tuple(sorted((v, e) for v, e in prod.items() if e))
                f[mm] = f.get(mm, 0) - c * cm
                if f[mm] == 0:
                    del f[mm]
        else:
            rem[lf] = f.pop(lf)
    return rem
