"""Sparse multivariate polynomials over a field tower and Buchberger's algorithm.

Variables are non-negative integers (``index``); the ring carries a naming
function so that the same machinery serves plain polynomial rings and
difference polynomial rings, where the index encodes the rank of
``s^j(x_i)``.  Auxiliary variables used for elimination tricks live at
indices ``>= AUX``.

A monomial is a tuple of ``(var, exp)`` pairs sorted by ``var`` ascending.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .fieldtower import FieldElement, FieldTower

AUX = 1 << 20

ONE = ()


# ---------------------------------------------------------------------------- monomials

def mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for v, e in b:
        out[v] = out.get(v, 0) + e
    return tuple(sorted(out.items()))


def mono_divides(a, b) -> bool:
    """Whether ``a`` divides ``b``."""
    db = dict(b)
    return all(db.get(v, 0) >= e for v, e in a)


def mono_div(b, a):
    """``b / a``; assumes divisibility."""
    out = dict(b)
    for v, e in a:
        r = out[v] - e
        if r:
            out[v] = r
        else:
            del out[v]
    return tuple(sorted(out.items()))


def mono_lcm(a, b):
    out = dict(a)
    for v, e in b:
        if out.get(v, 0) < e:
            out[v] = e
    return tuple(sorted(out.items()))


def mono_coprime(a, b) -> bool:
    va = {v for v, _ in a}
    return not any(v in va for v, _ in b)


def mono_degree(m) -> int:
    return sum(e for _, e in m)


def lex_key(m):
    """Lexicographic order, higher variable index is more significant."""
    return tuple(reversed(m))


def degrevlex_key(m):
    return (mono_degree(m), tuple((v, -e) for v, e in m))


def elimination_key(eliminate: Iterable[int]):
    """Lex order in which every variable of ``eliminate`` beats the others."""
    elim = frozenset(eliminate)

    def key(m):
        return (tuple(reversed([t for t in m if t[0] in elim])),
                tuple(reversed([t for t in m if t[0] not in elim])))

    return key


ORDERS = {"lex": lex_key, "degrevlex": degrevlex_key}


# ---------------------------------------------------------------------------- ring and polys

def default_namer(v: int) -> str:
    if v >= AUX:
        return f"_z{v - AUX}"
    return f"x{v}"


@dataclass(frozen=True, eq=False)
class PolyRing:
    """Polynomial ring over ``field`` with variables named by ``namer``."""

    field: FieldTower
    namer: Callable[[int], str] = default_namer

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.field == other.field and self.namer == other.namer

    def __hash__(self):
        return hash(self.field)

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        d = self.field.coerce(c)
        return Poly(self, {} if d == self.field.zero else {ONE: d})

    def const_data(self, d) -> "Poly":
        return Poly(self, {} if d == self.field.zero else {ONE: d})

    def var(self, v: int, exp: int = 1) -> "Poly":
        return Poly(self, {((v, exp),): self.field.one})

    def name(self, v: int) -> str:
        return self.namer(v)

    def with_field(self, field: FieldTower) -> "PolyRing":
        return PolyRing(field, self.namer)


class Poly:
    """An immutable sparse polynomial; ``terms`` maps monomials to raw coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping):
        self.ring = ring
        self.terms = dict(terms)
        self._hash = None

    # basic protocol ---------------------------------------------------------
    @property
    def field(self) -> FieldTower:
        return self.ring.field

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, FieldElement)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return self.ring.const(other)

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        F = self.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            if m in out:
                s = F.add(out[m], c)
                if s == F.zero:
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return Poly(self.ring, {m: F.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        F = self.field
        out = {}
        z = F.zero
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                c = F.mul(c1, c2)
                if m in out:
                    c = F.add(out[m], c)
                if c == z:
                    out.pop(m, None)
                else:
                    out[m] = c
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale_data(self, c) -> "Poly":
        F = self.field
        if c == F.zero:
            return self.ring.zero()
        return Poly(self.ring, {m: F.mul(c, a) for m, a in self.terms.items()})

    def mul_term(self, mono, c) -> "Poly":
        F = self.field
        return Poly(self.ring, {mono_mul(m, mono): F.mul(a, c) for m, a in self.terms.items()})

    # structure --------------------------------------------------------------
    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def max_var(self) -> int:
        vs = self.variables()
        return max(vs) if vs else -1

    def degree_in(self, v: int) -> int:
        return max((dict(m).get(v, 0) for m in self.terms), default=-1 if not self.terms else 0)

    def total_degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(m == ONE for m in self.terms)

    def constant_data(self):
        return self.terms.get(ONE, self.field.zero)

    def leading(self, key):
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def monic(self, key=lex_key) -> "Poly":
        if not self.terms:
            return self
        _, c = self.leading(key)
        return self.scale_data(self.field.inv(c))

    def coefficients_in(self, v: int) -> dict:
        """View as a univariate polynomial in ``v``: exponent -> Poly."""
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.pop(v, 0)
            rest = tuple(sorted(d.items()))
            out.setdefault(e, {})[rest] = c
        return {e: Poly(self.ring, t) for e, t in out.items()}

    # transformations --------------------------------------------------------
    def rename(self, f: Callable[[int], int], ring: PolyRing | None = None) -> "Poly":
        ring = ring or self.ring
        out = {}
        F = self.field
        for m, c in self.terms.items():
            nm = {}
            for v, e in m:
                w = f(v)
                nm[w] = nm.get(w, 0) + e
            key = tuple(sorted(nm.items()))
            if key in out:
                c = F.add(out[key], c)
                if c == F.zero:
                    del out[key]
                    continue
            out[key] = c
        return Poly(ring, out)

    def map_coefficients(self, f: Callable, ring: PolyRing | None = None) -> "Poly":
        """Apply ``f`` to each raw coefficient; ``f`` returns raw data of the target ring."""
        ring = ring or self.ring
        z = ring.field.zero
        out = {}
        for m, c in self.terms.items():
            d = f(c)
            if d != z:
                out[m] = d
        return Poly(ring, out)

    def substitute(self, images: Mapping[int, "Poly"], coeff_map: Callable | None = None,
                   ring: PolyRing | None = None) -> "Poly":
        """Ring morphism: variable ``v`` goes to ``images[v]`` (or itself)."""
        ring = ring or self.ring
        acc = ring.zero()
        cache = {}
        for m, c in self.terms.items():
            cd = coeff_map(c) if coeff_map else c
            term = ring.const_data(cd)
            if not term:
                continue
            for v, e in m:
                img = images.get(v)
                if img is None:
                    term = term.mul_term(((v, e),), ring.field.one)
                else:
                    if (v, e) not in cache:
                        cache[(v, e)] = img ** e
                    term = term * cache[(v, e)]
            acc = acc + term
        return acc

    def evaluate(self, point: Mapping[int, object]):
        """Evaluate at raw field data for every variable occurring."""
        F = self.field
        acc = F.zero
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t = F.mul(t, F.pow(point[v], e))
            acc = F.add(acc, t)
        return acc

    # printing ---------------------------------------------------------------
    def format(self, key=lex_key) -> str:
        if not self.terms:
            return "0"
        F = self.field
        parts = []
        for m in sorted(self.terms, key=key, reverse=True):
            c = self.terms[m]
            ms = "*".join(self.ring.name(v) if e == 1 else f"{self.ring.name(v)}^{e}" for v, e in reversed(m))
            cs = F.format(c)
            if not ms:
                parts.append(cs)
            elif cs == "1":
                parts.append(ms)
            elif cs == "-1":
                parts.append("-" + ms)
            elif F.format_is_atomic(c):
                parts.append(f"{cs}*{ms}")
            else:
                parts.append(f"({cs})*{ms}")
        return " + ".join(parts).replace("+ -", "- ")

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Poly({self.format()})"


# ---------------------------------------------------------------------------- reduction

def reduce(p: Poly, basis: list, key) -> Poly:
    """Full normal form of ``p`` modulo ``basis`` (monic polys) w.r.t. ``key``."""
    if not basis or not p.terms:
        return p
    F = p.field
    z = F.zero
    leads = [(g.leading(key)[0], g) for g in basis]
    work = dict(p.terms)
    rem = {}
    while work:
        m = max(work, key=key)
        c = work[m]
        for lm, g in leads:
            if mono_divides(lm, m):
                q = mono_div(m, lm)
                for gm, gc in g.terms.items():
                    t = mono_mul(gm, q)
                    val = F.sub(work.get(t, z), F.mul(c, gc))
                    if val == z:
                        work.pop(t, None)
                    else:
                        work[t] = val
                break
        else:
            rem[m] = c
            del work[m]
    return Poly(p.ring, rem)


def _spoly(f: Poly, g: Poly, key) -> Poly:
    mf, _ = f.leading(key)
    mg, _ = g.leading(key)
    lcm = mono_lcm(mf, mg)
    one = f.field.one
    return f.mul_term(mono_div(lcm, mf), one) - g.mul_term(mono_div(lcm, mg), one)


def groebner_basis(polys: Iterable[Poly], key) -> list:
    """Reduced Groebner basis (monic, sorted descending by leading monomial)."""
    G = []
    for p in polys:
        if p.terms:
            G.append(p.monic(key))
    if not G:
        return []
    G = _autoreduce(G, key)
    if len(G) == 1 and G[0].is_constant():
        return G
    pairs = [(i, j) for i in range(len(G)) for j in range(i)]
    while pairs:
        pairs.sort(key=lambda ij: key(mono_lcm(G[ij[0]].leading(key)[0], G[ij[1]].leading(key)[0])))
        i, j = pairs.pop(0)
        mi, mj = G[i].leading(key)[0], G[j].leading(key)[0]
        if mono_coprime(mi, mj):
            continue
        if _chain_skip(i, j, G, pairs, key):
            continue
        r = reduce(_spoly(G[i], G[j], key), G, key)
        if r.terms:
            if r.is_constant():
                return [r.ring.one()]
            G.append(r.monic(key))
            n = len(G) - 1
            pairs.extend((n, k) for k in range(n))
    return _interreduce(G, key)


def _chain_skip(i, j, G, pending, key) -> bool:
    """Buchberger's chain criterion."""
    lcm = mono_lcm(G[i].leading(key)[0], G[j].leading(key)[0])
    pend = set(pending)
    for k in range(len(G)):
        if k in (i, j):
            continue
        if not mono_divides(G[k].leading(key)[0], lcm):
            continue
        ik = (max(i, k), min(i, k))
        jk = (max(j, k), min(j, k))
        if ik not in pend and jk not in pend:
            return True
    return False


def _autoreduce(G: list, key) -> list:
    """Reduce each generator by the others until nothing changes; keeps the ideal."""
    G = list(dict.fromkeys(G))
    changed = True
    while changed:
        changed = False
        for idx in range(len(G)):
            g = G[idx]
            r = reduce(g, G[:idx] + G[idx + 1:], key)
            if r != g:
                G = G[:idx] + G[idx + 1:]
                if r.terms:
                    if r.is_constant():
                        return [r.ring.one()]
                    G.append(r.monic(key))
                changed = True
                break
    return G


def _interreduce(G: list, key) -> list:
    G = [g for g in G if g.terms]
    changed = True
    while changed:
        changed = False
        G.sort(key=lambda g: key(g.leading(key)[0]))
        for idx, g in enumerate(G):
            others = G[:idx] + G[idx + 1:]
            lm = g.leading(key)[0]
            if any(mono_divides(o.leading(key)[0], lm) for o in others):
                G.pop(idx)
                changed = True
                break
    out = []
    for idx, g in enumerate(G):
        others = G[:idx] + G[idx + 1:]
        r = reduce(g, others, key)
        out.append(r.monic(key))
    if any(g.is_constant() and g.terms for g in out):
        return [out[0].ring.one()]
    out.sort(key=lambda g: key(g.leading(key)[0]), reverse=True)
    return out


# ---------------------------------------------------------------------------- ideals

class Ideal:
    """A finitely generated ideal with a lazily computed Groebner basis."""

    def __init__(self, ring: PolyRing, gens: Iterable[Poly], order: str | Callable = "lex"):
        self.ring = ring
        self.gens = tuple(g for g in gens if g.terms)
        self.order = order
        self.key = ORDERS[order] if isinstance(order, str) else order
        self._gb = None

    @property
    def basis(self) -> list:
        if self._gb is None:
            self._gb = groebner_basis(self.gens, self.key)
        return self._gb

    def reduce(self, p: Poly) -> Poly:
        return reduce(p, self.basis, self.key)

    def contains(self, p: Poly) -> bool:
        return not self.reduce(p).terms

    __contains__ = contains

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.basis)

    def is_zero(self) -> bool:
        return not self.gens

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.gens)

    def equals(self, other: "Ideal") -> bool:
        return self.contains_ideal(other) and other.contains_ideal(self)

    def with_order(self, order) -> "Ideal":
        return Ideal(self.ring, self.gens, order)

    def eliminate(self, variables: Iterable[int]) -> "Ideal":
        """Contraction to the subring in the remaining variables."""
        elim = frozenset(variables)
        gb = groebner_basis(self.gens, elimination_key(elim))
        kept = [g for g in gb if not (g.variables() & elim)]
        return Ideal(self.ring, kept, self.order)

    def contract_to(self, keep: Iterable[int]) -> "Ideal":
        keep = frozenset(keep)
        drop = set()
        for g in self.gens:
            drop |= g.variables() - keep
        return self.eliminate(drop) if drop else Ideal(self.ring, self.gens, self.order)

    def intersect(self, other: "Ideal") -> "Ideal":
        t = self.ring.var(_fresh_aux(self.gens + other.gens))
        one_minus = self.ring.one() - t
        gens = [t * g for g in self.gens] + [one_minus * g for g in other.gens]
        return Ideal(self.ring, gens, self.order).eliminate([t.max_var()])

    def saturate(self, f: Poly) -> "Ideal":
        """``I : f^infinity``."""
        if f.is_constant():
            return Ideal(self.ring, self.gens, self.order)
        z = self.ring.var(_fresh_aux(self.gens + (f,)))
        gens = list(self.gens) + [z * f - self.ring.one()]
        return Ideal(self.ring, gens, self.order).eliminate([z.max_var()])

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, self.gens + other.gens, self.order)

    def map(self, f: Callable[[Poly], Poly]) -> "Ideal":
        return Ideal(self.ring, [f(g) for g in self.gens], self.order)

    def variables(self) -> set:
        out = set()
        for g in self.gens:
            out |= g.variables()
        return out

    def canonical_gens(self) -> list:
        return self.basis

    def format(self) -> str:
        return "(" + ", ".join(g.format(self.key) for g in self.basis) + ")"

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Ideal{self.format()}"


def _fresh_aux(polys) -> int:
    used = {v for p in polys for v in p.variables() if v >= AUX}
    k = AUX
    while k in used:
        k += 1
    return k
