"""Difference ideals: stability, membership orbits, assembly, and lift searches.

Two kinds of ambient ring are supported.

* :class:`SigmaAlgebra`: ``K[x_1..x_n]/J`` with an endomorphism given on the
  generators (and a field endomorphism on ``K``).  This is closed under the
  endomorphism, so stability can be decided and, when the coefficient map has
  finite order, preimages can be computed by elimination.
* :class:`~sigchev.diffpoly.Truncation`: a finite piece of a difference
  polynomial ring.  Shifting leaves the truncation, so callers pass a larger
  cutoff when they want stability checked.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping, Sequence

from . import upoly
from .diffpoly import DiffPolyRing, Truncation
from .errors import (
    AmbientNotClosed,
    CoefficientNotField,
    FiberNotFinite,
    NotPrimeInScope,
    NotWellDefined,
    PreimageNotComputable,
    ReduciblePolynomial,
)
from .fieldtower import (
    Algebraic,
    FieldMorphism,
    FieldTower,
    extend_algebraic,
    extend_transcendental,
    factor_univariate,
    identity_morphism,
    UPoly,
)
from .polyring import AUX, Ideal, Poly, PolyRing, lex_key, ORDERS
from .pseudofield import PseudoField

MIRROR = AUX // 2  # offset of the variable copies used for preimages


# ---------------------------------------------------------------------------- presented sigma-algebras

class SigmaAlgebra:
    """``K[names]/relations`` with ``sigma(x_i) = images[i]`` and ``sigma|K = sigma_K``.

    ``images`` and ``relations`` may be callables receiving the generators.
    """

    def __init__(self, field: FieldTower, names: Sequence[str], images: Mapping | Sequence,
                 relations: Iterable = (), sigma_K: FieldMorphism | None = None, check: bool = True):
        self.field = field
        self.names = tuple(names)
        self.sigma_K = sigma_K or identity_morphism(field)
        if self.sigma_K.source != field or self.sigma_K.target != field:
            raise ValueError("coefficient endomorphism must act on the coefficient field")
        self.ring = PolyRing(field, self._name)
        if callable(images):
            images = images(*self.gens())
        if callable(relations):
            relations = relations(*self.gens())
        if not isinstance(images, Mapping):
            images = dict(enumerate(images))
        self.images = {}
        for k, img in images.items():
            idx = k if isinstance(k, int) else self.names.index(k)
            self.images[idx] = self._as_poly(img)
        for i in range(len(self.names)):
            self.images.setdefault(i, self.var(i))
        self.relations = Ideal(self.ring, [self._as_poly(r) for r in relations])
        self._power_cache = {1: self.images}
        if check:
            for g in self.relations.gens:
                if not self.relations.contains(self.apply_sigma(g)):
                    raise NotWellDefined("<relations>", f": sigma({g}) is not a relation")

    def _name(self, v: int) -> str:
        if v >= AUX:
            return f"_z{v - AUX}"
        if v >= MIRROR:
            return self.names[v - MIRROR] + "'"
        return self.names[v]

    def _as_poly(self, p) -> Poly:
        if isinstance(p, Poly):
            return Poly(self.ring, p.terms)
        return self.ring.const(p)

    def var(self, name_or_index) -> Poly:
        i = name_or_index if isinstance(name_or_index, int) else self.names.index(name_or_index)
        return self.ring.var(i)

    def gens(self) -> list:
        return [self.var(i) for i in range(len(self.names))]

    def const(self, c) -> Poly:
        return self.ring.const(c)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def key(self):
        return lex_key

    def field_power(self, e: int) -> FieldMorphism:
        return self.sigma_K.power(e)

    def _images_power(self, e: int) -> dict:
        if e not in self._power_cache:
            prev = self._images_power(e - 1)
            self._power_cache[e] = {v: self.apply_sigma(img) for v, img in prev.items()}
        return self._power_cache[e]

    def apply_sigma(self, p: Poly, e: int = 1) -> Poly:
        if e == 0:
            return p
        if e == 1:
            m = self.sigma_K
            cmap = None if m.is_identity() else m.map_data
            return p.substitute(self.images, cmap, self.ring)
        m = self.field_power(e)
        cmap = None if m.is_identity() else m.map_data
        return p.substitute(self._images_power(e), cmap, self.ring)

    def contains(self, p: Poly) -> bool:
        return all(v < self.n for v in p.variables())

    def ideal(self, gens, order="lex") -> Ideal:
        """Ideal of the presentation ring: generators plus the relations."""
        return Ideal(self.ring, [self._as_poly(g) for g in gens] + list(self.relations.gens), order)

    def preimage(self, I: Ideal, e: int = 1) -> Ideal:
        """``sigma^{-e}(I)`` computed by elimination."""
        tau = self.field_power(e)
        order = tau.order()
        if order is None:
            raise PreimageNotComputable("coefficient endomorphism has no known finite order")
        tau_inv = tau.power(order - 1)
        imgs = self._images_power(e) if e > 1 else self.images
        gens = list(I.gens)
        for v in range(self.n):
            gens.append(self.ring.var(MIRROR + v) - imgs[v])
        elim = Ideal(self.ring, gens).eliminate(range(self.n))
        back = [g.rename(lambda v: v - MIRROR if MIRROR <= v < AUX else v) for g in elim.gens]
        if not tau_inv.is_identity():
            back = [g.map_coefficients(tau_inv.map_data) for g in back]
        return Ideal(self.ring, back + list(self.relations.gens), I.order)

    def subalgebra(self, names: Sequence[str]) -> "SigmaAlgebra":
        """The polynomial subalgebra on a prefix of the generators."""
        k = len(names)
        if tuple(names) != self.names[:k]:
            raise ValueError("subalgebra generators must be a prefix")
        imgs = {}
        for i in range(k):
            img = self.images[i]
            if any(v >= k for v in img.variables()):
                raise ValueError(f"sigma({names[i]}) leaves the subalgebra")
            imgs[i] = img
        rel = self.relations.contract_to(range(k))
        return SigmaAlgebra(self.field, names, imgs, rel.gens, self.sigma_K)

    def format(self, p: Poly) -> str:
        return p.format(lex_key)

    def __repr__(self):
        imgs = ", ".join(f"{n} -> {self.images[i]}" for i, n in enumerate(self.names))
        rel = "" if self.relations.is_zero() else f" / {self.relations}"
        return f"SigmaAlgebra({self.field}[{', '.join(self.names)}]{rel}; {imgs})"


class _TruncationAmbient:
    """Adapter giving a truncation the ambient interface."""

    def __init__(self, trunc: Truncation, larger: Truncation | None = None):
        self.trunc = trunc
        self.larger = larger
        self.ring = trunc.ring.poly_ring
        self.relations = Ideal(self.ring, [])
        self.key = lex_key
        self.dring: DiffPolyRing = trunc.ring

    def contains(self, p: Poly) -> bool:
        return self.trunc.contains(p)

    def apply_sigma(self, p: Poly, e: int = 1) -> Poly:
        return self.dring.sigma_shift(p, e)

    def ideal(self, gens, order="lex") -> Ideal:
        return Ideal(self.ring, gens, order)

    def preimage(self, I, e=1):
        raise PreimageNotComputable("preimages inside a truncation are not computed")


def _ambient(a, larger=None):
    if isinstance(a, Truncation):
        if not isinstance(a.ring.base, PseudoField) or not a.ring.base.is_field:
            raise CoefficientNotField("truncation coefficients must form a field")
        return _TruncationAmbient(a, larger)
    return a


# ---------------------------------------------------------------------------- sigma ideals

class SigmaIdeal:
    """An ideal of an ambient presentation with optional stability claims."""

    def __init__(self, ambient, generators: Iterable[Poly], claimed_period: int | None = None,
                 larger: Truncation | None = None):
        self.ambient = _ambient(ambient, larger)
        self.generators = tuple(Poly(self.ambient.ring, g.terms) for g in generators)
        for g in self.generators:
            if not self.ambient.contains(g):
                raise ValueError(f"generator {g} is not in the ambient ring")
        self.claimed_period = claimed_period
        self._ideals = {}

    def ideal(self, order="lex") -> Ideal:
        key = order if isinstance(order, str) else id(order)
        if key not in self._ideals:
            self._ideals[key] = self.ambient.ideal(self.generators, order)
        return self._ideals[key]

    def contains(self, p: Poly) -> bool:
        return self.ideal().contains(Poly(self.ambient.ring, p.terms))

    def format(self) -> str:
        return "(" + ", ".join(g.format(lex_key) for g in self.generators) + ")"

    def __str__(self):
        return self.format()


def groebner(I: SigmaIdeal, order: str = "lex") -> list:
    """Reduced Groebner basis of the ideal (generators plus relations)."""
    if order not in ORDERS:
        raise ValueError(f"unknown order {order!r}")
    return I.ideal(order).basis


def membership(I: SigmaIdeal, p: Poly) -> bool:
    return I.contains(p)


@dataclass(frozen=True)
class Stable:
    power: int
    reflexive: bool  # sigma^{-d}(I) = I certified
    flag: str = ""

    def to_json(self):
        return {"verdict": "Stable", "power": self.power, "reflexive": self.reflexive, "flag": self.flag}


@dataclass(frozen=True)
class NotStable:
    power: int
    witness: str  # generator whose image is not in the ideal
    residue: str

    def to_json(self):
        return {"verdict": "NotStable", "power": self.power, "witness": self.witness, "residue": self.residue}


def sigma_stability(I: SigmaIdeal, d: int = 1):
    """Decide ``sigma^d(I) <= I`` and, where possible, ``sigma^{-d}(I) = I``."""
    amb = I.ambient
    if isinstance(amb, _TruncationAmbient):
        target = amb.larger
        ideal = Ideal(amb.ring, I.generators)
        for g in I.generators:
            img = amb.apply_sigma(g, d)
            if not amb.trunc.contains(img):
                if target is None or not target.contains(img):
                    raise AmbientNotClosed(f"sigma^{d}({g}) leaves the truncation")
            r = ideal.reduce(img)
            if r.terms:
                return NotStable(d, g.format(), r.format())
        return Stable(d, False, "forward-stable only")
    ideal = I.ideal()
    for g in I.generators:
        r = ideal.reduce(amb.apply_sigma(g, d))
        if r.terms:
            return NotStable(d, g.format(), r.format())
    try:
        pre = amb.preimage(ideal, d)
    except PreimageNotComputable:
        return Stable(d, False, "forward-stable only")
    return Stable(d, pre.equals(ideal), "" if pre.equals(ideal) else "forward-stable only")


@dataclass(frozen=True)
class In:
    shift: int

    def to_json(self):
        return {"verdict": "In", "shift": self.shift}


@dataclass(frozen=True)
class NotInUpTo:
    bound: int

    def to_json(self):
        return {"verdict": "NotInUpTo", "bound": self.bound}


def notin_sigma(r: Poly, I: SigmaIdeal, bound: int = 8, stable_power: int | None = None):
    """Least ``i <= bound`` with ``sigma^i(r)`` in ``I``.

    When ``stable_power`` is a certified reflexive period ``d`` of ``I``,
    membership of ``sigma^i(r)`` only depends on ``i mod d`` and the scan stops
    at ``d - 1``.
    """
    amb = I.ambient
    ideal = I.ideal()
    r = Poly(amb.ring, r.terms)
    top = bound if stable_power is None else min(bound, stable_power - 1)
    cur = r
    for i in range(top + 1):
        if i > 0:
            cur = amb.apply_sigma(cur)
            if not amb.contains(cur):
                return NotInUpTo(i - 1)
        if ideal.contains(cur):
            return In(i)
    return NotInUpTo(bound)


def pseudo_prime_assemble(q: SigmaIdeal, d: int) -> SigmaIdeal:
    """``q cap sigma^{-1}(q) cap ... cap sigma^{-(d-1)}(q)``."""
    amb = q.ambient
    if isinstance(amb, _TruncationAmbient):
        raise PreimageNotComputable("pseudo-prime assembly needs a closed presentation")
    base = q.ideal()
    acc = base
    for i in range(1, d):
        acc = acc.intersect(amb.preimage(base, i))
    gens = [g for g in acc.basis if not amb.relations.contains(g)]
    out = SigmaIdeal(amb, gens)
    full = out.ideal()
    for g in full.basis:
        if not full.contains(amb.apply_sigma(g)):
            raise PreimageNotComputable("assembled ideal is not sigma-stable")
    return out


# ---------------------------------------------------------------------------- residue fields

@dataclass
class ResidueField:
    """``Frac(R/q)`` for a triangular prime ``q`` of a polynomial ring."""

    field: FieldTower
    base_levels: int
    values: dict  # var -> raw data in ``field``
    step_vars: list  # var of each step beyond the coefficient field
    initials: list  # Polys certified non-zero modulo q

    def to_fraction(self, ring: PolyRing, d, level: int | None = None):
        """Raw data -> (numerator, denominator) polynomials over the coefficients."""
        L = self.field
        k = len(L.steps) if level is None else level
        if k == self.base_levels:
            return ring.const_data(d), ring.one()
        step = L.steps[k - 1]
        X = ring.var(self.step_vars[k - 1 - self.base_levels])
        if isinstance(step, Algebraic):
            return _frac_poly(ring, [self.to_fraction(ring, c, k - 1) for c in d], X)
        num, den = d
        n1, d1 = _frac_poly(ring, [self.to_fraction(ring, c, k - 1) for c in num], X)
        n2, d2 = _frac_poly(ring, [self.to_fraction(ring, c, k - 1) for c in den], X)
        return _frac_simplify(ring, n1 * d2, d1 * n2)


def _frac_poly(ring, fracs, X):
    num, den = ring.zero(), ring.one()
    power = ring.one()
    for n, d in fracs:
        if n.terms:
            num, den = num * d + n * power * den, den * d
            num, den = _frac_simplify(ring, num, den)
        power = power * X
    return num, den


def _frac_simplify(ring, num, den):
    if den.is_constant():
        c = den.constant_data()
        return num.scale_data(ring.field.inv(c)), ring.one()
    return num, den


def residue_field(ring: PolyRing, q: Ideal, variables: Sequence[int]) -> ResidueField:
    """Build the residue field of a triangular prime by walking variables upward."""
    F = ring.field
    base_levels = len(F.steps)
    basis = q.with_order("lex").basis if q.gens else []
    if any(g.is_constant() for g in basis):
        raise NotPrimeInScope("q", "the ideal is the unit ideal")
    by_leader = {}
    for g in basis:
        by_leader.setdefault(g.max_var(), []).append(g)
    stray = set(by_leader) - set(variables)
    if stray:
        raise NotPrimeInScope("q", "generators involve variables outside the ring")
    values = {}
    step_vars = []
    initials = []
    L = F
    for v in sorted(variables):
        polys = by_leader.get(v, [])
        if not polys:
            name = ring.name(v)
            L = extend_transcendental(L, name)
            values = {w: L.embed(L.level(len(L.steps) - 1), x) for w, x in values.items()}
            values[v] = L.gen_data(len(L.steps) - 1)
            step_vars.append(v)
            continue
        g = min(polys, key=lambda p: (p.degree_in(v), lex_key(p.leading(lex_key)[0])))
        uni = univariate_image(ring, g, v, L, values)
        init = g.coefficients_in(v)[g.degree_in(v)]
        initials.append(init)
        if not uni or upoly.degree(uni) < 1:
            raise NotPrimeInScope("q", f"initial of {g} vanishes on the lower variables")
        if upoly.degree(uni) == 1:
            uni = upoly.monic(L, uni)
            values[v] = L.neg(uni[0])
        else:
            try:
                L2 = extend_algebraic(L, UPoly(L, upoly.monic(L, uni)), ring.name(v))
            except ReduciblePolynomial as exc:
                raise NotPrimeInScope("q", str(exc)) from None
            values = {w: L2.embed(L, x) for w, x in values.items()}
            L = L2
            values[v] = L.gen_data(len(L.steps) - 1)
            step_vars.append(v)
        for other in polys:
            if other is g:
                continue
            if evaluate_at(ring, other, L, values) != L.zero:
                raise NotPrimeInScope("q", f"{other} does not vanish on the triangular root")
    res = ResidueField(L, base_levels, values, step_vars, initials)
    prod = ring.one()
    for i in initials:
        if not i.is_constant():
            prod = prod * i
    if not prod.is_constant() and not q.saturate(prod).equals(q):
        raise NotPrimeInScope("q", "ideal is not saturated by its initials")
    return res


def evaluate_at(ring, p: Poly, L: FieldTower, values: dict):
    F = ring.field
    acc = L.zero
    for m, c in p.terms.items():
        t = L.embed(F, c)
        for v, e in m:
            t = L.mul(t, L.pow(values[v], e))
        acc = L.add(acc, t)
    return acc


def univariate_image(ring, p: Poly, v: int, L: FieldTower, values: dict):
    coeffs = p.coefficients_in(v)
    top = max(coeffs)
    out = [L.zero] * (top + 1)
    for e, c in coeffs.items():
        out[e] = evaluate_at(ring, c, L, values)
    return upoly.strip(L, out)


# ---------------------------------------------------------------------------- lift search

@dataclass(frozen=True)
class Inclusion:
    """``R = K[r-vars] -> S = K[r-vars, s-vars]/J`` sharing variable indices."""

    R: SigmaAlgebra
    S: SigmaAlgebra

    def __post_init__(self):
        k = self.R.n
        if self.S.names[:k] != self.R.names or self.S.field != self.R.field:
            raise ValueError("R must be presented on a prefix of the generators of S")
        for i in range(k):
            if Poly(self.S.ring, self.R.images[i].terms) != self.S.images[i]:
                raise ValueError(f"sigma on {self.R.names[i]} differs between R and S")
        if self.R.sigma_K != self.S.sigma_K:
            raise ValueError("coefficient endomorphisms differ")

    @property
    def extra(self) -> list:
        return list(range(self.R.n, self.S.n))


@dataclass
class Lift:
    generators: list  # rendered reduced Groebner basis
    ideal: Ideal
    cycle_length: int  # l: lift is sigma^{l d}-prime
    minimal_power: int  # l * d
    period: int  # least e with sigma^{-e}(q') = q'
    factor: str

    def to_json(self):
        return {"generators": self.generators, "l": self.cycle_length,
                "minimal_power": self.minimal_power, "period": self.period, "factor": self.factor}


@dataclass
class LiftReport:
    source: str
    power: int
    residue_field: str
    fiber_polynomial: str
    factors: list
    lifts: list  # every prime above q, sorted by rendering
    permutation: list  # permutation[j] = k with sigma^d(q'_k) <= q'_j
    l_max: int
    source_prime_certified: bool = True
    source_stability: dict = dc_field(default_factory=dict)

    def lifts_at(self, power: int) -> list:
        """Lifts that are ``sigma^power``-prime."""
        return [lf for lf in self.lifts if power % lf.minimal_power == 0]

    def reported(self) -> list:
        return [lf for lf in self.lifts if lf.cycle_length <= self.l_max]

    def minimal_l(self):
        ls = [lf.cycle_length for lf in self.reported()]
        return min(ls) if ls else None

    def to_json(self):
        return {
            "source": self.source,
            "power": self.power,
            "residue_field": self.residue_field,
            "fiber_polynomial": self.fiber_polynomial,
            "factors": self.factors,
            "lifts": [lf.to_json() for lf in self.reported()],
            "permutation": self.permutation,
            "l_max": self.l_max,
            "minimal_l": self.minimal_l(),
            "source_stability": self.source_stability,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _in_ideal_all(gens, ideal: Ideal) -> bool:
    return all(ideal.contains(g) for g in gens)


def lift_search(inc: Inclusion, q: SigmaIdeal | Sequence[Poly], d: int = 1, l_max: int = 4) -> LiftReport:
    """Primes of ``S`` above the ``sigma^d``-prime ``q`` of ``R`` and their periods."""
    R, S = inc.R, inc.S
    q_gens = list(q.generators) if isinstance(q, SigmaIdeal) else list(q)
    q_gens = [Poly(R.ring, g.terms) for g in q_gens]
    q_sig = SigmaIdeal(R, q_gens)
    stab = sigma_stability(q_sig, d)
    if not isinstance(stab, Stable):
        raise NotPrimeInScope("q", f"not sigma^{d}-stable: {stab.witness}")
    qR = q_sig.ideal()
    res = residue_field(R.ring, qR, range(R.n))
    L = res.field
    extra = inc.extra
    q_in_S = [Poly(S.ring, g.terms) for g in qR.basis]
    if not extra:
        ideal = Ideal(S.ring, q_in_S + list(S.relations.gens))
        lift = Lift([g.format() for g in ideal.basis], ideal, 1, d, _period(S, ideal, qR, R, d), "1")
        return LiftReport(q_sig.format(), d, str(L), "1", ["1"], [lift], [0], l_max,
                          source_stability=stab.to_json())
    if len(extra) != 1:
        raise FiberNotFinite("only single-generator fibres are supported")
    s = extra[0]
    values = dict(res.values)
    fiber = ()
    for g in S.relations.basis:
        uni = univariate_image(S.ring, g, s, L, values) if s in g.variables() else \
            upoly.const(L, evaluate_at(S.ring, g, L, values))
        fiber = upoly.gcd(L, fiber, uni) if fiber else upoly.monic(L, uni)
    if not fiber:
        raise FiberNotFinite("the fibre polynomial vanishes identically")
    if upoly.degree(fiber) == 0:
        return LiftReport(q_sig.format(), d, str(L), "1", [], [], [], l_max,
                          source_stability=stab.to_json())
    facs = factor_univariate(L, UPoly(L, fiber))
    X = S.ring.var(s)
    lifts = []
    for g, _mult in facs:
        fracs = [res.to_fraction(S.ring, c) for c in g.coeffs]
        dens = [den for _, den in fracs if not den.is_constant()]
        D = S.ring.one()
        for den in dens:
            D = D * den
        G = S.ring.zero()
        for k, (num, den) in enumerate(fracs):
            mult = S.ring.one()
            for other in dens:
                if other is not den:
                    mult = mult * other
            G = G + num * mult * (X ** k)
        ideal = Ideal(S.ring, q_in_S + list(S.relations.gens) + [G])
        if not D.is_constant():
            ideal = ideal.saturate(D)
        contracted = ideal.eliminate([s])
        contracted = Ideal(R.ring, [Poly(R.ring, p.terms) for p in contracted.gens])
        if not contracted.equals(qR):
            raise NotPrimeInScope("lift", f"contraction of the lift over {g} differs from q")
        lifts.append((ideal, g.format(S.ring.name(s))))
    lifts.sort(key=lambda t: [p.format() for p in t[0].basis])
    n = len(lifts)
    perm = []
    for j in range(n):
        target = lifts[j][0]
        found = None
        for k in range(n):
            imgs = [S.apply_sigma(p, d) for p in lifts[k][0].basis]
            if _in_ideal_all(imgs, target):
                found = k
                break
        if found is None:
            raise NotPrimeInScope("lift", "sigma^d does not permute the primes above q")
        perm.append(found)
    out = []
    for j, (ideal, fac) in enumerate(lifts):
        c, k = 1, perm[j]
        while k != j:
            k = perm[k]
            c += 1
            if c > n:
                break
        gens = [p.format() for p in ideal.basis]
        out.append(Lift(gens, ideal, c, c * d, _period(S, ideal, qR, R, c * d), fac))
    return LiftReport(q_sig.format(), d, str(L), upoly.fmt(L, fiber, S.ring.name(s)),
                      [f.format(S.ring.name(s)) for f, _ in facs], out, perm, l_max,
                      source_stability=stab.to_json())


def _period(S: SigmaAlgebra, ideal: Ideal, qR: Ideal, R: SigmaAlgebra, bound: int) -> int:
    """Least e dividing ``bound`` with sigma^e(q') <= q' and sigma^e(q) <= q."""
    for e in range(1, bound + 1):
        if bound % e:
            continue
        if not _in_ideal_all([R.apply_sigma(p, e) for p in qR.basis], qR):
            continue
        if _in_ideal_all([S.apply_sigma(p, e) for p in ideal.basis], ideal):
            return e
    return bound


# ---------------------------------------------------------------------------- witnesses

@dataclass(frozen=True)
class WitnessInstance:
    label: str
    inclusion: Inclusion
    prime: tuple  # generators in R
    power: int


@dataclass
class WitnessTable:
    rows: list  # (label, d, minimal l or None, lift counts per power)
    uniform_l: int | None
    naive_holds: bool
    l_max: int

    def to_json(self):
        return {
            "rows": [{"prime": lab, "power": d, "minimal_l": l, "lift_counts": counts}
                     for lab, d, l, counts in self.rows],
            "uniform_l": self.uniform_l,
            "naive_holds": self.naive_holds,
            "l_max": self.l_max,
        }


def chevalley_witness(family: Sequence[WitnessInstance], l_max: int = 4) -> WitnessTable:
    rows = []
    options = []
    for inst in family:
        rep = lift_search(inst.inclusion, list(inst.prime), inst.power, l_max)
        ls = sorted({lf.cycle_length for lf in rep.reported()})
        counts = {str(inst.power * l): len(rep.lifts_at(inst.power * l)) for l in range(1, l_max + 1)}
        rows.append((inst.label, inst.power, ls[0] if ls else None, counts))
        options.append(ls)
    uniform = None
    for l in range(1, l_max + 1):
        if all(any(l % c == 0 for c in ls) for ls in options):
            uniform = l
            break
    naive = all(1 in ls for ls in options)
    return WitnessTable(rows, uniform, naive, l_max)
