"""Difference kernels, prolongation, realization, and inversive closures.

A kernel of length ``t`` over a pseudo field of period ``d`` stores, for each
component ``i``, the field ``L_i = K_i(a_i, s(a_i), ..., s^t(a_i))`` as a
tower over ``K_i`` together with the value of every rank in it.  The
connecting maps send the cutoff ``t-1`` part of ``L_i`` into ``L_{i+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from . import upoly
from .errors import (
    BoundExceeded,
    ConditionOneFails,
    NotPrimeInScope,
    NotWellDefined,
    ReduciblePolynomial,
)
from .diffpoly import shift_name
from .fieldtower import (
    Algebraic,
    FieldMorphism,
    FieldTower,
    Transcendental,
    UPoly,
    extend_algebraic,
    extend_transcendental,
    factor_univariate,
    make_morphism,
)
from .polyring import AUX, Ideal, Poly, PolyRing, elimination_key, groebner_basis, reduce
from .pseudofield import PseudoField
from .sigmaideal import (
    MIRROR,
    ResidueField,
    SigmaAlgebra,
    SigmaIdeal,
    Stable,
    _frac_poly,
    sigma_stability,
    univariate_image,
)


# ---------------------------------------------------------------------------- components

@dataclass(frozen=True)
class KernelComponent:
    base: FieldTower
    field: FieldTower
    values: tuple  # raw data in ``field`` for ranks 0..n(t+1)-1
    step_ranks: tuple  # rank adjoined by each step of ``field`` beyond ``base``

    def prefix_level(self, rank_bound: int) -> int:
        """Tower level generated by the ranks below ``rank_bound``."""
        return len(self.base.steps) + sum(1 for r in self.step_ranks if r < rank_bound)

    def kind(self, rank: int) -> str:
        if rank in self.step_ranks:
            step = self.field.steps[len(self.base.steps) + self.step_ranks.index(rank)]
            return "algebraic" if isinstance(step, Algebraic) else "free"
        return "value"

    def degree_over_base(self):
        d = 1
        for s in self.field.steps[len(self.base.steps):]:
            if isinstance(s, Transcendental):
                continue
            d *= s.degree
        return d


def _namer(names):
    n = len(names)

    def name(v):
        if v >= AUX:
            return f"_z{v - AUX}"
        j, i = divmod(v, n)
        return shift_name(names[i], j)

    return name


@dataclass
class DiffKernel:
    base: PseudoField
    names: tuple
    length: int
    components: tuple
    connecting: tuple  # connecting[i]: cutoff (t-1) field of component i -> L_{i+1}
    provenance: list = dc_field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def period(self) -> int:
        return self.base.period

    def ring(self, i: int) -> PolyRing:
        return PolyRing(self.components[i].base, _namer(self.names))

    def ideal(self, i: int, cutoff: int | None = None) -> Ideal:
        """The prime ``e_i p_cutoff`` as an ideal of ``K_i[x, ..., s^cutoff(x)]``."""
        t = self.length if cutoff is None else cutoff
        return component_ideal(self.components[i], self.ring(i), self.n * (t + 1))

    def ideals(self, cutoff: int | None = None) -> list:
        return [self.ideal(i, cutoff) for i in range(self.period)]

    def tower_degrees(self) -> list:
        return [c.degree_over_base() for c in self.components]

    def describe(self) -> dict:
        out = []
        for i, c in enumerate(self.components):
            out.append({
                "component": i + 1,
                "field": str(c.field),
                "ranks": {_namer(self.names)(r): c.kind(r) for r in range(self.n * (self.length + 1))},
                "ideal": [g.format() for g in self.ideal(i).basis],
            })
        return {"length": self.length, "components": out}


def component_ideal(comp: KernelComponent, ring: PolyRing, rank_bound: int) -> Ideal:
    """Kernel of ``K_i[x_r : r < rank_bound] -> L_i``."""
    level_top = comp.prefix_level(rank_bound)
    L = comp.field.level(level_top)
    nb = len(comp.base.steps)
    step_ranks = [r for r in comp.step_ranks if r < rank_bound]
    res = ResidueField(L, nb, {}, step_ranks, [])
    gens = []
    dens = ring.one()
    for r in range(rank_bound):
        X = ring.var(r)
        if r in step_ranks:
            k = nb + step_ranks.index(r)
            step = L.steps[k]
            if isinstance(step, Transcendental):
                continue
            num, den = _frac_poly(ring, [res.to_fraction(ring, c, k) for c in step.minpoly], X)
        else:
            v = comp.field.restrict(comp.values[r], level_top)
            num, den = res.to_fraction(ring, v)
            num = den * X - num
        gens.append(num)
        if not den.is_constant():
            dens = dens * den
    ideal = Ideal(ring, gens)
    if not dens.is_constant():
        ideal = ideal.saturate(dens)
    return ideal


# ---------------------------------------------------------------------------- construction

def _build_component(base: FieldTower, ring: PolyRing, specs: dict, rank_bound: int, idx: int) -> KernelComponent:
    L = base
    values = {}
    step_ranks = []
    for r in range(rank_bound):
        spec = specs.get(r)
        if spec is None:
            L2 = extend_transcendental(L, ring.name(r))
            values = {w: L2.embed(L, x) for w, x in values.items()}
            L = L2
            values[r] = L.gen_data(len(L.steps) - 1)
            step_ranks.append(r)
            continue
        if spec.max_var() != r:
            raise NotPrimeInScope(idx + 1, f"{spec} does not have leader {ring.name(r)}")
        uni = univariate_image(ring, spec, r, L, values)
        if upoly.degree(uni) < 1:
            raise NotPrimeInScope(idx + 1, f"initial of {spec} vanishes")
        if upoly.degree(uni) == 1:
            values[r] = L.neg(upoly.monic(L, uni)[0])
            continue
        try:
            L2 = extend_algebraic(L, UPoly(L, upoly.monic(L, uni)), ring.name(r))
        except ReduciblePolynomial as exc:
            raise NotPrimeInScope(idx + 1, str(exc)) from None
        values = {w: L2.embed(L, x) for w, x in values.items()}
        L = L2
        values[r] = L.gen_data(len(L.steps) - 1)
        step_ranks.append(r)
    vals = tuple(L.embed(L, values[r]) for r in range(rank_bound))
    return KernelComponent(base, L, vals, tuple(step_ranks))


def _connecting(base: PseudoField, comps, n: int, t: int, i: int) -> FieldMorphism:
    d = len(comps)
    src, tgt = comps[i], comps[(i + 1) % d]
    level = src.prefix_level(n * t)
    source = src.field.level(level)
    sig = base.sigma_maps[i]
    images = [tgt.field.embed(tgt.base, im) for im in sig.images]
    for r in src.step_ranks:
        if r < n * t:
            images.append(tgt.values[r + n])
    return FieldMorphism(source, tgt.field, tuple(images))


def check_condition_one(kernel: DiffKernel) -> None:
    """Verify the preimage condition on every component or raise."""
    n, t, d = kernel.n, kernel.length, kernel.period
    if t == 0:
        return
    for i in range(d):
        src, tgt = kernel.components[i], kernel.components[(i + 1) % d]
        psi = kernel.connecting[i]
        try:
            make_morphism(psi.source, psi.target, [psi.target.element(im) for im in psi.images])
        except NotWellDefined as exc:
            raise ConditionOneFails(i + 1, str(exc)) from None
        level = src.prefix_level(n * t)
        for r in range(n * t):
            if r in src.step_ranks:
                continue
            v = src.field.restrict(src.values[r], level) if level < len(src.field.steps) else src.values[r]
            if psi.map_data(v) != tgt.values[r + n]:
                raise ConditionOneFails(i + 1, f"image of rank {r} disagrees with rank {r + n}")
        # ideal check: p_t(i+1) contracted to ranks >= n equals the shifted twist of p_{t-1}(i)
        lower = kernel.ideal(i, t - 1)
        sig = kernel.base.sigma_maps[i]
        ring_t = kernel.ring((i + 1) % d)
        twisted = [_twist(g, sig, n, ring_t) for g in lower.basis]
        upper = kernel.ideal((i + 1) % d, t)
        contracted = upper.eliminate(range(n)) if upper.gens else upper
        if not Ideal(ring_t, twisted).equals(Ideal(ring_t, contracted.gens)):
            raise ConditionOneFails(i + 1, "preimage of the next ideal differs from the truncated ideal")


def _twist(g: Poly, sig: FieldMorphism, n: int, ring: PolyRing) -> Poly:
    shifted = g.rename(lambda v: v + n if v < AUX else v, ring)
    if sig.source == sig.target and sig.is_identity():
        return shifted
    return shifted.map_coefficients(sig.map_data, ring)


def make_kernel(base: PseudoField, names: Sequence[str], specs: Sequence, length: int,
                sigma_images: Sequence | None = None) -> DiffKernel:
    """Build and validate a kernel.

    ``specs[i]`` lists polynomials for component ``i`` (over ``K_i``, variables
    numbered by rank); each has a distinct leader, and ranks without one are
    free.  ``sigma_images[i]`` may map a rank ``r < n*length`` to the claimed
    image of ``a_{i,r}`` in component ``i+1``.
    """
    names = tuple(names)
    n = len(names)
    d = base.period
    if len(specs) != d:
        raise ValueError(f"expected {d} component specifications")
    comps = []
    for i in range(d):
        ring = PolyRing(base.components[i], _namer(names))
        by_rank = {}
        for p in specs[i]:
            p = Poly(ring, p.terms)
            if p.max_var() in by_rank:
                raise NotPrimeInScope(i + 1, f"two polynomials with leader {ring.name(p.max_var())}")
            by_rank[p.max_var()] = p
        comps.append(_build_component(base.components[i], ring, by_rank, n * (length + 1), i))
    comps = tuple(comps)
    connecting = tuple(_connecting(base, comps, n, length, i) for i in range(d))
    if sigma_images is not None:
        for i, claimed in enumerate(sigma_images):
            tgt = comps[(i + 1) % d]
            for r, img in (claimed or {}).items():
                data = tgt.field.coerce(img)
                if data != tgt.values[r + n]:
                    raise ConditionOneFails(i + 1, f"claimed image of rank {r} is not the value of rank {r + n}")
    k = DiffKernel(base, names, length, comps, connecting, [])
    check_condition_one(k)
    return k


# ---------------------------------------------------------------------------- prolongation

def prolong(k: DiffKernel) -> DiffKernel:
    """Extend a kernel by one level choosing the lexicographically least factor."""
    n, t, d = k.n, k.length, k.period
    namer = _namer(k.names)
    new_comps = [None] * d
    new_conn = [None] * d
    log = []
    for i in range(d):
        src = k.components[i]
        tgt_idx = (i + 1) % d
        tgt = k.components[tgt_idx]
        psi = k.connecting[i]
        F = tgt.field
        values = list(tgt.values)
        step_ranks = list(tgt.step_ranks)
        images = list(psi.images)
        level = psi.source.steps.__len__()
        for r in range(n * t, n * (t + 1)):
            new_rank = r + n
            source_level = FieldTower(src.field.characteristic, src.field.steps[:level])
            cur = FieldMorphism(source_level, F, tuple(images))
            if r in src.step_ranks:
                step = src.field.steps[level]
                if isinstance(step, Transcendental):
                    F2 = extend_transcendental(F, namer(new_rank))
                    images = [F2.embed(F, x) for x in images]
                    values = [F2.embed(F, x) for x in values]
                    F = F2
                    gen = F.gen_data(len(F.steps) - 1)
                    images.append(gen)
                    values.append(gen)
                    step_ranks.append(new_rank)
                    log.append({"length": t + 1, "component": tgt_idx + 1, "rank": namer(new_rank),
                                "kind": "free", "factors": [], "chosen": None})
                else:
                    twisted = upoly.strip(F, [cur.map_data(c) for c in step.minpoly])
                    facs = factor_univariate(F, UPoly(F, twisted))
                    chosen = facs[0][0]
                    log.append({"length": t + 1, "component": tgt_idx + 1, "rank": namer(new_rank),
                                "kind": "algebraic", "twisted": upoly.fmt(F, twisted, "y"),
                                "factors": [f.format() for f, _ in facs], "chosen": chosen.format()})
                    if chosen.degree == 1:
                        root = F.neg(chosen.coeffs[0])
                        images.append(root)
                        values.append(root)
                    else:
                        F2 = FieldTower(F.characteristic, F.steps + (Algebraic(namer(new_rank), chosen.coeffs),))
                        images = [F2.embed(F, x) for x in images]
                        values = [F2.embed(F, x) for x in values]
                        F = F2
                        gen = F.gen_data(len(F.steps) - 1)
                        images.append(gen)
                        values.append(gen)
                        step_ranks.append(new_rank)
                level += 1
            else:
                v = src.values[r]
                v = src.field.restrict(v, level) if level < len(src.field.steps) else v
                values.append(cur.map_data(v))
        new_comps[tgt_idx] = KernelComponent(tgt.base, F, tuple(values), tuple(step_ranks))
        new_conn[i] = FieldMorphism(src.field, F, tuple(images))
    out = DiffKernel(k.base, k.names, t + 1, tuple(new_comps), tuple(new_conn), list(k.provenance) + log)
    return out


@dataclass
class Realization:
    kernels: list  # kernel of each length from the start to T

    def ideals(self, t: int) -> list:
        for k in self.kernels:
            if k.length == t:
                return k.ideals()
        raise KeyError(t)

    @property
    def provenance(self) -> list:
        return self.kernels[-1].provenance

    def truncation_law(self) -> list:
        """For each step, whether ``p_{t+1}`` contracted to cutoff ``t`` equals ``p_t``."""
        out = []
        for a, b in zip(self.kernels, self.kernels[1:]):
            ok = True
            n = a.n
            for i in range(a.period):
                lower = a.ideal(i)
                upper = b.ideal(i)
                cut = n * (a.length + 1)
                drop = range(cut, n * (b.length + 1))
                contracted = upper.eliminate(drop)
                ok = ok and Ideal(lower.ring, contracted.gens).equals(lower)
            out.append((a.length, ok))
        return out


def realize(k: DiffKernel, up_to: int) -> Realization:
    ks = [k]
    while ks[-1].length < up_to:
        ks.append(prolong(ks[-1]))
        check_condition_one(ks[-1])
    return Realization(ks)


# ---------------------------------------------------------------------------- inversive closure

class ClosureElement:
    """``sigma^{-shift}(rep)`` in the inversive closure."""

    __slots__ = ("closure", "rep", "shift")

    def __init__(self, closure: "InversiveClosure", rep: Poly, shift: int):
        self.closure = closure
        self.rep = rep
        self.shift = shift

    def _lift(self, other):
        if isinstance(other, ClosureElement):
            return other
        return self.closure.u(self.closure.R._as_poly(other))

    def _common(self, other):
        other = self._lift(other)
        N = max(self.shift, other.shift)
        A = self.closure.R.apply_sigma(self.rep, N - self.shift)
        B = self.closure.R.apply_sigma(other.rep, N - other.shift)
        return A, B, N

    def __add__(self, other):
        A, B, N = self._common(other)
        return self.closure.element(A + B, N)

    def __sub__(self, other):
        A, B, N = self._common(other)
        return self.closure.element(A - B, N)

    def __mul__(self, other):
        A, B, N = self._common(other)
        return self.closure.element(A * B, N)

    def __pow__(self, e: int):
        return self.closure.element(self.rep ** e, self.shift)

    def __eq__(self, other):
        if not isinstance(other, ClosureElement):
            other = self._lift(other)
        A, B, _ = self._common(other)
        return self.closure.is_zero_in_R(A - B)

    def __hash__(self):
        return hash(self.shift)

    def sigma(self, e: int = 1) -> "ClosureElement":
        if e >= 0:
            if e <= self.shift:
                return self.closure.element(self.rep, self.shift - e)
            return self.closure.element(self.closure.R.apply_sigma(self.rep, e - self.shift), 0)
        return self.closure.element(self.rep, self.shift - e)

    def __str__(self):
        r = self.closure.R.format(self.rep)
        return r if self.shift == 0 else f"s^-{self.shift}({r})"

    __repr__ = __str__


class InversiveClosure:
    """Formal inverse limit ``R -> R -> ...`` along ``sigma``, elements ``(r, n)``."""

    def __init__(self, R: SigmaAlgebra, nilpotence_bound: int = 8):
        self.R = R
        self.nilpotence_bound = nilpotence_bound
        tags = list(R.relations.gens)
        for v in range(R.n):
            tags.append(R.ring.var(MIRROR + v) - R.images[v])
        self._tag_key = elimination_key(range(R.n))
        self._tag_basis = groebner_basis(tags, self._tag_key)
        order = R.sigma_K.order()
        self._field_inverse = None if order is None else R.sigma_K.power(order - 1)

    def u(self, r: Poly) -> ClosureElement:
        return ClosureElement(self, self.R._as_poly(r), 0)

    def element(self, rep: Poly, shift: int = 0) -> ClosureElement:
        rep = self.R.relations.reduce(self.R._as_poly(rep)) if not self.R.relations.is_zero() else self.R._as_poly(rep)
        while shift > 0:
            pre = self.sigma_preimage(rep)
            if pre is None:
                break
            rep, shift = pre, shift - 1
        return ClosureElement(self, rep, shift)

    def sigma_preimage(self, r: Poly):
        """Some ``r'`` with ``sigma(r') = r`` in ``R``, or ``None``."""
        if self._field_inverse is None:
            return None
        nf = reduce(r, self._tag_basis, self._tag_key)
        if any(v < MIRROR for v in nf.variables()):
            return None
        back = nf.rename(lambda v: v - MIRROR if MIRROR <= v < AUX else v)
        if not self._field_inverse.is_identity():
            back = back.map_coefficients(self._field_inverse.map_data)
        if not self.R.relations.is_zero():
            back = self.R.relations.reduce(back)
        return back

    def is_zero_in_R(self, r: Poly) -> bool:
        """Whether ``u(r) = 0``, i.e. ``sigma^m(r) = 0`` for some ``m <= bound``."""
        cur = r
        for _ in range(self.nilpotence_bound + 1):
            if self.R.relations.contains(cur) if not self.R.relations.is_zero() else not cur.terms:
                return True
            cur = self.R.apply_sigma(cur)
        return False

    def kernel_contains(self, r: Poly) -> bool:
        return self.is_zero_in_R(self.R._as_poly(r))

    def is_inversive_presentation(self) -> bool:
        return all(self.sigma_preimage(self.R.var(v)) is not None for v in range(self.R.n))


def inversive_closure(R: SigmaAlgebra, nilpotence_bound: int = 8) -> InversiveClosure:
    return InversiveClosure(R, nilpotence_bound)


@dataclass
class TransportedPrime:
    """``q*`` in the closure: ``(r, n)`` belongs iff ``sigma^{md-n}(r)`` lies in ``q``."""

    closure: InversiveClosure
    source: tuple  # generators of q in R
    power: int
    n_max: int

    def _ideal(self) -> Ideal:
        return self.closure.R.ideal(self.source)

    def contains(self, x: ClosureElement) -> bool:
        d = self.power
        m = -(-x.shift // d)
        if m > self.n_max:
            raise BoundExceeded(f"need sigma^{m * d} but n_max = {self.n_max}")
        r = self.closure.R.apply_sigma(x.rep, m * d - x.shift)
        return self._ideal().contains(r)

    def generators(self) -> list:
        """Elements ``(g, 0)`` and ``(g, d)`` for ``g`` in q."""
        return [self.closure.element(g, j) for j in (0, self.power) for g in self.source]

    def contract(self) -> Ideal:
        """``u^{-1}(q*)`` computed from level-zero representatives of the generators."""
        R = self.closure.R
        gens = []
        for x in self.generators():
            m = -(-x.shift // self.power)
            gens.append(R.apply_sigma(x.rep, m * self.power - x.shift))
        return R.ideal(gens)

    def period(self) -> int:
        """Least ``e`` with ``sigma^{-e}(q*) = q*``, tested on generators."""
        for e in range(1, self.power + 1):
            gens = self.generators()
            if all(self.contains(g.sigma(e)) for g in gens) and all(self.contains(g.sigma(-e)) for g in gens):
                return e
        return self.power


def sigma_period(R: SigmaAlgebra, gens: Sequence[Poly], bound: int = 8):
    """Least ``e <= bound`` with ``sigma^{-e}(q) = q`` certified, else ``None``."""
    I = SigmaIdeal(R, gens)
    for e in range(1, bound + 1):
        st = sigma_stability(I, e)
        if isinstance(st, Stable) and st.reflexive:
            return e
    return None


def spec_transport(C: InversiveClosure, q: Sequence[Poly], d: int | None = None, n_max: int = 32):
    """Transport a ``sigma^d``-prime of ``R`` to the closure and back.

    Returns ``(q_star, contraction, period_R, period_closure)``.
    """
    gens = tuple(C.R._as_poly(g) for g in q)
    period_R = sigma_period(C.R, gens, bound=n_max if d is None else max(d, 1))
    if period_R is None:
        raise BoundExceeded(f"no reflexive period found up to {n_max}")
    power = d if d is not None else period_R
    if power % period_R:
        raise ValueError(f"q is not sigma^{power}-stable (period {period_R})")
    q_star = TransportedPrime(C, gens, power, n_max)
    back = q_star.contract()
    return q_star, back, period_R, q_star.period()
