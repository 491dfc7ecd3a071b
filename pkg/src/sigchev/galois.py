"""Derivations commuting with an endomorphism, rank-one Picard-Vessiot rings,
and constrained-extension probes.

Everything is exact.  Fields are :class:`~sigchev.fieldtower.FieldTower`
objects; a derivation is fixed by its values on the transcendental
generators and extended to algebraic steps through their minimal
polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from . import upoly
from .errors import (
    BaseMismatch,
    CommutationFails,
    NoSigmaStructure,
    OutOfScope,
    SampleDependent,
)
from .fieldtower import (
    Algebraic,
    FieldElement,
    FieldMorphism,
    FieldTower,
    Transcendental,
    UPoly,
    factor_univariate,
    make_morphism,
)
from .polyring import AUX, Ideal, Poly, PolyRing, mono_div
from .pseudofield import PseudoField
from .sigmaideal import SigmaAlgebra, SigmaIdeal, Stable, sigma_stability


# ---------------------------------------------------------------------------- derivations

class Derivation:
    """A derivation of a field tower, trivial on the prime field.

    ``images`` maps step indices to raw top-level data.  Transcendental steps
    without an image are constants; algebraic steps are always derived from
    their minimal polynomial.
    """

    def __init__(self, field: FieldTower, images: Mapping[int, object] | None = None):
        self.field = field
        self.images = dict(images or {})
        self._gen_cache = {}

    def gen_image(self, k: int):
        if k in self._gen_cache:
            return self._gen_cache[k]
        F = self.field
        step = F.steps[k]
        if isinstance(step, Transcendental):
            out = self.images.get(k, F.zero)
        else:
            alpha = F.gen_data(k)
            lower = F.level(k)
            coeffs = step.minpoly
            twisted = F.zero
            slope = F.zero
            power = F.one
            for i, c in enumerate(coeffs):
                twisted = F.add(twisted, F.mul(self.apply(c, k), power))
                if i + 1 < len(coeffs):
                    nxt = F.embed(lower, coeffs[i + 1])
                    slope = F.add(slope, F.mul(F.mul(F.from_int(i + 1), nxt), power))
                power = F.mul(power, alpha)
            out = F.neg(F.div(twisted, slope))
        self._gen_cache[k] = out
        return out

    def _poly_value(self, coeffs, k: int):
        """(value, derivative) of a polynomial over level ``k`` at the step-``k`` generator."""
        F = self.field
        lower = F.level(k)
        g = F.gen_data(k)
        dg = self.gen_image(k)
        val, dval = F.zero, F.zero
        for c in reversed(coeffs):
            dval = F.add(F.add(F.mul(dval, g), F.mul(val, dg)), self.apply(c, k))
            val = F.add(F.mul(val, g), F.embed(lower, c))
        return val, dval

    def apply(self, d, k: int | None = None):
        """Derivative of raw data living at level ``k`` (default: top), as top data."""
        F = self.field
        k = len(F.steps) if k is None else k
        if k == 0:
            return F.zero
        step = F.steps[k - 1]
        if isinstance(step, Algebraic):
            return self._poly_value(d, k - 1)[1]
        num, den = d
        n, dn = self._poly_value(num, k - 1)
        m, dm = self._poly_value(den, k - 1)
        return F.div(F.sub(F.mul(dn, m), F.mul(n, dm)), F.mul(m, m))

    def __call__(self, x) -> FieldElement:
        return self.field.element(self.apply(self.field.coerce(x)))

    def is_zero(self) -> bool:
        return all(self.gen_image(k) == self.field.zero for k in range(len(self.field.steps)))

    def extend(self, field: FieldTower, images: Mapping[int, object] | None = None) -> "Derivation":
        """The same derivation on a larger tower, with images for new steps."""
        imgs = {k: field.embed(self.field, v) for k, v in self.images.items()}
        imgs.update(images or {})
        return Derivation(field, imgs)


# ---------------------------------------------------------------------------- delta-sigma fields

@dataclass
class DeltaSigmaRing:
    field: FieldTower
    delta: Derivation
    sigma: FieldMorphism
    certificate: dict = dc_field(default_factory=dict)  # generator -> (delta sigma, sigma delta)

    def check_leibniz(self, samples: Sequence) -> bool:
        F, D = self.field, self.delta
        data = [F.coerce(s) for s in samples]
        for a in data:
            for b in data:
                lhs = D.apply(F.mul(a, b))
                rhs = F.add(F.mul(D.apply(a), b), F.mul(a, D.apply(b)))
                if lhs != rhs:
                    return False
        return True


def _step_index(F: FieldTower, key) -> int:
    return key if isinstance(key, int) else F.names.index(key)


def _commutation(F: FieldTower, delta: Derivation, sigma: FieldMorphism) -> dict:
    cert = {}
    for k, step in enumerate(F.steps):
        g = F.gen_data(k)
        ds = delta.apply(sigma.map_data(g))
        sd = sigma.map_data(delta.gen_image(k))
        if ds != sd:
            raise CommutationFails(step.name)
        cert[step.name] = F.format(ds)
    return cert


def make_deltasigma_field(field: FieldTower, delta_images: Mapping | None = None,
                          sigma_images: Mapping | FieldMorphism | None = None) -> DeltaSigmaRing:
    """Validate ``delta sigma = sigma delta`` on every generator."""
    imgs = {}
    for key, v in (delta_images or {}).items():
        k = _step_index(field, key)
        if isinstance(field.steps[k], Algebraic):
            raise ValueError(f"derivative of algebraic generator {field.steps[k].name} is determined")
        imgs[k] = field.coerce(v)
    delta = Derivation(field, imgs)
    if isinstance(sigma_images, FieldMorphism):
        sigma = sigma_images
    else:
        given = {_step_index(field, k): v for k, v in (sigma_images or {}).items()}
        images = [given.get(k, field.element(field.gen_data(k))) for k in range(len(field.steps))]
        sigma = make_morphism(field, field, images)
    cert = _commutation(field, delta, sigma)
    return DeltaSigmaRing(field, delta, sigma, cert)


# ---------------------------------------------------------------------------- Picard-Vessiot rings

def _transcendental_steps(F: FieldTower) -> list:
    return [k for k, s in enumerate(F.steps) if isinstance(s, Transcendental)]


def _monomial_candidates(F: FieldTower, bound: int):
    """``t^m`` for each transcendental generator and ``0 < |m| <= bound``."""
    for m in range(1, bound + 1):
        for sign in (1, -1):
            for k in _transcendental_steps(F):
                yield F.pow(F.gen_data(k), sign * m)


@dataclass
class PVRing:
    base: DeltaSigmaRing
    a: object  # raw data in base.field
    field: FieldTower  # fraction field of the ring
    y: object  # raw data in field
    multiplier: object  # c in base.field with sigma(y) = c y
    delta: Derivation
    sigma: FieldMorphism
    kind: str  # "base", "quadratic" or "laurent"
    relation: object = None  # b with y^2 = b (quadratic) or y = b (base)
    certificate: str = ""

    def sigma_ratio(self, l: int):
        """``sigma^l(y) / y`` as raw data of the base field."""
        K = self.base.field
        acc = K.one
        c = self.multiplier
        for _ in range(l):
            acc = K.mul(acc, c)
            c = self.base.sigma.map_data(c)
        return acc

    def presentation(self) -> str:
        K = self.base.field
        if self.kind == "base":
            return f"{K} with y = {K.format(self.relation)}"
        if self.kind == "quadratic":
            return f"{K}[y, 1/y]/(y^2 - {K.format(self.relation)})"
        return f"{K}[y, 1/y]"

    def to_json(self) -> dict:
        K = self.base.field
        return {"kind": self.kind, "presentation": self.presentation(),
                "sigma_y": _scaled(K, self.multiplier, "y"), "certificate": self.certificate}


def pv_construct(k: DeltaSigmaRing, a, sigma_choice="+", search_bound: int = 4,
                 name: str = "y") -> PVRing:
    """Rank-one ring for ``delta(y) = a y`` with ``sigma(y) = c y``.

    ``sigma_choice`` is ``"+"`` or ``"-"`` (sign of the square root found for
    ``c``) or an explicit multiplier.
    """
    K = k.field
    if K.characteristic != 0:
        raise OutOfScope("characteristic zero only")
    a = K.coerce(a)
    D = k.delta
    sa = k.sigma.map_data(a)
    if a == K.zero:
        return PVRing(k, a, K, K.one, K.one, D, k.sigma, "base", K.one, "y = 1 lies in the base field")

    found = {}
    for n in range(1, search_bound + 1):
        na = K.mul(K.from_int(n), a)
        for b in _monomial_candidates(K, search_bound):
            if D.apply(b) == K.mul(na, b):
                found.setdefault(n, b)
                break
    if 1 in found:
        b = found[1]
        c = K.div(k.sigma.map_data(b), b)
        return PVRing(k, a, K, b, c, D, k.sigma, "base", b, "y lies in the base field")
    if 2 in found:
        b = found[2]
        root = K.sqrt(b)
        if root is not None:
            c = K.div(k.sigma.map_data(root), root)
            return PVRing(k, a, K, root, c, D, k.sigma, "base", root, "y lies in the base field")
        ratio = K.div(k.sigma.map_data(b), b)
        c = _choose_multiplier(K, ratio, sigma_choice)
        R = K.extend_algebraic(name, [K.element(K.neg(b)), 0, 1])
        kind, rel, cert = "quadratic", b, "field presentation, hence delta-simple"
    elif found:
        raise OutOfScope(f"solution generator of degree {min(found)} over the base")
    else:
        R = K.extend_transcendental(name)
        kind, rel = "laurent", None
        cert = f"no b with delta(b) = n*a*b for 0 < n <= {search_bound}: Laurent ring delta-simple in scope"
        if sa != a:
            raise NoSigmaStructure("sigma(a) != a and no multiplier search in scope")
        if sigma_choice in ("+", "-"):
            c = K.one if sigma_choice == "+" else K.neg(K.one)
        else:
            c = K.coerce(sigma_choice)
    y = R.gen_data(len(R.steps) - 1)
    # delta(c) = c (sigma(a) - a) makes sigma(y) = c y compatible with delta
    if D.apply(c) != K.mul(c, K.sub(sa, a)):
        raise NoSigmaStructure(f"multiplier {K.format(c)} is not compatible with the derivation")
    imgs = {}
    if kind == "laurent":
        imgs[len(R.steps) - 1] = R.mul(R.embed(K, a), y)
    DR = D.extend(R, imgs)
    if DR.apply(y) != R.mul(R.embed(K, a), y):
        raise OutOfScope("derived delta(y) differs from a*y")
    sig_imgs = [R.element(R.embed(K, im)) for im in k.sigma.images] + [R.element(R.mul(R.embed(K, c), y))]
    SR = make_morphism(R, R, sig_imgs)
    _commutation(R, DR, SR)
    return PVRing(k, a, R, y, c, DR, SR, kind, rel, cert)


def _scaled(K: FieldTower, c, var: str) -> str:
    if c == K.one:
        return var
    if c == K.neg(K.one):
        return f"-{var}"
    text = K.format(c)
    return f"{text}*{var}" if K.format_is_atomic(c) else f"({text})*{var}"


def _choose_multiplier(K: FieldTower, ratio, choice):
    if choice in ("+", "-"):
        root = K.sqrt(ratio)
        if root is None:
            raise NoSigmaStructure(f"sigma(b)/b = {K.format(ratio)} has no square root in the base")
        return root if choice == "+" else K.neg(root)
    c = K.coerce(choice)
    if K.mul(c, c) != ratio:
        raise NoSigmaStructure(f"{K.format(c)}^2 != {K.format(ratio)}")
    return c


def _same_base(R1: PVRing, R2: PVRing):
    if R1.base.field != R2.base.field or R1.base.sigma != R2.base.sigma:
        raise BaseMismatch("rings are built over different delta-sigma fields")
    if R1.a != R2.a:
        raise BaseMismatch("rings solve different equations")
    if R1.base.delta.images != R2.base.delta.images:
        raise BaseMismatch("base derivations differ")


# ---------------------------------------------------------------------------- D matrix

@dataclass
class DMatrix:
    ring: PolyRing
    relations: Ideal
    value: Poly  # normal form of D
    delta_value: Poly  # normal form of delta(D); zero when certified
    sigma_factor: object  # lambda in the base with sigma(D) = lambda D
    certified: bool

    def to_json(self) -> dict:
        K = self.ring.field
        return {"D": self.value.format(), "delta_D": self.delta_value.format() if self.delta_value else "0",
                "sigma_D": _scaled(K, self.sigma_factor, "D"), "certified": self.certified}


_TENSOR_NAMES = ("y1", "y1inv", "y2", "y2inv")


def _derive_poly(p: Poly, coeff_derivative, var_images: Mapping[int, Poly]) -> Poly:
    ring = p.ring
    F = ring.field
    out = ring.zero()
    for m, c in p.terms.items():
        dc = coeff_derivative(c)
        if dc != F.zero:
            out = out + Poly(ring, {m: dc})
        for v, e in m:
            rest = Poly(ring, {mono_div(m, ((v, 1),)): F.mul(c, F.from_int(e))})
            out = out + rest * var_images[v]
    return out


def dmatrix(R1: PVRing, R2: PVRing) -> DMatrix:
    """``D = (y1 (x) 1)^{-1} (1 (x) y2)`` in ``R1 (x)_k R2`` with its certificate."""
    _same_base(R1, R2)
    k = R1.base
    K = k.field
    ring = PolyRing(K, lambda v: _TENSOR_NAMES[v] if v < 4 else f"_z{v - AUX}")
    y1, y1i, y2, y2i = (ring.var(v) for v in range(4))
    rels = [y1 * y1i - ring.one(), y2 * y2i - ring.one()]
    for R, y in ((R1, y1), (R2, y2)):
        if R.kind == "quadratic":
            rels.append(y ** 2 - ring.const_data(R.relation))
        elif R.kind == "base":
            rels.append(y - ring.const_data(R.relation))
    I = Ideal(ring, rels)
    D = y1i * y2
    a = ring.const_data(R1.a)
    delta_images = {0: a * y1, 1: -a * y1i, 2: a * y2, 3: -a * y2i}
    dD = I.reduce(_derive_poly(D, k.delta.apply, delta_images))
    c1, c2 = R1.multiplier, R2.multiplier
    sigma_images = {0: ring.const_data(c1) * y1, 1: ring.const_data(K.inv(c1)) * y1i,
                    2: ring.const_data(c2) * y2, 3: ring.const_data(K.inv(c2)) * y2i}
    sD = D.substitute(sigma_images, k.sigma.map_data)
    lam = K.div(c2, c1)
    ok_sigma = I.contains(sD - D.scale_data(lam))
    return DMatrix(ring, I, I.reduce(D), dD, lam, not dD and ok_sigma)


# ---------------------------------------------------------------------------- constants

def _single_transcendental(F: FieldTower) -> int:
    ts = _transcendental_steps(F)
    if len(ts) != 1:
        raise OutOfScope("linear algebra over the constants needs exactly one transcendental generator")
    return ts[0]


def _flatten(F: FieldTower, d, tpos: int, k: int | None = None, path=()):
    """Raw data -> {path: (num, den)} with fractions over the level below ``tpos``."""
    k = len(F.steps) if k is None else k
    if k == tpos + 1:
        return {path: d}
    if k <= tpos:
        raise OutOfScope("element below the transcendental step")
    out = {}
    for i, c in enumerate(d):
        out.update(_flatten(F, c, tpos, k - 1, path + (i,)))
    return out


def _coordinate_vectors(F: FieldTower, elems: Sequence) -> tuple:
    """Vectors over the constant level ``C`` representing ``elems`` up to one common factor."""
    tpos = _single_transcendental(F)
    C = F.level(tpos)
    flat = [_flatten(F, e, tpos) for e in elems]
    lcm = [C.one]
    for f in flat:
        for num, den in f.values():
            g = upoly.gcd(C, lcm, list(den))
            lcm = upoly.divmod_(C, upoly.mul(C, lcm, list(den)), g)[0]
    vecs = []
    for f in flat:
        vec = {}
        for path, (num, den) in f.items():
            cof = upoly.divmod_(C, lcm, list(den))[0]
            for deg, c in enumerate(upoly.mul(C, list(num), cof)):
                if c != C.zero:
                    vec[(path, deg)] = c
        vecs.append(vec)
    return C, vecs


def _nullspace(C: FieldTower, vecs: list) -> list:
    """Basis of ``{lam : sum lam_j vecs[j] = 0}`` over ``C`` by Gaussian elimination."""
    keys = sorted({key for v in vecs for key in v}, key=repr)
    m = len(vecs)
    rows = [[v.get(key, C.zero) for v in vecs] for key in keys]
    pivots = []
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != C.zero), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = C.inv(rows[r][col])
        rows[r] = [C.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != C.zero:
                f = rows[i][col]
                rows[i] = [C.sub(x, C.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fcol in free:
        lam = [C.zero] * m
        lam[fcol] = C.one
        for i, pcol in enumerate(pivots):
            lam[pcol] = C.neg(rows[i][fcol])
        basis.append(lam)
    return basis


def _laurent_basis(F: FieldTower, tpos: int, bound: int) -> list:
    """Monomials ``t^i * prod alpha_j^{e_j}`` with ``|i| <= bound``."""
    alg = [(k, s.degree) for k, s in enumerate(F.steps) if k > tpos and isinstance(s, Algebraic)]
    t = F.gen_data(tpos)
    out = [(f"x^{i}", F.pow(t, i)) for i in range(-bound, bound + 1)]
    for k, deg in alg:
        g = F.gen_data(k)
        nm = F.steps[k].name
        out = [(f"{lab}*{nm}^{e}" if e else lab, F.mul(v, F.pow(g, e))) for lab, v in out for e in range(deg)]
    return out


@dataclass
class Constants:
    bound: int
    basis: list  # raw elements spanning the constants found at this bound
    labels: list
    field: FieldTower

    @property
    def only_base_constants(self) -> bool:
        """Whether every constant found lies in the constant level."""
        tpos = _single_transcendental(self.field)
        return all(self.field.is_in_base_level(b, tpos) for b in self.basis)

    def to_json(self) -> dict:
        return {"bound": self.bound, "constants": [self.field.format(b) for b in self.basis],
                "only_base_constants": self.only_base_constants}


def delta_constants(R, degree_bound: int = 4) -> Constants:
    """Constants of ``delta`` spanned by Laurent monomials up to ``degree_bound``."""
    F, D = (R.field, R.delta)
    tpos = _single_transcendental(F)
    basis = _laurent_basis(F, tpos, degree_bound)
    images = [D.apply(v) for _, v in basis]
    C, vecs = _coordinate_vectors(F, images)
    null = _nullspace(C, vecs)
    out, labels = [], []
    for lam in null:
        acc = F.zero
        for coef, (_, v) in zip(lam, basis):
            acc = F.add(acc, F.mul(F.embed(C, coef), v))
        out.append(acc)
        labels.append(F.format(acc))
    return Constants(degree_bound, out, labels, F)


# ---------------------------------------------------------------------------- sigma^l twists

@dataclass(frozen=True)
class MinimalL:
    l: int
    multiplier: str  # y1 -> multiplier * y2

    def to_json(self):
        return {"verdict": "MinimalL", "l": self.l, "map": f"y1 -> {self.multiplier}*y2"}


@dataclass(frozen=True)
class NoTwistUpTo:
    bound: int

    def to_json(self):
        return {"verdict": "NoneUpTo", "bound": self.bound}


def _equivariant(R1: PVRing, R2: PVRing, c, l: int) -> bool:
    K = R1.base.field
    sig_l = R1.base.sigma.power(l)
    return K.mul(R1.sigma_ratio(l), c) == K.mul(sig_l.map_data(c), R2.sigma_ratio(l))


def sigma_l_isomorphism_search(R1: PVRing, R2: PVRing, l_max: int = 8):
    """Least ``l`` such that some ``y1 -> c y2`` is ``delta``- and ``sigma^l``-equivariant.

    Candidates are ``c = 1, -1``: the relation ``y^2 = b`` forces ``c^2 = 1``
    and delta-equivariance forces ``c`` constant.
    """
    _same_base(R1, R2)
    K = R1.base.field
    cands = [K.one, K.neg(K.one)]
    for l in range(1, l_max + 1):
        for c in cands:
            if R1.base.delta.apply(c) != K.zero:
                continue
            if _equivariant(R1, R2, c, l):
                if not _equivariant(R1, R2, c, 2 * l):
                    raise AssertionError("sigma^l equivariance not inherited by sigma^2l")
                return MinimalL(l, K.format(c))
    return NoTwistUpTo(l_max)


# ---------------------------------------------------------------------------- pseudo simplicity

@dataclass(frozen=True)
class Simple:
    reason: str

    def to_json(self):
        return {"verdict": "Simple", "reason": self.reason}


@dataclass(frozen=True)
class NotSimple:
    witness: str  # generators of a proper sigma-pseudo prime
    period: int

    def to_json(self):
        return {"verdict": "NotSimple", "witness": self.witness, "period": self.period}


@dataclass(frozen=True)
class Inconclusive:
    searched: tuple

    def to_json(self):
        return {"verdict": "Inconclusive", "searched": list(self.searched)}


def _univariate(S: SigmaAlgebra, p: Poly) -> list:
    """Coefficients of a polynomial in the single generator."""
    F = S.field
    coeffs = p.coefficients_in(0)
    out = [F.zero] * (max(coeffs) + 1)
    for e, c in coeffs.items():
        out[e] = c.constant_data() if c.terms else F.zero
    return upoly.strip(F, out)


def _to_poly(S: SigmaAlgebra, coeffs) -> Poly:
    x = S.var(0)
    acc = S.ring.zero()
    for e, c in enumerate(coeffs):
        acc = acc + S.ring.const_data(c) * x ** e
    return acc


def _kills(S: SigmaAlgebra, f: Poly, inverted: Poly | None) -> bool:
    """Whether inverting ``inverted`` removes the prime ``(f)``."""
    if inverted is None:
        return False
    F = S.field
    return not upoly.rem(F, _univariate(S, inverted), _univariate(S, f))


def _orbit_period(S: SigmaAlgebra, f: Poly, bound: int):
    """Least ``e`` with ``(f)`` reflexively ``sigma^e``-stable, or ``None``."""
    for e in range(1, bound + 1):
        st = sigma_stability(SigmaIdeal(S, [f]), e)
        if isinstance(st, Stable) and st.reflexive:
            return e
    return None


def pseudo_simple_probe(algebra, candidate_bound: int = 4, inverted: Poly | None = None):
    """Search for a non-zero sigma-pseudo prime in ``algebra[1/inverted]``.

    ``algebra`` is a :class:`PseudoField` (always simple) or a
    :class:`SigmaAlgebra` in one generator over a field.
    """
    if isinstance(algebra, PseudoField):
        return Simple("product of fields permuted cyclically by sigma")
    S = algebra
    if S.n != 1:
        raise OutOfScope("probe handles algebras in one generator")
    F = S.field
    rels = [g for g in S.relations.gens if g.terms]
    if rels:
        g = _univariate(S, S.relations.basis[0])
        factors = factor_univariate(F, UPoly(F, g))
        if any(mult > 1 for _, mult in factors):
            raise OutOfScope("relation is not squarefree")
        live = [_to_poly(S, f.coeffs) for f, _ in factors]
        live = [f for f in live if not _kills(S, f, inverted)]
        if not live:
            return Simple("the localization is the zero ring")
        if len(live) == 1:
            return Simple("quotient is a field")
        perm = {}
        for i, f in enumerate(live):
            img = S.apply_sigma(f)
            for j, h in enumerate(live):
                if not upoly.rem(F, _univariate(S, img), _univariate(S, h)):
                    perm[i] = j
                    break
        seen = {0}
        j = perm.get(0)
        while j is not None and j not in seen:
            seen.add(j)
            j = perm.get(j)
        if len(seen) == len(live):
            return Simple("sigma permutes the prime factors in a single cycle")
        orbit = [live[i] for i in sorted(seen)]
        prod = orbit[0]
        for f in orbit[1:]:
            prod = prod * f
        return NotSimple(prod.format(), len(seen))
    # free generator: enumerate monic irreducibles with small integer coefficients
    searched = []
    B = candidate_bound
    x = S.var(0)
    cands = [x - c for c in sorted(range(-B, B + 1), key=lambda c: (abs(c), -c))]
    cands += [x ** 2 + p * x + q for p in range(-B, B + 1) for q in range(-B, B + 1)]
    for f in cands:
        coeffs = _univariate(S, f)
        facs = factor_univariate(F, UPoly(F, coeffs))
        if len(facs) != 1 or facs[0][1] != 1:
            continue
        if _kills(S, f, inverted):
            continue
        searched.append(f.format())
        e = _orbit_period(S, f, candidate_bound)
        if e is not None:
            return NotSimple(f.format(), e)
    return Inconclusive(tuple(searched))


@dataclass
class ConstraintWitness:
    verdict: str  # "Constrained", "NotConstrained" or "Inconclusive"
    constraint: str | None
    tested: list
    bound: int

    def to_json(self):
        return {"verdict": self.verdict, "constraint": self.constraint,
                "tested": self.tested, "bound": self.bound}


def constraint_search(S: SigmaAlgebra, bound: int = 4) -> ConstraintWitness:
    """Look for ``b`` with ``K{a, 1/b}`` pseudo simple among simple candidates."""
    F = S.field
    x = S.var(0)
    cands = [S.ring.one()]
    rels = [g for g in S.relations.basis if g.terms]
    if rels:
        g = rels[0]
        coeffs = _univariate(S, g)
        cands.append(S.ring.const_data(upoly.lc(coeffs)))
        cands.append(_to_poly(S, upoly.deriv(F, coeffs)))
    else:
        cands += [x ** e for e in range(1, bound + 1)]
    tested = []
    verdicts = []
    for b in cands:
        if rels and not b.is_constant():
            h = _univariate(S, b)
            if upoly.degree(upoly.gcd(F, h, _univariate(S, rels[0]))) > 0:
                continue  # zero divisor
        tested.append(b.format())
        res = pseudo_simple_probe(S, bound, None if b.is_constant() else b)
        verdicts.append(res)
        if isinstance(res, Simple):
            return ConstraintWitness("Constrained", b.format(), tested, bound)
    if verdicts and all(isinstance(v, NotSimple) for v in verdicts):
        return ConstraintWitness("NotConstrained", None, tested, bound)
    return ConstraintWitness("Inconclusive", None, tested, bound)


# ---------------------------------------------------------------------------- separability

@dataclass(frozen=True)
class Pass:
    rank: int

    def to_json(self):
        return {"verdict": "Pass", "rank": self.rank}


@dataclass(frozen=True)
class Fail:
    dependency: tuple  # coefficients of a vanishing combination of sigma(sample)

    def to_json(self):
        return {"verdict": "Fail", "dependency": list(self.dependency)}


def sigma_separability_witness(k, sample: Sequence):
    """Check that ``sigma`` keeps a linearly independent sample independent over the constants."""
    if isinstance(k, DeltaSigmaRing):
        F, sigma = k.field, k.sigma
    else:
        F, sigma = k
    data = [F.coerce(s) for s in sample]
    C, vecs = _coordinate_vectors(F, data)
    if _nullspace(C, vecs):
        raise SampleDependent("sample is linearly dependent over the constants")
    images = [sigma.map_data(d) for d in data]
    C, vecs = _coordinate_vectors(F, images)
    null = _nullspace(C, vecs)
    if null:
        return Fail(tuple(C.format(c) for c in null[0]))
    return Pass(len(data))
