"""Cyclic products of fields with a shifting endomorphism."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import CyclicStructureBroken, NotFinite, UnsupportedFactorization
from .fieldtower import (
    Algebraic,
    FieldElement,
    FieldMorphism,
    FieldTower,
    identity_morphism,
    tensor_decompose,
)
from . import upoly


@dataclass(frozen=True)
class PseudoField:
    components: tuple  # FieldTower, in sigma-cycle order
    sigma_maps: tuple  # sigma_maps[i]: components[i] -> components[i+1 mod d]

    @property
    def period(self) -> int:
        return len(self.components)

    @property
    def is_field(self) -> bool:
        return self.period == 1

    @property
    def field(self) -> FieldTower:
        """The single component of a period-one pseudo field."""
        if not self.is_field:
            raise ValueError("pseudo field has more than one component")
        return self.components[0]

    @property
    def sigma(self) -> FieldMorphism:
        if not self.is_field:
            raise ValueError("pseudo field has more than one component")
        return self.sigma_maps[0]

    @property
    def characteristic(self) -> int:
        return self.components[0].characteristic

    # elements ----------------------------------------------------------------
    def element(self, coords: Sequence) -> "PseudoFieldElem":
        if len(coords) != self.period:
            raise ValueError(f"expected {self.period} coordinates")
        return PseudoFieldElem(self, tuple(F.coerce(c) for F, c in zip(self.components, coords)))

    def zero(self) -> "PseudoFieldElem":
        return PseudoFieldElem(self, tuple(F.zero for F in self.components))

    def one(self) -> "PseudoFieldElem":
        return PseudoFieldElem(self, tuple(F.one for F in self.components))

    def diag(self, c) -> "PseudoFieldElem":
        """Constant element with the same coordinate in every component."""
        return PseudoFieldElem(self, tuple(F.coerce(c) for F in self.components))

    def __str__(self):
        if self.is_field:
            return f"({self.components[0]}, {self.sigma_maps[0]})"
        return " + ".join(f"e{i + 1}*{F}" for i, F in enumerate(self.components))


@dataclass(frozen=True)
class PseudoFieldElem:
    parent: PseudoField
    coords: tuple  # raw data per component

    def _zip(self, other):
        if not isinstance(other, PseudoFieldElem):
            other = self.parent.diag(other)
        return zip(self.parent.components, self.coords, other.coords)

    def __add__(self, other):
        return PseudoFieldElem(self.parent, tuple(F.add(a, b) for F, a, b in self._zip(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return PseudoFieldElem(self.parent, tuple(F.sub(a, b) for F, a, b in self._zip(other)))

    def __mul__(self, other):
        return PseudoFieldElem(self.parent, tuple(F.mul(a, b) for F, a, b in self._zip(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return PseudoFieldElem(self.parent, tuple(F.neg(a) for F, a in zip(self.parent.components, self.coords)))

    def coordinate(self, i: int) -> FieldElement:
        return self.parent.components[i].element(self.coords[i])

    def is_zero(self) -> bool:
        return all(a == F.zero for F, a in zip(self.parent.components, self.coords))

    def is_invertible(self) -> bool:
        return all(a != F.zero for F, a in zip(self.parent.components, self.coords))

    def is_zero_divisor(self) -> bool:
        """True when some non-zero element annihilates this one (0 included)."""
        return not self.is_invertible()

    def inverse(self) -> "PseudoFieldElem":
        if not self.is_invertible():
            raise ZeroDivisionError("element has a zero coordinate")
        return PseudoFieldElem(self.parent, tuple(F.inv(a) for F, a in zip(self.parent.components, self.coords)))

    def annihilator_witness(self):
        """A non-zero element killing ``self``, or ``None`` if invertible."""
        for i, (F, a) in enumerate(zip(self.parent.components, self.coords)):
            if a == F.zero:
                return idempotents(self.parent)[i]
        return None

    def __str__(self):
        return "(" + ", ".join(F.format(a) for F, a in zip(self.parent.components, self.coords)) + ")"


def make_pseudofield(components: Sequence[FieldTower], sigma_maps: Sequence[FieldMorphism]) -> PseudoField:
    components = tuple(components)
    sigma_maps = tuple(sigma_maps)
    d = len(components)
    if d == 0 or len(sigma_maps) != d:
        raise CyclicStructureBroken(f"{d} components but {len(sigma_maps)} maps")
    for i, m in enumerate(sigma_maps):
        if m.source != components[i] or m.target != components[(i + 1) % d]:
            raise CyclicStructureBroken(
                f"map {i} goes {m.source} -> {m.target}, expected {components[i]} -> {components[(i + 1) % d]}")
    return PseudoField(components, sigma_maps)


def sigma_field(field: FieldTower, sigma: FieldMorphism | None = None) -> PseudoField:
    """A difference field viewed as a pseudo field of period one."""
    return make_pseudofield([field], [sigma or identity_morphism(field)])


def idempotents(K: PseudoField) -> list:
    out = []
    for i in range(K.period):
        coords = tuple(F.one if j == i else F.zero for j, F in enumerate(K.components))
        out.append(PseudoFieldElem(K, coords))
    return out


def apply_sigma(K: PseudoField, x: PseudoFieldElem, times: int = 1) -> PseudoFieldElem:
    d = K.period
    coords = x.coords
    for _ in range(times):
        coords = tuple(K.sigma_maps[(i - 1) % d].map_data(coords[(i - 1) % d]) for i in range(d))
    return PseudoFieldElem(K, coords)


def trivial_extension(K: PseudoField, d: int) -> PseudoField:
    if not K.is_field:
        raise ValueError("trivial extensions are built over a period-one pseudo field")
    if d < 1:
        raise ValueError("d must be positive")
    return make_pseudofield([K.field] * d, [K.sigma] * d)


# ---------------------------------------------------------------------------- compatibility

@dataclass(frozen=True)
class MinimalPeriod:
    period: int
    cycle: tuple  # component labels (i, i', j) along one cycle of minimal length
    permutation: dict  # label -> label of its sigma-preimage component

    def to_json(self):
        return {"verdict": "MinimalPeriod", "period": self.period,
                "cycle": [list(c) for c in self.cycle]}


@dataclass(frozen=True)
class NoneUpTo:
    bound: int

    def to_json(self):
        return {"verdict": "NoneUpTo", "bound": self.bound}


def _check_over(L: PseudoField, K: PseudoField, strict: bool):
    base = K.field
    for i, F in enumerate(L.components):
        if not base.is_prefix_of(F):
            raise ValueError(f"component {i} of {L} does not extend {base}")
        extra = F.steps[len(base.steps):]
        if any(not isinstance(s, Algebraic) for s in extra):
            raise NotFinite(f"component {i} is transcendental over the base")
        if strict and len(extra) != 1:
            raise UnsupportedFactorization("left factor components must be simple algebraic extensions")
        m = L.sigma_maps[i]
        for k in range(len(base.steps)):
            expect = m.target.embed(base, K.sigma.images[k])
            if m.images[k] != expect:
                raise ValueError(f"sigma on component {i} does not restrict to sigma of the base")


def tensor_components(L: PseudoField, Lp: PseudoField, K: PseudoField) -> dict:
    """Field components of ``L (x)_K Lp``, keyed by ``(i, i', j)``."""
    out = {}
    for i, Li in enumerate(L.components):
        for ip, Lpi in enumerate(Lp.components):
            for j, comp in enumerate(tensor_decompose(Li, Lpi, K.field)):
                out[(i, ip, j)] = comp
    return out


def tensor_sigma_preimage(L: PseudoField, Lp: PseudoField, K: PseudoField, comps: dict) -> dict:
    """Map each component c to the component whose prime is sigma^{-1} of c's prime."""
    d, dp = L.period, Lp.period
    pre = {}
    for (i, ip, j), comp in comps.items():
        i0, ip0 = (i - 1) % d, (ip - 1) % dp
        sig_L = L.sigma_maps[i0]
        sig_Lp = Lp.sigma_maps[ip0]
        E = comp.field
        # image of the previous left generator under sigma, seen in E
        alpha_prev = L.components[i0].gen_data(len(L.components[i0].steps) - 1)
        h = comp.left.map_data(sig_L.map_data(alpha_prev))
        found = None
        for (a, b, jj), other in comps.items():
            if (a, b) != (i0, ip0):
                continue
            g = other.factor.coeffs  # over Lp.components[ip0]
            coeffs = [comp.right.map_data(sig_Lp.map_data(c)) for c in g]
            if upoly.evaluate(E, upoly.strip(E, coeffs), h) == E.zero:
                found = (a, b, jj)
                break
        if found is None:
            raise ValueError("sigma does not induce a map on tensor components")
        pre[(i, ip, j)] = found
    return pre


def compat_test(L: PseudoField, Lp: PseudoField, K: PseudoField, max_period: int = 16):
    """Least period of a sigma-periodic prime of ``L (x)_K Lp``.

    The primes of the tensor product are its field components; ``sigma^{-1}``
    permutes them, and a prime with ``sigma^{-n}(P) = P`` exists exactly for
    ``n`` a multiple of some cycle length.
    """
    if not K.is_field:
        raise ValueError("the common base must be a difference field")
    _check_over(L, K, strict=True)
    _check_over(Lp, K, strict=False)
    comps = tensor_components(L, Lp, K)
    pre = tensor_sigma_preimage(L, Lp, K, comps)
    best = None
    for start in sorted(pre):
        seen = [start]
        c = pre[start]
        while c != start and c not in seen and len(seen) <= max_period:
            seen.append(c)
            c = pre[c]
        if c == start and (best is None or len(seen) < len(best)):
            best = seen
    if best is None or len(best) > max_period:
        return NoneUpTo(max_period)
    return MinimalPeriod(len(best), tuple(best), pre)
