"""Difference polynomial rings, Ritt reduction, and limit degrees.

The indeterminate ``s^j(x_i)`` of a ring in ``n`` variables is stored as
polynomial variable number ``j*n + i``.  That number is its rank under the
standard ranking (``x_1 < ... < x_n < s(x_1) < ...``), so "highest ranked"
and "highest variable index" coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import CoefficientNotField, ConstantPolynomial, NotStabilized, OutOfScope
from .fieldtower import FieldMorphism, FieldTower, extend_algebraic, extend_transcendental
from .polyring import AUX, Ideal, Poly, PolyRing, lex_key
from .pseudofield import PseudoField, sigma_field


def shift_name(name: str, j: int) -> str:
    return name if j == 0 else f"s{j}({name})"


class DiffPolyRing:
    """``K{x_1, ..., x_n}`` over a difference field ``K``."""

    def __init__(self, coefficients, names: Sequence[str], sigma: FieldMorphism | None = None):
        if isinstance(coefficients, PseudoField):
            if not coefficients.is_field:
                raise CoefficientNotField(
                    f"coefficients have period {coefficients.period}; pass a single component")
            base = coefficients
        else:
            base = sigma_field(coefficients, sigma)
        self.base = base
        self.field: FieldTower = base.field
        self.sigma: FieldMorphism = base.sigma
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be distinct")
        if set(self.names) & set(self.field.names):
            raise ValueError("variable names clash with field generators")
        self.n = len(self.names)
        self.poly_ring = PolyRing(self.field, self._name)
        self._sigma_powers = {0: None, 1: self.sigma}

    # naming and indexing -------------------------------------------------------
    def _name(self, v: int) -> str:
        if v >= AUX:
            return f"_z{v - AUX}"
        j, i = divmod(v, self.n)
        return shift_name(self.names[i], j)

    def rank(self, i: int, j: int = 0) -> int:
        return j * self.n + i

    def unrank(self, v: int) -> tuple:
        """``(i, j)`` with ``v = rank(i, j)``."""
        j, i = divmod(v, self.n)
        return i, j

    def var_index(self, name: str) -> int:
        return self.names.index(name)

    def x(self, name_or_index, j: int = 0) -> Poly:
        i = name_or_index if isinstance(name_or_index, int) else self.var_index(name_or_index)
        return self.poly_ring.var(self.rank(i, j))

    def gens(self) -> list:
        return [self.x(i) for i in range(self.n)]

    def const(self, c) -> Poly:
        return self.poly_ring.const(c)

    def one(self) -> Poly:
        return self.poly_ring.one()

    def zero(self) -> Poly:
        return self.poly_ring.zero()

    def __eq__(self, other):
        return (isinstance(other, DiffPolyRing) and self.base == other.base
                and self.names == other.names)

    def __hash__(self):
        return hash((self.base, self.names))

    def __repr__(self):
        return f"DiffPolyRing({self.field}, {list(self.names)})"

    # sigma -------------------------------------------------------------------
    def sigma_power(self, e: int) -> FieldMorphism:
        if e not in self._sigma_powers:
            self._sigma_powers[e] = self.sigma.compose(self.sigma_power(e - 1))
        return self._sigma_powers[e]

    def sigma_shift(self, p: Poly, e: int = 1) -> Poly:
        if e == 0:
            return p
        if e < 0:
            raise ValueError("shift must be non-negative")
        m = self.sigma_power(e)
        off = e * self.n
        shifted = p.rename(lambda v: v + off if v < AUX else v)
        if m.is_identity():
            return shifted
        return shifted.map_coefficients(m.map_data)

    def order(self, p: Poly) -> int:
        vs = [v for v in p.variables() if v < AUX]
        return max(v // self.n for v in vs) if vs else -1

    def leader_initial(self, p: Poly):
        vs = [v for v in p.variables() if v < AUX]
        if not vs:
            raise ConstantPolynomial(p.format())
        v = max(vs)
        coeffs = p.coefficients_in(v)
        top = max(coeffs)
        return v, coeffs[top], top

    def truncation(self, t: int) -> "Truncation":
        return Truncation(self, t)

    def format(self, p: Poly) -> str:
        return p.format(lex_key)


@dataclass(frozen=True)
class Truncation:
    """``K[x, s(x), ..., s^t(x)]`` inside a difference polynomial ring."""

    ring: DiffPolyRing
    cutoff: int

    @property
    def variables(self) -> list:
        return list(range(self.ring.n * (self.cutoff + 1)))

    def contains(self, p: Poly) -> bool:
        return all(v < self.ring.n * (self.cutoff + 1) for v in p.variables() if v < AUX)

    def ideal(self, gens, order="lex") -> Ideal:
        return Ideal(self.ring.poly_ring, gens, order)


# ---------------------------------------------------------------------------- Ritt reduction

@dataclass
class RittResult:
    remainder: Poly
    certificate: Poly
    initial_powers: list  # (basis index, shift, power) per initial used
    combination: list  # (coefficient, basis index, shift)

    def verify(self, ring: DiffPolyRing, p: Poly, basis: Sequence[Poly]) -> bool:
        acc = self.certificate * p
        for coef, idx, k in self.combination:
            acc = acc - coef * ring.sigma_shift(basis[idx], k)
        return acc == self.remainder


def ritt_reduce(ring: DiffPolyRing, p: Poly, basis: Sequence[Poly]) -> RittResult:
    """Pseudo-reduce ``p`` by every shift of every element of ``basis``."""
    info = []
    for idx, f in enumerate(basis):
        v, _, deg = ring.leader_initial(f)
        i, j = ring.unrank(v)
        info.append((idx, i, j, deg))
    cert = ring.one()
    combo = []
    powers = {}
    while True:
        target = None
        for v in sorted((v for v in p.variables() if v < AUX), reverse=True):
            vi, vj = ring.unrank(v)
            dv = p.degree_in(v)
            best = None
            for idx, i, j, deg in info:
                if i == vi and j <= vj and deg <= dv and (best is None or deg < best[3]):
                    best = (idx, i, j, deg)
            if best is not None:
                target = (v, best)
                break
        if target is None:
            break
        v, (idx, _, j, deg) = target
        k = ring.unrank(v)[1] - j
        g = ring.sigma_shift(basis[idx], k)
        g_coeffs = g.coefficients_in(v)
        init = g_coeffs[deg]
        xv = ring.poly_ring.var(v)
        while p.degree_in(v) >= deg:
            pc = p.coefficients_in(v)
            top = max(pc)
            m = pc[top] * (xv ** (top - deg))
            p = init * p - m * g
            cert = init * cert
            combo = [(c * init, i2, k2) for c, i2, k2 in combo]
            combo.append((m, idx, k))
            powers[(idx, k)] = powers.get((idx, k), 0) + 1
            if not p.terms:
                break
    initial_powers = [(idx, k, e) for (idx, k), e in sorted(powers.items())]
    return RittResult(p, cert, initial_powers, combo)


# ---------------------------------------------------------------------------- sigma^d reinterpretation

@dataclass(frozen=True)
class PowerReinterpretation:
    """``K{x}`` under ``sigma`` viewed as ``K{x, ..., s^{d-1}(x)}`` under ``sigma^d``.

    Ranks coincide in both rings, so translation only swaps the ambient ring.
    """

    original: DiffPolyRing
    power: int
    ring: DiffPolyRing

    def translate(self, p: Poly) -> Poly:
        return Poly(self.ring.poly_ring, p.terms)

    def untranslate(self, p: Poly) -> Poly:
        return Poly(self.original.poly_ring, p.terms)

    def describe(self, v: int) -> tuple:
        """``(new variable name, new shift)`` of original variable ``v``."""
        i, j = self.ring.unrank(v)
        return self.ring.names[i], j


def reinterpret_power(R: DiffPolyRing, d: int) -> PowerReinterpretation:
    if d < 1:
        raise ValueError("d must be positive")
    if d == 1:
        return PowerReinterpretation(R, 1, R)
    names = [shift_name(nm, k) for k in range(d) for nm in R.names]
    new = DiffPolyRing(R.field, names, R.sigma_power(d))
    return PowerReinterpretation(R, d, new)


# ---------------------------------------------------------------------------- limit degree

@dataclass(frozen=True)
class LevelPresentation:
    """Degrees ``[K(a,...,s^j a) : K(a,...,s^{j-1} a)]`` for ``j = 0..depth-1``.

    ``None`` marks a transcendental level.  ``field`` is the certified tower
    when the presentation was built from minimal polynomials.
    """

    degrees: tuple
    field: FieldTower | None = None

    @property
    def depth(self) -> int:
        return len(self.degrees)


def presentation_from_minpolys(base: FieldTower, levels, names=None) -> LevelPresentation:
    """Build and certify the tower level by level.

    ``levels[j]`` is ``None`` (free level) or a callable taking the field built
    so far and returning the coefficients of the minimal polynomial of
    ``s^j(a)`` over it.
    """
    F = base
    degrees = []
    for j, lvl in enumerate(levels):
        name = names[j] if names else shift_name("a", j)
        if lvl is None:
            F = extend_transcendental(F, name)
            degrees.append(None)
            continue
        coeffs = lvl(F)
        deg = len(coeffs) - 1
        if deg == 1:
            degrees.append(1)
            continue
        F = extend_algebraic(F, coeffs, name)
        degrees.append(deg)
    return LevelPresentation(tuple(degrees), F)


def benign_quadratic(depth: int) -> LevelPresentation:
    """``a`` free over ``Q`` and ``s^{j+1}(a)^2 = s^j(a)``."""
    from .fieldtower import QQ

    def level(j):
        def build(F):
            prev = F.gen(shift_name("a", j - 1))
            return [-prev, 0, 1]
        return build

    return presentation_from_minpolys(QQ, [None] + [level(j) for j in range(1, depth)])


def limit_degree(presentation: LevelPresentation, d: int = 1, depth: int | None = None) -> int:
    """Stabilized degree of consecutive ``sigma^d`` levels.

    Level ``m`` of the ``sigma^d`` tower adjoins ``s^{md}(a), ..., s^{md+d-1}(a)``;
    the value is returned once two consecutive levels (``m >= 1``) agree.
    """
    degs = presentation.degrees[: depth if depth is not None else presentation.depth]
    seq = []
    m = 1
    while (m + 1) * d <= len(degs):
        block = degs[m * d:(m + 1) * d]
        if any(x is None for x in block):
            raise OutOfScope("transcendental level beyond the first block")
        prod = 1
        for x in block:
            prod *= x
        seq.append(prod)
        if len(seq) >= 2 and seq[-1] == seq[-2]:
            return seq[-1]
        m += 1
    raise NotStabilized(seq)
