"""Exact computable fields presented as towers of simple extensions.

A :class:`FieldTower` is either a prime field (``Q`` or ``GF(p)``) or a prime
field followed by a list of steps, each step adjoining one generator which is
either algebraic (given by a monic irreducible minimal polynomial over the
tower below) or transcendental (rational functions).

Elements are stored as *raw data* that is canonical, so equality of elements
is equality of data:

* ``Q``: :class:`fractions.Fraction`
* ``GF(p)``: ``int`` in ``range(p)``
* algebraic step of degree n: tuple of n coordinates over the step below
* transcendental step: ``(num, den)`` of coprime polynomials, ``den`` monic

User code normally works with :class:`FieldElement`, a thin wrapper carrying
the field.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import upoly
from .errors import (
    DuplicateGenerator,
    NonPrimeCharacteristic,
    NotFinite,
    NotWellDefined,
    ReduciblePolynomial,
    UnsupportedFactorization,
)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, math.isqrt(n) + 1))


@dataclass(frozen=True)
class Algebraic:
    name: str
    minpoly: tuple  # monic, raw data over the level below, lowest degree first

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1


@dataclass(frozen=True)
class Transcendental:
    name: str


@dataclass(frozen=True)
class FieldTower:
    characteristic: int
    steps: tuple = ()

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.characteristic, self.steps))
            self.__dict__["_hash"] = h
        return h

    # ------------------------------------------------------------------ structure
    @cached_property
    def base(self) -> "FieldTower":
        if not self.steps:
            raise ValueError("prime field has no base")
        return self.level(len(self.steps) - 1)

    def level(self, k: int) -> "FieldTower":
        if k == len(self.steps):
            return self
        cache = self.__dict__.setdefault("_levels", {})
        if k not in cache:
            cache[k] = FieldTower(self.characteristic, self.steps[:k])
        return cache[k]

    @property
    def top(self):
        return self.steps[-1] if self.steps else None

    @property
    def names(self) -> tuple:
        return tuple(s.name for s in self.steps)

    @property
    def is_finite(self) -> bool:
        return self.characteristic > 0 and all(isinstance(s, Algebraic) for s in self.steps)

    @cached_property
    def degree(self):
        """Degree over the prime field, or ``None`` when a step is transcendental."""
        d = 1
        for s in self.steps:
            if isinstance(s, Transcendental):
                return None
            d *= s.degree
        return d

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise NotFinite("field is infinite")
        return self.characteristic ** self.degree

    def is_prefix_of(self, other: "FieldTower") -> bool:
        return (self.characteristic == other.characteristic
                and other.steps[: len(self.steps)] == self.steps)

    def __str__(self):
        out = "Q" if self.characteristic == 0 else f"GF({self.characteristic})"
        for k, s in enumerate(self.steps):
            if isinstance(s, Algebraic):
                out += f"[{s.name}: {upoly.fmt(self.level(k), s.minpoly, s.name)}]"
            else:
                out += f"({s.name})"
        return out

    # ------------------------------------------------------------------ raw data
    @cached_property
    def zero(self):
        if not self.steps:
            return Fraction(0) if self.characteristic == 0 else 0
        top = self.top
        if isinstance(top, Algebraic):
            return (self.base.zero,) * top.degree
        return ((), (self.base.one,))

    @cached_property
    def one(self):
        return self.from_int(1)

    def from_int(self, n: int):
        if not self.steps:
            return Fraction(n) if self.characteristic == 0 else n % self.characteristic
        b = self.base
        c = b.from_int(n)
        top = self.top
        if isinstance(top, Algebraic):
            return (c,) + (b.zero,) * (top.degree - 1)
        return (upoly.const(b, c), (b.one,))

    def from_fraction(self, q) -> object:
        q = Fraction(q)
        if self.characteristic == 0:
            return self.embed(FieldTower(0), q)
        return self.div(self.from_int(q.numerator), self.from_int(q.denominator))

    def embed(self, prefix: "FieldTower", d):
        """Embed raw data of a prefix tower into this tower."""
        for k in range(len(prefix.steps), len(self.steps)):
            lower = self.level(k)
            s = self.steps[k]
            if isinstance(s, Algebraic):
                d = (d,) + (lower.zero,) * (s.degree - 1)
            else:
                d = (upoly.const(lower, d), (lower.one,))
        return d

    def gen_data(self, k: int):
        """Raw data of the generator of step ``k`` viewed in this tower."""
        lvl = self.level(k + 1)
        lower = self.level(k)
        s = self.steps[k]
        if isinstance(s, Algebraic):
            if s.degree == 1:
                raise ValueError("degree one step")
            d = (lower.zero, lower.one) + (lower.zero,) * (s.degree - 2)
        else:
            d = ((lower.zero, lower.one), (lower.one,))
        return self.embed(lvl, d)

    def add(self, a, b):
        if not self.steps:
            return a + b if self.characteristic == 0 else (a + b) % self.characteristic
        B = self.base
        if isinstance(self.top, Algebraic):
            return tuple(B.add(x, y) for x, y in zip(a, b))
        (n1, d1), (n2, d2) = a, b
        if d1 == d2:
            return self._normalize(upoly.add(B, n1, n2), d1)
        num = upoly.add(B, upoly.mul(B, n1, d2), upoly.mul(B, n2, d1))
        return self._normalize(num, upoly.mul(B, d1, d2))

    def neg(self, a):
        if not self.steps:
            return -a if self.characteristic == 0 else (-a) % self.characteristic
        B = self.base
        if isinstance(self.top, Algebraic):
            return tuple(B.neg(x) for x in a)
        return (upoly.neg(B, a[0]), a[1])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not self.steps:
            return a * b if self.characteristic == 0 else (a * b) % self.characteristic
        B = self.base
        top = self.top
        if isinstance(top, Algebraic):
            prod = upoly.mul(B, upoly.strip(B, a), upoly.strip(B, b))
            r = upoly.rem(B, prod, top.minpoly)
            return r + (B.zero,) * (top.degree - len(r))
        (n1, d1), (n2, d2) = a, b
        return self._normalize(upoly.mul(B, n1, n2), upoly.mul(B, d1, d2))

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero")
        if not self.steps:
            if self.characteristic == 0:
                return 1 / a
            return pow(a, -1, self.characteristic)
        if a == self.one:
            return a
        B = self.base
        top = self.top
        if isinstance(top, Algebraic):
            if all(c == B.zero for c in a[1:]):
                return (B.inv(a[0]),) + a[1:]
            g, s, _ = upoly.xgcd(B, upoly.strip(B, a), top.minpoly)
            if upoly.degree(g) != 0:
                raise ReduciblePolynomial("minimal polynomial is not irreducible")
            s = upoly.rem(B, s, top.minpoly)
            return s + (B.zero,) * (top.degree - len(s))
        num, den = a
        return self._normalize(den, num)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        out = self.one
        while n:
            if n & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            n >>= 1
        return out

    def _normalize(self, num, den):
        B = self.base
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return ((), (B.one,))
        g = upoly.gcd(B, num, den)
        if upoly.degree(g) > 0:
            num = upoly.divmod_(B, num, g)[0]
            den = upoly.divmod_(B, den, g)[0]
        c = B.inv(upoly.lc(den))
        return (upoly.scale(B, c, num), upoly.scale(B, c, den))

    def is_in_base_level(self, d, k: int) -> bool:
        """True when ``d`` lies in the image of level ``k``."""
        for j in range(len(self.steps), k, -1):
            s = self.steps[j - 1]
            lower = self.level(j - 1)
            if isinstance(s, Algebraic):
                if any(c != lower.zero for c in d[1:]):
                    return False
                d = d[0]
            else:
                num, den = d
                if len(num) > 1 or len(den) > 1:
                    return False
                d = num[0] if num else lower.zero
        return True

    def restrict(self, d, k: int):
        """Inverse of :meth:`embed` for data known to lie in level ``k``."""
        for j in range(len(self.steps), k, -1):
            s = self.steps[j - 1]
            lower = self.level(j - 1)
            if isinstance(s, Algebraic):
                d = d[0]
            else:
                num = d[0]
                d = num[0] if num else lower.zero
        return d

    # ------------------------------------------------------------------ printing
    def format(self, d) -> str:
        if not self.steps:
            return str(d)
        B = self.base
        top = self.top
        if isinstance(top, Algebraic):
            return upoly.fmt(B, upoly.strip(B, d), top.name)
        num, den = d
        ns = upoly.fmt(B, num, top.name)
        if den == (B.one,):
            return ns
        ds = upoly.fmt(B, den, top.name)
        ns = ns if self._atomic_text(ns) else f"({ns})"
        ds = ds if self._atomic_text(ds) else f"({ds})"
        return f"{ns}/{ds}"

    @staticmethod
    def _atomic_text(s: str) -> bool:
        body = s[1:] if s.startswith("-") else s
        return not any(ch in body for ch in "+- /")

    def format_is_atomic(self, d) -> bool:
        return self._atomic_text(self.format(d))

    # ------------------------------------------------------------------ elements
    def __call__(self, value=0) -> "FieldElement":
        return FieldElement(self, self.coerce(value))

    def coerce(self, value):
        if isinstance(value, FieldElement):
            if value.field == self:
                return value.data
            if value.field.is_prefix_of(self):
                return self.embed(value.field, value.data)
            raise TypeError(f"cannot coerce element of {value.field} into {self}")
        if isinstance(value, bool):
            raise TypeError("bool is not a field element")
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, Fraction):
            return self.from_fraction(value)
        raise TypeError(f"cannot coerce {value!r} into {self}")

    def element(self, data) -> "FieldElement":
        return FieldElement(self, data)

    def gen(self, name=None) -> "FieldElement":
        if name is None:
            k = len(self.steps) - 1
        else:
            try:
                k = self.names.index(name)
            except ValueError:
                raise KeyError(name) from None
        return FieldElement(self, self.gen_data(k))

    def gens(self) -> list:
        return [self.gen(n) for n in self.names]

    def elements(self):
        """Iterate over all raw data of a finite field."""
        if not self.is_finite:
            raise NotFinite("cannot enumerate an infinite field")
        if not self.steps:
            yield from range(self.characteristic)
            return
        B = self.base
        yield from itertools.product(list(B.elements()), repeat=self.top.degree)

    def poly(self, coeffs) -> "UPoly":
        return UPoly(self, upoly.strip(self, [self.coerce(c) for c in coeffs]))

    # ------------------------------------------------------------------ roots
    def sqrt(self, d):
        """Return raw data of a square root of ``d`` or ``None``."""
        if d == self.zero:
            return self.zero
        if self.is_finite:
            if self.characteristic == 2:
                return self.pow(d, self.order // 2)
            for x in self.elements():
                if self.mul(x, x) == d:
                    return x
            return None
        if self.characteristic != 0:
            raise UnsupportedFactorization("square roots over infinite fields of positive characteristic")
        if not self.steps:
            n, m = d.numerator, d.denominator
            if n < 0:
                return None
            rn, rm = math.isqrt(n), math.isqrt(m)
            if rn * rn == n and rm * rm == m:
                return Fraction(rn, rm)
            return None
        B = self.base
        top = self.top
        if isinstance(top, Transcendental):
            num, den = d
            rn = _poly_sqrt(B, num)
            if rn is None:
                return None
            rd = _poly_sqrt(B, den)
            if rd is None:
                return None
            return self._normalize(rn, upoly.monic(B, rd))
        if top.degree != 2:
            raise UnsupportedFactorization("square roots over algebraic steps of degree > 2")
        return self._sqrt_quadratic(d)

    def _sqrt_quadratic(self, d):
        B = self.base
        q0, p0, _ = self.top.minpoly
        half = B.inv(B.from_int(2))
        hp = B.mul(p0, half)
        A = B.sub(B.mul(hp, hp), q0)  # beta = alpha + p/2, beta^2 = A
        c0, c1 = d
        u = B.sub(c0, B.mul(c1, hp))
        v = c1
        candidates = []
        if v == B.zero:
            s = B.sqrt(u)
            if s is not None:
                candidates.append((s, B.zero))
            s2 = B.sqrt(B.div(u, A))
            if s2 is not None:
                candidates.append((B.zero, s2))
        else:
            r = B.sqrt(B.sub(B.mul(u, u), B.mul(A, B.mul(v, v))))
            if r is not None:
                for rr in (r, B.neg(r)):
                    Y = B.div(B.add(u, rr), B.mul(B.from_int(2), A))
                    y = B.sqrt(Y)
                    if y is not None and y != B.zero:
                        x = B.div(v, B.mul(B.from_int(2), y))
                        candidates.append((x, y))
        for x, y in candidates:
            w = (B.add(x, B.mul(y, hp)), y)
            if self.mul(w, w) == d:
                return w
        return None

    def roots(self, p) -> list:
        """Distinct roots in this field of the (raw) polynomial ``p``."""
        p = upoly.monic(self, p)
        n = upoly.degree(p)
        if n <= 0:
            return []
        if n == 1:
            return [self.neg(p[0])]
        if self.is_finite:
            return [x for x in self.elements() if upoly.evaluate(self, p, x) == self.zero]
        if n == 2 and self.characteristic != 2:
            c, b, _ = p
            disc = self.sub(self.mul(b, b), self.mul(self.from_int(4), c))
            r = self.sqrt(disc)
            if r is None:
                return []
            half = self.inv(self.from_int(2))
            out = {self.mul(self.sub(r, b), half), self.mul(self.sub(self.neg(r), b), half)}
            return sorted(out, key=_data_key)
        if self.characteristic == 0 and not self.steps:
            return _rational_roots(p)
        raise UnsupportedFactorization(f"root finding of degree {n} over {self}")

    # ------------------------------------------------------------------ extensions
    def extend_algebraic(self, name: str, minpoly, check: bool = True) -> "FieldTower":
        return extend_algebraic(self, minpoly, name, check=check)

    def extend_transcendental(self, name: str) -> "FieldTower":
        return extend_transcendental(self, name)


def _data_key(d):
    """Total order on raw data, used for deterministic sorting."""
    if isinstance(d, tuple):
        return (1, tuple(_data_key(x) for x in d))
    return (0, d)


def _poly_sqrt(F, p):
    if not p:
        return ()
    n = upoly.degree(p)
    if n % 2:
        return None
    m = n // 2
    s = F.sqrt(upoly.lc(p))
    if s is None:
        return None
    r = [F.zero] * (m + 1)
    r[m] = s
    two_s = F.mul(F.from_int(2), s)
    for k in range(m - 1, -1, -1):
        acc = p[m + k]
        for i in range(k + 1, m + 1):
            j = m + k - i
            if k < j <= m:
                acc = F.sub(acc, F.mul(r[i], r[j]))
        r[k] = F.div(acc, two_s)
    root = upoly.strip(F, r)
    if upoly.mul(F, root, root) != p:
        return None
    return root


def _divisors(n: int) -> list:
    n = abs(n)
    out = set()
    for k in range(1, math.isqrt(n) + 1):
        if n % k == 0:
            out.update((k, n // k))
    return sorted(out)


def _rational_roots(p) -> list:
    roots = []
    if p[0] == 0:
        roots.append(Fraction(0))
        k = 0
        while p[k] == 0:
            k += 1
        p = p[k:]
    den = 1
    for c in p:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    if len(ints) > 1:
        for a in _divisors(ints[0]):
            for b in _divisors(ints[-1]):
                for sgn in (1, -1):
                    x = Fraction(sgn * a, b)
                    if x in roots:
                        continue
                    acc = Fraction(0)
                    for c in reversed(p):
                        acc = acc * x + c
                    if acc == 0:
                        roots.append(x)
    return sorted(set(roots))


class FieldElement:
    """An element of a :class:`FieldTower` with the usual operators."""

    __slots__ = ("field", "data")

    def __init__(self, field: FieldTower, data):
        self.field = field
        self.data = data

    def _other(self, other):
        return self.field.coerce(other)

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.data, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.data, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.data))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.data, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.data, self._other(other)))

    def __rtruediv__(self, other):
        return FieldElement(self.field, self.field.div(self._other(other), self.data))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.data))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.data, n))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.data))

    def is_zero(self) -> bool:
        return self.data == self.field.zero

    def sqrt(self):
        r = self.field.sqrt(self.data)
        return None if r is None else FieldElement(self.field, r)

    def __eq__(self, other):
        try:
            return self.data == self._other(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.data))

    def __str__(self):
        return self.field.format(self.data)

    def __repr__(self):
        return f"FieldElement({self})"


@dataclass(frozen=True)
class UPoly:
    """Univariate polynomial with coefficients in a field tower."""

    field: FieldTower
    coeffs: tuple  # raw data, lowest degree first, stripped

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def coefficient(self, i: int) -> FieldElement:
        F = self.field
        return F.element(self.coeffs[i] if i < len(self.coeffs) else F.zero)

    def __mul__(self, other: "UPoly") -> "UPoly":
        return UPoly(self.field, upoly.mul(self.field, self.coeffs, other.coeffs))

    def __add__(self, other: "UPoly") -> "UPoly":
        return UPoly(self.field, upoly.add(self.field, self.coeffs, other.coeffs))

    def __sub__(self, other: "UPoly") -> "UPoly":
        return UPoly(self.field, upoly.sub(self.field, self.coeffs, other.coeffs))

    def __pow__(self, n: int) -> "UPoly":
        return UPoly(self.field, upoly.power(self.field, self.coeffs, n))

    def __call__(self, x) -> FieldElement:
        F = self.field
        return F.element(upoly.evaluate(F, self.coeffs, F.coerce(x)))

    def scale(self, c) -> "UPoly":
        F = self.field
        return UPoly(F, upoly.scale(F, F.coerce(c), self.coeffs))

    def monic(self) -> "UPoly":
        return UPoly(self.field, upoly.monic(self.field, self.coeffs))

    def format(self, var="y") -> str:
        return upoly.fmt(self.field, self.coeffs, var)

    def __str__(self):
        return self.format()

    def sort_key(self):
        return (self.degree, _data_key(self.coeffs))


# ---------------------------------------------------------------------- constructors

def make_prime_field(characteristic: int) -> FieldTower:
    if characteristic != 0 and not _is_prime(characteristic):
        raise NonPrimeCharacteristic(f"{characteristic} is not 0 or a prime")
    return FieldTower(characteristic)


QQ = FieldTower(0)


def GF(p: int) -> FieldTower:
    return make_prime_field(p)


def _as_raw_poly(field: FieldTower, minpoly) -> tuple:
    if isinstance(minpoly, UPoly):
        if minpoly.field != field:
            return upoly.strip(field, [field.embed(minpoly.field, c) for c in minpoly.coeffs])
        return minpoly.coeffs
    return upoly.strip(field, [field.coerce(c) for c in minpoly])


def extend_algebraic(base: FieldTower, minpoly, name: str = "a", check: bool = True) -> FieldTower:
    if name in base.names:
        raise DuplicateGenerator(name)
    p = _as_raw_poly(base, minpoly)
    if upoly.degree(p) < 2:
        raise ValueError("minimal polynomial must have degree >= 2")
    if upoly.lc(p) != base.one:
        raise ValueError("minimal polynomial must be monic")
    if check:
        facs = _factor_raw(base, p)
        if len(facs) != 1 or facs[0][1] != 1:
            raise ReduciblePolynomial(
                f"{upoly.fmt(base, p)} = " + " * ".join(f"({upoly.fmt(base, f)})^{m}" for f, m in facs))
    return FieldTower(base.characteristic, base.steps + (Algebraic(name, p),))


def extend_transcendental(base: FieldTower, name: str = "x") -> FieldTower:
    if name in base.names:
        raise DuplicateGenerator(name)
    return FieldTower(base.characteristic, base.steps + (Transcendental(name),))


# ---------------------------------------------------------------------- factorization

def factor_univariate(field: FieldTower, poly) -> list:
    """Factor ``poly`` into monic irreducible factors with multiplicities.

    ``poly`` may be a :class:`UPoly` or a coefficient sequence (lowest degree
    first).  The product of the factors equals ``poly`` divided by its leading
    coefficient.  Factors are sorted by ``(degree, coefficients)``.
    """
    p = _as_raw_poly(field, poly)
    if not p:
        raise ValueError("cannot factor the zero polynomial")
    return [(UPoly(field, f), m) for f, m in _factor_raw(field, p)]


def _factor_raw(F: FieldTower, p) -> list:
    p = upoly.monic(F, p)
    if upoly.degree(p) <= 0:
        return []
    if F.is_finite:
        out = []
        for g, m in _sqfree_finite(F, p):
            for h in _split_finite(F, g):
                out.append((h, m))
    elif F.characteristic == 0 and upoly.degree(p) == 2:
        c, b, _ = p
        disc = F.sub(F.mul(b, b), F.mul(F.from_int(4), c))
        if disc == F.zero:
            out = [((F.mul(b, F.inv(F.from_int(2))), F.one), 2)]
        else:
            out = [(h, 1) for h in _split_char0(F, p)]
    elif F.characteristic == 0:
        out = []
        for g, m in _sqfree_char0(F, p):
            for h in _split_char0(F, g):
                out.append((h, m))
    else:
        raise UnsupportedFactorization(f"factorization over {F}")
    merged = {}
    for h, m in out:
        merged[h] = merged.get(h, 0) + m
    return sorted(merged.items(), key=lambda hm: (upoly.degree(hm[0]), _data_key(hm[0])))


def _sqfree_char0(F, p):
    """Yun's algorithm."""
    out = []
    dp = upoly.deriv(F, p)
    a = upoly.gcd(F, p, dp)
    b = upoly.divmod_(F, p, a)[0]
    c = upoly.divmod_(F, dp, a)[0]
    d = upoly.sub(F, c, upoly.deriv(F, b))
    i = 1
    while upoly.degree(b) > 0:
        a = upoly.gcd(F, b, d)
        if upoly.degree(a) > 0:
            out.append((a, i))
        b = upoly.divmod_(F, b, a)[0]
        c = upoly.divmod_(F, d, a)[0]
        d = upoly.sub(F, c, upoly.deriv(F, b))
        i += 1
    return out


def _pth_root(F, p):
    q = F.order
    e = q // F.characteristic
    return upoly.strip(F, [F.pow(p[i], e) for i in range(0, len(p), F.characteristic)])


def _sqfree_finite(F, f):
    out = []
    ch = F.characteristic
    df = upoly.deriv(F, f)
    if not df:
        return [(g, m * ch) for g, m in _sqfree_finite(F, _pth_root(F, f))]
    c = upoly.gcd(F, f, df)
    w = upoly.divmod_(F, f, c)[0]
    i = 1
    while upoly.degree(w) > 0:
        y = upoly.gcd(F, w, c)
        z = upoly.divmod_(F, w, y)[0]
        if upoly.degree(z) > 0:
            out.append((z, i))
        i += 1
        w = y
        c = upoly.divmod_(F, c, y)[0]
    if upoly.degree(c) > 0:
        out.extend((g, m * ch) for g, m in _sqfree_finite(F, _pth_root(F, c)))
    return out


def _split_finite(F, g):
    """Split a square-free monic polynomial over a finite field."""
    q = F.order
    y = (F.zero, F.one)
    out = []
    h = y
    i = 1
    while upoly.degree(g) >= 2 * i:
        h = upoly.powmod(F, h, q, g)
        d = upoly.gcd(F, g, upoly.sub(F, h, y))
        if upoly.degree(d) > 0:
            out.extend(_equal_degree(F, d, i))
            g = upoly.divmod_(F, g, d)[0]
            h = upoly.rem(F, h, g) if upoly.degree(g) > 0 else h
        i += 1
    if upoly.degree(g) > 0:
        out.append(g)
    return out


def _equal_degree(F, d, i):
    if upoly.degree(d) == i:
        return [d]
    if i == 1:
        return [(F.neg(r), F.one) for r in F.roots(d)]
    out = []
    elems = list(F.elements())
    for tail in itertools.product(elems, repeat=i):
        cand = tuple(tail) + (F.one,)
        if upoly.degree(d) == i:
            out.append(d)
            break
        quo, r = upoly.divmod_(F, d, cand)
        if not r:
            out.append(cand)
            d = quo
    return out


def _split_char0(F, g):
    n = upoly.degree(g)
    if n == 1:
        return [g]
    if n == 2:
        rs = F.roots(g)
        if not rs:
            return [g]
        return [(F.neg(r), F.one) for r in rs]
    if any(isinstance(s, Transcendental) for s in F.steps):
        raise UnsupportedFactorization(f"degree {n} over a tower with transcendental steps")
    if not F.steps:
        out = []
        for r in _rational_roots(g):
            lin = (F.neg(r), F.one)
            out.append(lin)
            g = upoly.divmod_(F, g, lin)[0]
        m = upoly.degree(g)
        if m <= 0:
            return out
        if m <= 3:
            return out + [g]
        if m == 4:
            return out + _split_quartic(F, g, rational=True)
        raise UnsupportedFactorization(f"degree {m} over Q without rational roots")
    if n == 4:
        return _split_quartic(F, g, rational=False)
    raise UnsupportedFactorization(f"degree {n} over {F}")


def _split_quartic(F, g, rational: bool):
    """Factor a monic quartic with no roots (over Q) into quadratics if possible."""
    a3 = g[3]
    shift = F.neg(F.div(a3, F.from_int(4)))
    h = upoly.compose_linear(F, g, F.one, shift)  # h(y) = g(y - a3/4)
    r, qq, p = h[0], h[1], h[2]
    if not rational and qq != F.zero:
        raise UnsupportedFactorization("non-biquadratic quartic over an algebraic tower")
    cands = []
    if qq == F.zero:
        disc = F.sub(F.mul(p, p), F.mul(F.from_int(4), r))
        sd = F.sqrt(disc)
        if sd is not None:
            half = F.inv(F.from_int(2))
            t = F.mul(F.add(p, sd), half)
            u = F.mul(F.sub(p, sd), half)
            cands.append(((t, F.zero, F.one), (u, F.zero, F.one)))
        sr = F.sqrt(r)
        if sr is not None:
            for rr in (sr, F.neg(sr)):
                S = F.add(F.neg(p), F.mul(F.from_int(2), rr))
                s = F.sqrt(S)
                if s is not None and s != F.zero:
                    t = F.mul(F.add(p, S), F.inv(F.from_int(2)))
                    cands.append(((t, s, F.one), (t, F.neg(s), F.one)))
    else:
        # resolvent cubic S^3 + 2p S^2 + (p^2 - 4r) S - q^2
        res = (F.neg(F.mul(qq, qq)), F.sub(F.mul(p, p), F.mul(F.from_int(4), r)),
               F.mul(F.from_int(2), p), F.one)
        for S in _rational_roots(res):
            s = F.sqrt(S)
            if s is None or s == F.zero:
                continue
            half = F.inv(F.from_int(2))
            t = F.mul(F.sub(F.add(p, S), F.div(qq, s)), half)
            u = F.mul(F.add(F.add(p, S), F.div(qq, s)), half)
            cands.append(((t, s, F.one), (u, F.neg(s), F.one)))
    for f1, f2 in cands:
        f1, f2 = upoly.strip(F, f1), upoly.strip(F, f2)
        if upoly.mul(F, f1, f2) == h:
            back = F.neg(shift)
            out = []
            for f in (f1, f2):
                f = upoly.compose_linear(F, f, F.one, back)
                out.extend(_split_char0(F, f))
            return out
    return [g]


# ---------------------------------------------------------------------- morphisms

@dataclass(frozen=True)
class FieldMorphism:
    """A ring morphism of field towers given by the images of the generators."""

    source: FieldTower
    target: FieldTower
    images: tuple  # raw target data, one per source step

    def __hash__(self):
        return hash((self.source, self.target, self.images))

    def _map(self, k: int, d):
        T = self.target
        if k == 0:
            if T.characteristic == 0:
                return T.from_fraction(d)
            return T.from_int(d)
        step = self.source.steps[k - 1]
        img = self.images[k - 1]
        if isinstance(step, Algebraic):
            acc = T.zero
            for c in reversed(d):
                acc = T.add(T.mul(acc, img), self._map(k - 1, c))
            return acc
        num, den = d
        nv = T.zero
        for c in reversed(num):
            nv = T.add(T.mul(nv, img), self._map(k - 1, c))
        dv = T.zero
        for c in reversed(den):
            dv = T.add(T.mul(dv, img), self._map(k - 1, c))
        if dv == T.zero:
            raise NotWellDefined(step.name, ": a denominator maps to zero")
        return T.div(nv, dv)

    def map_data(self, d):
        return self._map(len(self.source.steps), d)

    def map_level(self, k: int, d):
        """Apply the restriction of the morphism to source level ``k``."""
        return self._map(k, d)

    def __call__(self, x) -> FieldElement:
        if isinstance(x, FieldElement):
            d = self.source.coerce(x)
        else:
            d = self.source.coerce(x)
        return self.target.element(self.map_data(d))

    def map_poly(self, p: UPoly) -> UPoly:
        k = len(p.field.steps)
        if not p.field.is_prefix_of(self.source):
            raise TypeError("polynomial not over the source field")
        T = self.target
        return UPoly(T, upoly.strip(T, [self._map(k, c) for c in p.coeffs]))

    def compose(self, inner: "FieldMorphism") -> "FieldMorphism":
        """Return ``self o inner``."""
        if inner.target != self.source:
            raise TypeError("morphisms are not composable")
        return FieldMorphism(inner.source, self.target,
                             tuple(self.map_data(im) for im in inner.images))

    def power(self, n: int) -> "FieldMorphism":
        if self.source != self.target:
            raise TypeError("only endomorphisms have powers")
        out = identity_morphism(self.source)
        for _ in range(n):
            out = self.compose(out)
        return out

    def is_identity(self) -> bool:
        return self.source == self.target and self == identity_morphism(self.source)

    def order(self, bound: int = 64):
        """Least n >= 1 with self**n = id, or ``None`` within ``bound``."""
        f = self
        for n in range(1, bound + 1):
            if f.is_identity():
                return n
            f = self.compose(f)
        return None

    def inverse(self, bound: int = 64) -> "FieldMorphism":
        n = self.order(bound)
        if n is None:
            raise ValueError("automorphism of unknown finite order")
        return self.power(n - 1)

    def __str__(self):
        parts = [f"{s.name} -> {self.target.format(im)}" for s, im in zip(self.source.steps, self.images)]
        return "{" + ", ".join(parts) + "}"


def identity_morphism(F: FieldTower) -> FieldMorphism:
    return FieldMorphism(F, F, tuple(F.gen_data(k) for k in range(len(F.steps))))


def make_morphism(source: FieldTower, target: FieldTower, images: Sequence,
                  check: bool = True) -> FieldMorphism:
    """Build a morphism from generator images, verifying minimal polynomials."""
    if source.characteristic != target.characteristic:
        raise NotWellDefined("<prime field>", ": characteristics differ")
    if len(images) != len(source.steps):
        raise ValueError(f"expected {len(source.steps)} images, got {len(images)}")
    imgs = tuple(target.coerce(im) for im in images)
    m = FieldMorphism(source, target, imgs)
    if check:
        for k, step in enumerate(source.steps):
            if isinstance(step, Algebraic):
                coeffs = [m._map(k, c) for c in step.minpoly]
                if upoly.evaluate(target, upoly.strip(target, coeffs), imgs[k]) != target.zero:
                    raise NotWellDefined(step.name)
    return m


def inclusion(small: FieldTower, big: FieldTower) -> FieldMorphism:
    if not small.is_prefix_of(big):
        raise TypeError(f"{small} is not a subtower of {big}")
    return FieldMorphism(small, big, tuple(big.gen_data(k) for k in range(len(small.steps))))


# ---------------------------------------------------------------------- tensor products

@dataclass(frozen=True)
class TensorComponent:
    field: FieldTower
    left: FieldMorphism
    right: FieldMorphism
    factor: UPoly  # irreducible factor of the left generator's minimal polynomial over right


def tensor_decompose(left: FieldTower, right: FieldTower, over: FieldTower) -> list:
    """Split ``left (x)_over right`` into a product of fields.

    ``left`` must be ``over`` plus one algebraic step.  One component is
    returned per irreducible factor of that step's minimal polynomial over
    ``right``.
    """
    if not over.is_prefix_of(left) or not over.is_prefix_of(right):
        raise TypeError("both fields must extend the common base")
    extra = left.steps[len(over.steps):]
    if any(isinstance(s, Transcendental) for s in extra):
        raise NotFinite("left factor has a transcendental step over the base")
    if len(extra) != 1:
        raise UnsupportedFactorization("left factor must be a simple algebraic extension of the base")
    step = extra[0]
    f = upoly.strip(right, [right.embed(over, c) for c in step.minpoly])
    comps = []
    name = step.name
    while name in right.names:
        name += "'"
    for g, _mult in _factor_raw(right, f):
        if upoly.degree(g) == 1:
            comp = right
            root = right.neg(g[0])
        else:
            comp = FieldTower(right.characteristic, right.steps + (Algebraic(name, g),))
            root = comp.gen_data(len(right.steps))
        n_over = len(over.steps)
        left_imgs = tuple(comp.gen_data(k) for k in range(n_over)) + (root,)
        lmap = FieldMorphism(left, comp, left_imgs)
        rmap = inclusion(right, comp)
        comps.append(TensorComponent(comp, lmap, rmap, UPoly(right, g)))
    return comps
