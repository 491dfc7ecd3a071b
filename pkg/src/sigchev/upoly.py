"""Dense univariate polynomial arithmetic over a :class:`FieldTower`.

Polynomials are tuples of raw field data, lowest degree first, with no
trailing zeros.  The zero polynomial is the empty tuple.  Every function
takes the coefficient field ``F`` as first argument.
"""

from __future__ import annotations


def strip(F, p):
    p = list(p)
    z = F.zero
    while p and p[-1] == z:
        p.pop()
    return tuple(p)


def degree(p):
    return len(p) - 1


def lc(p):
    return p[-1]


def const(F, c):
    return () if c == F.zero else (c,)


def add(F, p, q):
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] = F.add(out[i], c)
    return strip(F, out)


def neg(F, p):
    return tuple(F.neg(c) for c in p)


def sub(F, p, q):
    return add(F, p, neg(F, q))


def scale(F, c, p):
    if c == F.zero:
        return ()
    return strip(F, [F.mul(c, a) for a in p])


def shift(F, p, k):
    """Multiply by y**k."""
    if not p:
        return ()
    return (F.zero,) * k + tuple(p)


def mul(F, p, q):
    if not p or not q:
        return ()
    out = [F.zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == F.zero:
            continue
        for j, b in enumerate(q):
            if b == F.zero:
                continue
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return strip(F, out)


def divmod_(F, p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    inv = F.inv(lc(q))
    dq = degree(q)
    rem = list(p)
    quo = [F.zero] * max(len(p) - dq, 0)
    for k in range(len(p) - 1, dq - 1, -1):
        c = rem[k]
        if c == F.zero:
            continue
        f = F.mul(c, inv)
        quo[k - dq] = f
        for j, b in enumerate(q):
            rem[k - dq + j] = F.sub(rem[k - dq + j], F.mul(f, b))
    return strip(F, quo), strip(F, rem[:dq])


def rem(F, p, q):
    return divmod_(F, p, q)[1]


def monic(F, p):
    if not p or p[-1] == F.one:
        return p
    return scale(F, F.inv(lc(p)), p)


def gcd(F, p, q):
    while q:
        p, q = q, rem(F, p, q)
    return monic(F, p)


def xgcd(F, p, q):
    """Return (g, s, t) with s*p + t*q = g monic."""
    r0, r1 = p, q
    s0, s1 = (F.one,), ()
    t0, t1 = (), (F.one,)
    while r1:
        quo, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, quo, s1))
        t0, t1 = t1, sub(F, t0, mul(F, quo, t1))
    if not r0:
        return (), (), ()
    inv = F.inv(lc(r0))
    return scale(F, inv, r0), scale(F, inv, s0), scale(F, inv, t0)


def deriv(F, p):
    return strip(F, [F.mul(F.from_int(i), p[i]) for i in range(1, len(p))])


def evaluate(F, p, x):
    acc = F.zero
    for c in reversed(p):
        acc = F.add(F.mul(acc, x), c)
    return acc


def power(F, p, n):
    out = (F.one,)
    base = p
    while n:
        if n & 1:
            out = mul(F, out, base)
        base = mul(F, base, base)
        n >>= 1
    return out


def powmod(F, p, n, m):
    out = (F.one,)
    base = rem(F, p, m)
    while n:
        if n & 1:
            out = rem(F, mul(F, out, base), m)
        base = rem(F, mul(F, base, base), m)
        n >>= 1
    return out


def compose_linear(F, p, a, b):
    """Return p(a*y + b)."""
    lin = strip(F, (b, a))
    out = ()
    for c in reversed(p):
        out = add(F, mul(F, out, lin), const(F, c))
    return out


def fmt(F, p, var="y"):
    if not p:
        return "0"
    terms = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if c == F.zero:
            continue
        cs = F.format(c)
        if i == 0:
            terms.append(cs)
            continue
        mono = var if i == 1 else f"{var}^{i}"
        if cs == "1":
            terms.append(mono)
        elif cs == "-1":
            terms.append("-" + mono)
        elif F.format_is_atomic(c):
            terms.append(f"{cs}*{mono}")
        else:
            terms.append(f"({cs})*{mono}")
    out = " + ".join(terms)
    return out.replace("+ -", "- ")
