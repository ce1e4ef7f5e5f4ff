"""Dense polynomial arithmetic modulo m.

Polynomials are tuples of ints in [0, m), constant-first, trailing zeros
trimmed.  Used for factorization mod a prime (Cantor-Zassenhaus) and for
Hensel lifting mod prime powers.  The prime-field multiply routes through a
numpy int64 convolution when the modulus is small enough for that to be
overflow-safe.
"""

from __future__ import annotations

import random

import numpy as np

_NUMPY_MOD_LIMIT = 1 << 20  # m*m*len must stay below 2**63


def trim(cs) -> tuple:
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def from_int_coeffs(coeffs, m: int) -> tuple:
    return trim(c % m for c in coeffs)


def deg(a) -> int:
    return len(a) - 1


def add(a, b, m):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % m
    return trim(out)


def sub(a, b, m):
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % m
    return trim(out)


def scalar_mul(k, a, m):
    k %= m
    if k == 0:
        return ()
    return trim((k * c) % m for c in a)


def mul(a, b, m):
    if not a or not b:
        return ()
    n = len(a) + len(b) - 1
    if m <= _NUMPY_MOD_LIMIT and m * m * min(len(a), len(b)) < (1 << 62):
        av = np.array(a, dtype=np.int64)
        bv = np.array(b, dtype=np.int64)
        return trim((np.convolve(av, bv) % m).tolist())
    out = [0] * n
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return trim(c % m for c in out)


def divmod_poly(a, b, m):
    """Division with remainder; lc(b) must be invertible mod m."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    inv = pow(b[-1], -1, m)
    rem = list(a)
    db = len(b) - 1
    if len(rem) - 1 < db:
        return (), trim(rem)
    q = [0] * (len(rem) - db)
    for k in range(len(rem) - db - 1, -1, -1):
        c = (rem[k + db] * inv) % m
        q[k] = c
        if c:
            for j, bc in enumerate(b):
                rem[k + j] = (rem[k + j] - c * bc) % m
    return trim(q), trim(rem[:db])


def rem(a, b, m):
    return divmod_poly(a, b, m)[1]


def monic(a, m):
    if not a:
        return ()
    inv = pow(a[-1], -1, m)
    return scalar_mul(inv, a, m)


def gcd(a, b, p):
    """Monic gcd over the field with p elements."""
    while b:
        a, b = b, rem(a, b, p)
    return monic(a, p)


def deriv(a, m):
    return trim((i * c) % m for i, c in enumerate(a) if i >= 1)


def powmod(a, e, f, m):
    """a^e mod (f, m)."""
    result = (1,)
    base = rem(a, f, m)
    while e:
        if e & 1:
            result = rem(mul(result, base, m), f, m)
        base = rem(mul(base, base, m), f, m)
        e >>= 1
    return result


def eval_at(a, x, m):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % m
    return acc


def is_squarefree(f, p) -> bool:
    if len(f) <= 2:
        return True
    d = deriv(f, p)
    if not d:
        return False
    return deg(gcd(f, d, p)) == 0


# ---------------------------------------------------------------------------
# factorization of squarefree polynomials over F_p
# ---------------------------------------------------------------------------


def distinct_degree(f, p, max_degree=None):
    """Split monic squarefree f into [(d, product of irreducibles of degree d)].

    With max_degree set, stops after that degree and appends the unsplit
    remainder as (None, rest) when nonempty.
    """
    f = monic(f, p)
    out = []
    h = (0, 1)  # X
    frob = h
    d = 0
    limit = max_degree if max_degree is not None else deg(f)
    while deg(f) > 0 and d < limit:
        d += 1
        frob = powmod(frob, p, f, p)
        g = gcd(sub(frob, (0, 1), p), f, p)
        if deg(g) > 0:
            out.append((d, g))
            f = divmod_poly(f, g, p)[0]
            frob = rem(frob, f, p) if deg(f) > 0 else ()
        if deg(f) > 0 and deg(f) < 2 * (d + 1):
            # remainder is irreducible
            out.append((deg(f), monic(f, p)))
            f = (1,)
            break
    if deg(f) > 0:
        if max_degree is None:
            out.append((deg(f), monic(f, p)))
        else:
            out.append((None, monic(f, p)))
    return out


def _split_equal_degree(f, d, p, rng):
    """Cantor-Zassenhaus split of f = product of irreducibles of degree d."""
    n = deg(f)
    if n == d:
        return [f]
    while True:
        r = trim([rng.randrange(p) for _ in range(n)] or [1])
        if deg(r) < 1:
            continue
        if p == 2:
            # trace map over F_{2^d}
            t = r
            acc = r
            for _ in range(d - 1):
                t = powmod(t, 2, f, p)
                acc = add(acc, t, p)
            g = gcd(acc, f, p)
        else:
            e = (p**d - 1) // 2
            t = powmod(r, e, f, p)
            g = gcd(sub(t, (1,), p), f, p)
        if 0 < deg(g) < n:
            left = _split_equal_degree(g, d, p, rng)
            right = _split_equal_degree(divmod_poly(f, g, p)[0], d, p, rng)
            return left + right


def factor_squarefree(f, p, max_degree=None, seed=0x5EED):
    """Monic irreducible factors of a squarefree f over F_p, sorted.

    With max_degree set, only factors of degree <= max_degree are split off;
    the product of all larger factors is returned as the second element.
    """
    rng = random.Random(seed)
    f = monic(f, p)
    small = []
    rest = (1,)
    for d, g in distinct_degree(f, p, max_degree):
        if d is None or (max_degree is not None and d > max_degree):
            rest = mul(rest, g, p)
            continue
        small.extend(_split_equal_degree(g, d, p, rng))
    small.sort(key=lambda h: (len(h), h))
    if max_degree is None:
        return small
    return small, rest


def degree_pattern(f, p):
    """Multiset of irreducible factor degrees of squarefree monic f mod p."""
    out = []
    for d, g in distinct_degree(monic(f, p), p):
        out.extend([d] * (deg(g) // d))
    return sorted(out)


# ---------------------------------------------------------------------------
# extended gcd and Hensel lifting
# ---------------------------------------------------------------------------


def ext_gcd(a, b, p):
    """(g, s, t) monic with s*a + t*b = g over F_p."""
    r0, r1 = a, b
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        q, r = divmod_poly(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, p), p)
        t0, t1 = t1, sub(t0, mul(q, t1, p), p)
    if not r0:
        raise ZeroDivisionError("gcd of zero polynomials")
    inv = pow(r0[-1], -1, p)
    return scalar_mul(inv, r0, p), scalar_mul(inv, s0, p), scalar_mul(inv, t0, p)


def hensel_step(f, g, h, s, t, m):
    """One quadratic Hensel step: factorization mod m -> mod m*m.

    Requires f = g*h (mod m), s*g + t*h = 1 (mod m), h monic,
    deg f = deg g + deg h, deg s < deg h, deg t < deg g.
    """
    m2 = m * m
    e = sub(from_int_coeffs(f, m2), mul(g, h, m2), m2)
    q, r = divmod_poly(mul(s, e, m2), h, m2)
    g1 = add(add(g, mul(t, e, m2), m2), mul(q, g, m2), m2)
    h1 = add(h, r, m2)
    b = sub(add(mul(s, g1, m2), mul(t, h1, m2), m2), (1,), m2)
    c, d = divmod_poly(mul(s, b, m2), h1, m2)
    s1 = sub(s, d, m2)
    t1 = sub(sub(t, mul(t, b, m2), m2), mul(c, g1, m2), m2)
    return g1, h1, s1, t1


def hensel_lift_pair(f, g, h, p, target_modulus):
    """Lift f = g*h from mod p to mod p^k >= target_modulus; h, g as given
    (h monic; g monic or with unit leading coefficient mod p)."""
    _, s, t = ext_gcd(g, h, p)
    m = p
    while m < target_modulus:
        g, h, s, t = hensel_step(f, g, h, s, t, m)
        m = m * m
    return from_int_coeffs(g, target_modulus), from_int_coeffs(h, target_modulus), m


def hensel_lift_multi(f, factors, p, target_modulus):
    """Lift a coprime monic factorization of monic f mod p to mod p^k.

    Returns (lifted factors, modulus p^k with p^k >= target_modulus).
    Binary-tree splitting keeps the lifting balanced.
    """
    # choose k with p^k >= target_modulus
    modulus = p
    while modulus < target_modulus:
        modulus *= p

    def lift(fcur, facs):
        if len(facs) == 1:
            return [from_int_coeffs(fcur, modulus)]
        half = len(facs) // 2
        g = (1,)
        for a in facs[:half]:
            g = mul(g, a, p)
        h = (1,)
        for a in facs[half:]:
            h = mul(h, a, p)
        gl, hl, _ = hensel_lift_pair(fcur, g, h, p, modulus)
        return lift(gl, facs[:half]) + lift(hl, facs[half:])

    return lift(from_int_coeffs(f, modulus), list(factors)), modulus


def symmetric_lift(a, m):
    """Coefficients lifted to the symmetric range (-m/2, m/2]."""
    half = m // 2
    return tuple(c - m if c > half else c for c in a)
