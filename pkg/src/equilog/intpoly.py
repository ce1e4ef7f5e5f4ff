"""Exact integer polynomials.

Dense univariate polynomials over Z with arbitrary-precision coefficients:
arithmetic, norms, modular reduction, exact division, squarefree splitting,
resultants, and the generalized Eisenstein certificate.  Everything here is
exact; certified numerics live in :mod:`equilog.numeric`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

NEG_INF = float("-inf")  # degree of the zero polynomial

_TERM_RE = re.compile(
    r"\s*([+-])?\s*(\d+)?\s*\*?\s*([xX])?\s*(?:\^\s*(\d+))?\s*"
)


class IntPoly:
    """Immutable dense polynomial over Z, coefficients constant-first."""

    __slots__ = ("coeffs",)

    coeffs: tuple

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def zero() -> "IntPoly":
        return IntPoly(())

    @staticmethod
    def one() -> "IntPoly":
        return IntPoly((1,))

    @staticmethod
    def constant(c: int) -> "IntPoly":
        return IntPoly((c,))

    @staticmethod
    def x_power(k: int, coeff: int = 1) -> "IntPoly":
        if k < 0:
            raise ValueError("negative exponent")
        return IntPoly((0,) * k + (coeff,))

    # -- basic queries -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self):
        """Degree, or -inf for the zero polynomial (never a fake -1)."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def leading(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("IntPoly", self.coeffs))

    # -- ring operations -----------------------------------------------------

    def __neg__(self) -> "IntPoly":
        return IntPoly(-c for c in self.coeffs)

    def __add__(self, other) -> "IntPoly":
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(out)

    __radd__ = __add__

    def __sub__(self, other) -> "IntPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "IntPoly":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            return IntPoly(other * c for c in self.coeffs)
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly(())
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "IntPoly":
        if n < 0:
            raise ValueError("negative power")
        result = IntPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "IntPoly":
        """Multiply by X^k."""
        if self.is_zero:
            return self
        return IntPoly((0,) * k + self.coeffs)

    def derivative(self) -> "IntPoly":
        return IntPoly(i * c for i, c in enumerate(self.coeffs) if i >= 1)

    def reverse(self) -> "IntPoly":
        """X^deg * P(1/X).  Requires a nonzero constant term to be degree-preserving."""
        return IntPoly(tuple(reversed(self.coeffs)))

    # -- formatting ----------------------------------------------------------

    def __repr__(self) -> str:
        return f"IntPoly({self.to_human()!r})"

    def to_csv(self) -> str:
        """Dense coefficient list "a0,a1,...,ad"."""
        if self.is_zero:
            return "0"
        return ",".join(str(c) for c in self.coeffs)

    def to_human(self) -> str:
        """Human form such as "X^2 - X - 1"."""
        if self.is_zero:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                var = "X" if i == 1 else f"X^{i}"
                body = var if mag == 1 else f"{mag}{var}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    @staticmethod
    def parse(text: str) -> "IntPoly":
        """Parse either "a0,a1,...,ad" or a human form like "X^2 - X - 1"."""
        text = text.strip()
        if not text:
            raise ValueError("empty polynomial text")
        if "," in text:
            return IntPoly(int(tok.strip()) for tok in text.split(","))
        if re.fullmatch(r"[+-]?\d+", text):
            return IntPoly.constant(int(text))
        return _parse_human(text)

    # -- evaluation ----------------------------------------------------------

    def __call__(self, x):
        return eval_exact(self, x)


def _coerce(value) -> IntPoly:
    if isinstance(value, IntPoly):
        return value
    if isinstance(value, int):
        return IntPoly.constant(value)
    raise TypeError(f"cannot coerce {type(value)!r} to IntPoly")


def _parse_human(text: str) -> IntPoly:
    coeffs: dict[int, int] = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at ...{text[pos:]!r}")
        sign, num, var, exp = m.groups()
        if sign is None and not first:
            raise ValueError(f"missing sign before ...{text[pos:]!r}")
        if num is None and var is None:
            raise ValueError(f"empty term at ...{text[pos:]!r}")
        c = int(num) if num is not None else 1
        if sign == "-":
            c = -c
        if var is None:
            k = 0
            if exp is not None:
                raise ValueError("exponent without variable")
        else:
            k = int(exp) if exp is not None else 1
        coeffs[k] = coeffs.get(k, 0) + c
        pos = m.end()
        first = False
    deg = max(coeffs) if coeffs else 0
    return IntPoly(coeffs.get(i, 0) for i in range(deg + 1))


# ---------------------------------------------------------------------------
# exact scalar fields for evaluation oracles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussRational:
    """Element of Q(i), used as an exact evaluation field in oracles."""

    re: Fraction
    im: Fraction

    @staticmethod
    def of(re, im=0) -> "GaussRational":
        return GaussRational(Fraction(re), Fraction(im))

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __add__(self, other: "GaussRational") -> "GaussRational":
        other = _gauss(other)
        return GaussRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "GaussRational":
        return GaussRational(-self.re, -self.im)

    def __sub__(self, other) -> "GaussRational":
        return self + (-_gauss(other))

    def __rsub__(self, other) -> "GaussRational":
        return _gauss(other) + (-self)

    def __mul__(self, other) -> "GaussRational":
        other = _gauss(other)
        return GaussRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conj(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other) -> "GaussRational":
        other = _gauss(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conj()
        return GaussRational(num.re / n, num.im / n)

    def __pow__(self, k: int) -> "GaussRational":
        if k < 0:
            return GaussRational.of(1) / (self ** (-k))
        result = GaussRational.of(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


def _gauss(value) -> GaussRational:
    if isinstance(value, GaussRational):
        return value
    if isinstance(value, (int, Fraction)):
        return GaussRational(Fraction(value), Fraction(0))
    raise TypeError(f"cannot coerce {type(value)!r} to GaussRational")


ExactScalar = Union[int, Fraction, GaussRational]


def eval_exact(P: IntPoly, x: ExactScalar):
    """Horner evaluation of P at an exact field element.

    Accepts integers, rationals, and Gaussian rationals; the result stays in
    the same field (integers promote to Fraction).
    """
    if isinstance(x, GaussRational):
        acc = GaussRational.of(0)
        for c in reversed(P.coeffs):
            acc = acc * x + GaussRational.of(c)
        return acc
    if isinstance(x, int):
        acc_i = 0
        for c in reversed(P.coeffs):
            acc_i = acc_i * x + c
        return acc_i
    if isinstance(x, Fraction):
        acc_f = Fraction(0)
        for c in reversed(P.coeffs):
            acc_f = acc_f * x + c
        return acc_f
    raise TypeError(f"unsupported evaluation scalar {type(x)!r}")


# ---------------------------------------------------------------------------
# norms and simple transforms
# ---------------------------------------------------------------------------


def l1_norm(P: IntPoly) -> int:
    """Sum of absolute values of the coefficients; 0 exactly for P = 0."""
    return sum(abs(c) for c in P.coeffs)


def max_norm(P: IntPoly) -> int:
    return max((abs(c) for c in P.coeffs), default=0)


def l2_norm_squared(P: IntPoly) -> int:
    return sum(c * c for c in P.coeffs)


def substitute_power(P: IntPoly, n: int) -> IntPoly:
    """P(X^n).  Preserves the l1 norm and multiplies the degree by n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if P.is_zero or n == 1:
        return P
    out = [0] * (n * (len(P.coeffs) - 1) + 1)
    for i, c in enumerate(P.coeffs):
        out[n * i] = c
    return IntPoly(out)


def content(P: IntPoly) -> int:
    """Nonnegative gcd of the coefficients (0 for the zero polynomial)."""
    g = 0
    for c in P.coeffs:
        g = math.gcd(g, c)
        if g == 1:
            return 1
    return g


def primitive_part(P: IntPoly) -> IntPoly:
    """P divided by its content; sign of the leading coefficient preserved."""
    c = content(P)
    if c in (0, 1):
        return P
    return IntPoly(x // c for x in P.coeffs)


def sign_normalize(P: IntPoly) -> IntPoly:
    """Flip the sign so the leading coefficient is positive."""
    if not P.is_zero and P.leading < 0:
        return -P
    return P


def reduce_mod(P: IntPoly, m: int) -> tuple:
    """Coefficients of P reduced into [0, m), trimmed, constant-first."""
    if m <= 1:
        raise ValueError("modulus must be >= 2")
    out = [c % m for c in P.coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def exact_divide(R: IntPoly, S: IntPoly) -> Optional[IntPoly]:
    """Return T with S*T = R exactly over Z, or None if S does not divide R."""
    if S.is_zero:
        raise ZeroDivisionError("division by zero polynomial")
    if R.is_zero:
        return IntPoly.zero()
    if R.degree < S.degree:
        return None
    rem = list(R.coeffs)
    s = S.coeffs
    lead = s[-1]
    qdeg = len(rem) - len(s)
    q = [0] * (qdeg + 1)
    for k in range(qdeg, -1, -1):
        c = rem[k + len(s) - 1]
        if c % lead:
            return None
        t = c // lead
        q[k] = t
        if t:
            for j, sc in enumerate(s):
                rem[k + j] -= t * sc
    if any(rem):
        return None
    return IntPoly(q)


# ---------------------------------------------------------------------------
# gcd machinery (subresultant PRS) and squarefree splitting
# ---------------------------------------------------------------------------


def _pseudo_rem(A: IntPoly, B: IntPoly) -> IntPoly:
    """prem(A, B): lc(B)^(degA-degB+1) * A mod B, exact over Z."""
    da, db = A.degree, B.degree
    if da < db:
        return A
    rem = list(A.coeffs)
    b = B.coeffs
    lb = b[-1]
    for k in range(da - db, -1, -1):
        top = rem[k + db]
        for i in range(len(rem)):
            rem[i] *= lb
        if top:
            for j, bc in enumerate(b):
                rem[k + j] -= top * bc
        rem[k + db] = 0
        # rem now has degree < k + db
        rem = rem[: k + db]
        if not any(rem):
            return IntPoly(())
    return IntPoly(rem)


def divides_in_q(S: IntPoly, P: IntPoly) -> bool:
    """True iff S divides P in Q[X] (pseudo-remainder test)."""
    if S.is_zero:
        return P.is_zero
    if P.is_zero:
        return True
    if P.degree < S.degree:
        return False
    return _pseudo_rem(P, S).is_zero


def poly_gcd(A: IntPoly, B: IntPoly) -> IntPoly:
    """Gcd in Z[X], primitive with positive leading coefficient times
    the gcd of the contents."""
    if A.is_zero:
        return sign_normalize(B)
    if B.is_zero:
        return sign_normalize(A)
    ca, cb = content(A), content(B)
    g = math.gcd(ca, cb)
    a, b = primitive_part(A), primitive_part(B)
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero:
        r = _pseudo_rem(a, b)
        a, b = b, primitive_part(r)
    return sign_normalize(a) * g


def squarefree_decomposition(P: IntPoly) -> list:
    """Yun's algorithm: [(factor, multiplicity)] with P = c * prod f_i^{m_i},
    each f_i squarefree, primitive, positive leading coefficient."""
    if P.is_zero:
        raise ValueError("zero polynomial")
    f = sign_normalize(primitive_part(P))
    if f.degree == 0:
        return []
    out = []
    df = f.derivative()
    g = poly_gcd(f, df)
    if g.degree == 0:
        return [(f, 1)]
    w = exact_divide(f, g)
    y = exact_divide(df, g)
    z = y - w.derivative()
    i = 1
    while w.degree > 0:
        gi = poly_gcd(w, z)
        if gi.degree > 0:
            out.append((sign_normalize(gi), i))
        w2 = exact_divide(w, gi)
        y2 = exact_divide(z, gi)
        w, y = w2, y2
        z = y - w.derivative()
        i += 1
    return out


def squarefree_part(P: IntPoly) -> IntPoly:
    parts = squarefree_decomposition(P)
    out = IntPoly.one()
    for f, _ in parts:
        out = out * f
    return out


# ---------------------------------------------------------------------------
# resultants
# ---------------------------------------------------------------------------


def resultant(F: IntPoly, G: IntPoly) -> int:
    """Resultant over Z, computed through a rational Euclidean sequence."""
    if F.is_zero or G.is_zero:
        return 0
    f = [Fraction(c) for c in F.coeffs]
    g = [Fraction(c) for c in G.coeffs]
    res = Fraction(1)
    while True:
        m, n = len(f) - 1, len(g) - 1
        if n == 0:
            res *= g[0] ** m
            break
        r = _frac_mod(f, g)
        if not r:
            return 0
        d = len(r) - 1
        res *= (-1) ** (m * n) * g[-1] ** (m - d)
        f, g = g, r
    assert res.denominator == 1
    return int(res)


def _frac_mod(f: list, g: list) -> list:
    r = list(f)
    lg = g[-1]
    while len(r) >= len(g):
        t = r[-1] / lg
        k = len(r) - len(g)
        for j in range(len(g) - 1):
            r[k + j] -= t * g[j]
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return r


def discriminant_nonzero(P: IntPoly) -> bool:
    """True iff P is squarefree (gcd with derivative is constant)."""
    if P.degree < 1:
        return True
    return poly_gcd(P, P.derivative()).degree == 0


# ---------------------------------------------------------------------------
# Eisenstein certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EisensteinCertificate:
    """Witness that R has an irreducible integer factor of degree >= e.

    Valid when prime^2 does not divide R(0) and R mod prime equals X^e times
    a polynomial with nonzero constant term (e maximal).
    """

    prime: int
    e: int


def eisenstein_degree(R: IntPoly, q: int) -> Optional[EisensteinCertificate]:
    """Certificate with the maximal e such that X^e exactly divides R mod q,
    provided e >= 1, R mod q != 0, and q^2 does not divide R(0)."""
    if R.is_zero:
        raise ValueError("zero polynomial")
    red = reduce_mod(R, q)
    if not red:
        return None
    e = 0
    while red[e] == 0:
        e += 1
    if e < 1:
        return None
    if R.coeff(0) % (q * q) == 0:
        return None
    return EisensteinCertificate(prime=q, e=e)


def verify_certificate(R: IntPoly, cert: EisensteinCertificate) -> bool:
    """Re-check a certificate by direct reduction."""
    q, e = cert.prime, cert.e
    red = reduce_mod(R, q)
    if not red or len(red) <= e:
        return False
    if any(red[i] for i in range(e)) or red[e] == 0:
        return False
    return R.coeff(0) % (q * q) != 0


# ---------------------------------------------------------------------------
# cyclotomic polynomials
# ---------------------------------------------------------------------------

_CYCLOTOMIC_CACHE: dict[int, IntPoly] = {}


def cyclotomic(n: int) -> IntPoly:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n in _CYCLOTOMIC_CACHE:
        return _CYCLOTOMIC_CACHE[n]
    poly = IntPoly.x_power(n) - IntPoly.one()
    for d in range(1, n):
        if n % d == 0:
            poly = exact_divide(poly, cyclotomic(d))
    _CYCLOTOMIC_CACHE[n] = poly
    return poly


def euler_phi(n: int) -> int:
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result
