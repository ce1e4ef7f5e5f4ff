"""Certified arbitrary-precision numerics.

RealBall and ComplexBall are midpoint-radius style enclosures stored as
endpoint pairs of MPFR floats; every operation rounds outward, so the result
ball always contains the exact image of the operand intervals.  On top of the
ball layer sit a simultaneous-iteration complex root finder with a posteriori
disk certification, the Mahler measure through the root product, and a
non-certified circle-average quadrature used purely as a cross-check oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .errors import BallDomainError, GridDegenerate, PrecisionExhausted
from .intpoly import IntPoly, GaussRational, squarefree_decomposition

DEFAULT_PRECISION = 256
PRECISION_CAP = 4096

_CTX_CACHE: dict = {}


def _ctx(prec: int):
    trio = _CTX_CACHE.get(prec)
    if trio is None:
        trio = (
            gmpy2.context(precision=prec, round=gmpy2.RoundDown),
            gmpy2.context(precision=prec, round=gmpy2.RoundUp),
            gmpy2.context(precision=prec, round=gmpy2.RoundToNearest),
        )
        _CTX_CACHE[prec] = trio
    return trio


def _exact_neg(x):
    """Negation preserving the operand's precision (always exact).

    Python's unary minus on an mpfr rounds to the default 53-bit context,
    which would corrupt ball endpoints; never use it on endpoints."""
    return gmpy2.context(precision=max(x.precision, 2)).minus(x)


class RealBall:
    """Closed interval [lo, hi] with outward-rounded arithmetic."""

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo, hi, prec: int):
        self.lo = lo
        self.hi = hi
        self.prec = prec

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_int(k: int, prec: int) -> "RealBall":
        cd, cu, _ = _ctx(prec)
        return RealBall(cd.div(k, 1), cu.div(k, 1), prec)

    @staticmethod
    def from_fraction(x, prec: int) -> "RealBall":
        x = Fraction(x)
        cd, cu, _ = _ctx(prec)
        return RealBall(cd.div(x.numerator, x.denominator),
                        cu.div(x.numerator, x.denominator), prec)

    @staticmethod
    def point(x, prec: int) -> "RealBall":
        """Exact singleton ball around an mpfr value (stored as-is, no
        re-rounding; mpfr values are immutable)."""
        if not isinstance(x, mpfr):
            if isinstance(x, int):
                return RealBall.from_int(x, prec)
            raise TypeError("point() expects an mpfr or int")
        return RealBall(x, x, prec)

    @staticmethod
    def from_endpoints(lo, hi, prec: int) -> "RealBall":
        return RealBall(mpfr(lo), mpfr(hi), prec)

    @staticmethod
    def log_of_int(k: int, prec: int) -> "RealBall":
        if k <= 0:
            raise BallDomainError("log of a nonpositive integer")
        cd, cu, _ = _ctx(prec)
        return RealBall(cd.log(k), cu.log(k), prec)

    @staticmethod
    def pi(prec: int) -> "RealBall":
        cd, cu, _ = _ctx(prec)
        return RealBall(cd.const_pi(), cu.const_pi(), prec)

    # -- queries ---------------------------------------------------------

    @property
    def inf(self):
        return self.lo

    @property
    def sup(self):
        return self.hi

    @property
    def mid(self):
        _, cu, cn = _ctx(self.prec)
        return cn.div(cn.add(self.lo, self.hi), 2)

    @property
    def rad(self):
        _, cu, _ = _ctx(self.prec)
        m = self.mid
        r = max(cu.sub(self.hi, m), cu.sub(m, self.lo))
        return max(r, mpfr(0))

    @property
    def width(self):
        _, cu, _ = _ctx(self.prec)
        return cu.sub(self.hi, self.lo)

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def contains(self, x) -> bool:
        """Exact membership test for an int or Fraction."""
        x = Fraction(x)
        q = gmpy2.mpq(x.numerator, x.denominator)
        return self.lo <= q and q <= self.hi

    def is_nonnegative(self) -> bool:
        return self.lo >= 0

    def is_positive(self) -> bool:
        return self.lo > 0

    def overlaps(self, other: "RealBall") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __repr__(self):
        return f"RealBall[{self.lo!s}, {self.hi!s}]"

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> "RealBall":
        if isinstance(other, RealBall):
            return other
        if isinstance(other, int):
            return RealBall.from_int(other, self.prec)
        if isinstance(other, Fraction):
            return RealBall.from_fraction(other, self.prec)
        raise TypeError(f"cannot mix RealBall with {type(other)!r}")

    def __neg__(self) -> "RealBall":
        return RealBall(_exact_neg(self.hi), _exact_neg(self.lo), self.prec)

    def __add__(self, other) -> "RealBall":
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        cd, cu, _ = _ctx(prec)
        return RealBall(cd.add(self.lo, other.lo), cu.add(self.hi, other.hi), prec)

    __radd__ = __add__

    def __sub__(self, other) -> "RealBall":
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        cd, cu, _ = _ctx(prec)
        return RealBall(cd.sub(self.lo, other.hi), cu.sub(self.hi, other.lo), prec)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other) -> "RealBall":
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        cd, cu, _ = _ctx(prec)
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        lo = min(cd.mul(a, c), cd.mul(a, d), cd.mul(b, c), cd.mul(b, d))
        hi = max(cu.mul(a, c), cu.mul(a, d), cu.mul(b, c), cu.mul(b, d))
        return RealBall(lo, hi, prec)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RealBall":
        other = self._coerce(other)
        if other.contains_zero():
            raise BallDomainError("division by a ball containing zero")
        prec = max(self.prec, other.prec)
        cd, cu, _ = _ctx(prec)
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        lo = min(cd.div(a, c), cd.div(a, d), cd.div(b, c), cd.div(b, d))
        hi = max(cu.div(a, c), cu.div(a, d), cu.div(b, c), cu.div(b, d))
        return RealBall(lo, hi, prec)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def sqr(self) -> "RealBall":
        cd, cu, _ = _ctx(self.prec)
        a, b = self.lo, self.hi
        if a >= 0:
            return RealBall(cd.mul(a, a), cu.mul(b, b), self.prec)
        if b <= 0:
            return RealBall(cd.mul(b, b), cu.mul(a, a), self.prec)
        return RealBall(mpfr(0), max(cu.mul(a, a), cu.mul(b, b)), self.prec)

    def abs(self) -> "RealBall":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RealBall(mpfr(0), max(_exact_neg(self.lo), self.hi), self.prec)

    def sqrt(self) -> "RealBall":
        if self.hi < 0:
            raise BallDomainError("sqrt of a negative ball")
        cd, cu, _ = _ctx(self.prec)
        lo = cd.sqrt(max(self.lo, mpfr(0)))
        return RealBall(lo, cu.sqrt(self.hi), self.prec)

    def log(self) -> "RealBall":
        if self.lo <= 0:
            raise BallDomainError("log of a ball touching (-inf, 0]")
        cd, cu, _ = _ctx(self.prec)
        return RealBall(cd.log(self.lo), cu.log(self.hi), self.prec)

    def exp(self) -> "RealBall":
        cd, cu, _ = _ctx(self.prec)
        return RealBall(cd.exp(self.lo), cu.exp(self.hi), self.prec)

    def pow_int(self, k: int) -> "RealBall":
        if k == 0:
            return RealBall.from_int(1, self.prec)
        if k < 0:
            return RealBall.from_int(1, self.prec) / self.pow_int(-k)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base.sqr()
        return result

    def max1(self) -> "RealBall":
        """max(1, ball), the monotone enclosure used by the Mahler product."""
        one = mpfr(1)
        return RealBall(max(self.lo, one), max(self.hi, one), self.prec)

    def clamp_nonnegative(self) -> "RealBall":
        zero = mpfr(0)
        return RealBall(max(self.lo, zero), max(self.hi, zero), self.prec)

    def union(self, other: "RealBall") -> "RealBall":
        prec = max(self.prec, other.prec)
        return RealBall(min(self.lo, other.lo), max(self.hi, other.hi), prec)

    def intersect(self, other: "RealBall") -> Optional["RealBall"]:
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return RealBall(lo, hi, max(self.prec, other.prec))

    def round_to(self, prec: int) -> "RealBall":
        cd, cu, _ = _ctx(prec)
        return RealBall(cd.add(self.lo, 0), cu.add(self.hi, 0), prec)

    def as_dict(self) -> dict:
        """Deterministic serialization: decimal strings for mid and rad."""
        digits = max(8, int(self.prec * 0.30103) + 2)
        return {
            "mid": f"{self.mid:.{digits}e}",
            "rad": f"{self.rad:.8e}",
            "bits": self.prec,
        }


def ball_le(a: RealBall, b: RealBall) -> bool:
    """Certified a <= b (supremum against infimum)."""
    return a.hi <= b.lo


def ball_lt(a: RealBall, b: RealBall) -> bool:
    return a.hi < b.lo


def pow_ball(base: RealBall, exponent: RealBall) -> RealBall:
    """base^exponent for a positive base, via exp(exponent * log base)."""
    return (exponent * base.log()).exp()


class ComplexBall:
    """Rectangular complex enclosure: independent real and imaginary balls."""

    __slots__ = ("re", "im")

    def __init__(self, re: RealBall, im: RealBall):
        self.re = re
        self.im = im

    @staticmethod
    def point(z, prec: int) -> "ComplexBall":
        """Exact singleton ball around an mpc value (no re-rounding)."""
        return ComplexBall(RealBall.point(z.real, prec), RealBall.point(z.imag, prec))

    @staticmethod
    def from_int(k: int, prec: int) -> "ComplexBall":
        return ComplexBall(RealBall.from_int(k, prec), RealBall.from_int(0, prec))

    @staticmethod
    def from_gauss(g: GaussRational, prec: int) -> "ComplexBall":
        return ComplexBall(RealBall.from_fraction(g.re, prec),
                           RealBall.from_fraction(g.im, prec))

    @property
    def prec(self) -> int:
        return max(self.re.prec, self.im.prec)

    def __repr__(self):
        return f"ComplexBall(re={self.re!r}, im={self.im!r})"

    def _coerce(self, other) -> "ComplexBall":
        if isinstance(other, ComplexBall):
            return other
        if isinstance(other, RealBall):
            return ComplexBall(other, RealBall.from_int(0, other.prec))
        if isinstance(other, (int, Fraction)):
            return ComplexBall(RealBall.from_fraction(Fraction(other), self.prec),
                               RealBall.from_int(0, self.prec))
        raise TypeError(f"cannot mix ComplexBall with {type(other)!r}")

    def __neg__(self):
        return ComplexBall(-self.re, -self.im)

    def __add__(self, other):
        other = self._coerce(other)
        return ComplexBall(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return ComplexBall(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return ComplexBall(self.re * other.re - self.im * other.im,
                           self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        den = other.abs_sq()
        num = self * other.conj()
        return ComplexBall(num.re / den, num.im / den)

    def conj(self):
        return ComplexBall(self.re, -self.im)

    def abs_sq(self) -> RealBall:
        return self.re.sqr() + self.im.sqr()

    def abs(self) -> RealBall:
        return self.abs_sq().sqrt()

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def pow_int(self, k: int) -> "ComplexBall":
        if k < 0:
            raise ValueError("negative power of a complex ball")
        prec = self.prec
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        if result is None:
            return ComplexBall.from_int(1, prec)
        return result


def ball_horner(coeffs: Sequence[int], z: ComplexBall, prec: int) -> ComplexBall:
    """P(z) with exact integer coefficients, certified."""
    acc = ComplexBall.from_int(0, prec)
    for c in reversed(coeffs):
        acc = acc * z
        if c:
            acc = ComplexBall(acc.re + RealBall.from_int(c, prec), acc.im)
    return acc


def ball_horner_real(coeffs: Sequence[int], x: RealBall, prec: int) -> RealBall:
    acc = RealBall.from_int(0, prec)
    for c in reversed(coeffs):
        acc = acc * x
        if c:
            acc = acc + RealBall.from_int(c, prec)
    return acc


# ---------------------------------------------------------------------------
# certified complex roots
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertifiedRoots:
    """Certified root enclosures of an integer polynomial.

    roots are sorted by (real midpoint, imaginary midpoint); multiplicities
    align with roots and sum to the degree.  Every ball contains exactly one
    distinct root of the polynomial, of the recorded multiplicity, and the
    union of the balls contains all roots.
    """

    polynomial: IntPoly
    roots: tuple
    multiplicities: tuple
    precision_bits: int

    def __iter__(self):
        return iter(self.roots)

    @property
    def count_with_multiplicity(self) -> int:
        return sum(self.multiplicities)


def _initial_points(coeffs, prec):
    """Starting points on circles sized by the coefficient profile.

    Uses the upper convex hull of (i, log2|a_i|): each hull segment yields a
    batch of points on a circle whose radius estimates the moduli of that
    batch of roots.  Angles are spread with an irrational twist so no two
    starting points coincide and no point sits on the real axis.
    """
    pts_log = [(i, abs(c).bit_length() if c else None)
               for i, c in enumerate(coeffs)]
    pts_log = [(i, v) for i, v in pts_log if v is not None]
    hull = [pts_log[0]]
    for p in pts_log[1:]:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x1) <= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    out = []
    golden = 0.6180339887498949
    total = len(coeffs) - 1
    batch_index = 0
    for (i1, v1), (i2, v2) in zip(hull, hull[1:]):
        count = i2 - i1
        radius = 2.0 ** ((v1 - v2) / count)
        radius = min(max(radius, 1e-6), 1e6)
        for k in range(count):
            theta = 2 * math.pi * ((k + 0.26) / count + golden * batch_index) + 0.41
            out.append(mpc(radius * math.cos(theta), radius * math.sin(theta),
                           precision=prec))
            batch_index += 1
    assert len(out) == total
    return out


def _aberth_sweeps(coeffs_int, pts, prec, max_sweeps):
    """Simultaneous Newton corrections with Aberth coupling, in plain floats."""
    with gmpy2.context(precision=prec):
        cs = [mpc(c, precision=prec) for c in coeffs_int]
        ds = [mpc(i * c, precision=prec) for i, c in enumerate(coeffs_int) if i >= 1]
        n = len(pts)
        eps_stop = mpfr(2) ** (-prec + 8)
        for _ in range(max_sweeps):
            max_rel = mpfr(0)
            newpts = list(pts)
            for i in range(n):
                z = pts[i]
                pv = cs[-1]
                for c in reversed(cs[:-1]):
                    pv = pv * z + c
                dv = ds[-1]
                for c in reversed(ds[:-1]):
                    dv = dv * z + c
                if dv == 0:
                    newpts[i] = z + mpfr(2) ** (-prec // 2)
                    max_rel = mpfr(1)
                    continue
                w = pv / dv
                s = mpc(0)
                for j in range(n):
                    if j != i:
                        diff = z - pts[j]
                        if diff == 0:
                            diff = mpfr(2) ** (-prec)
                        s += 1 / diff
                denom = 1 - w * s
                step = w if denom == 0 else w / denom
                newpts[i] = z - step
                rel = abs(step) / (1 + abs(z))
                if rel > max_rel:
                    max_rel = rel
            pts = newpts
            if max_rel < eps_stop:
                break
        return pts


def _certify_disks(poly: IntPoly, pts, prec):
    """Inclusion disks around approximations of a squarefree polynomial.

    Returns per-point radii r_i such that the union of D(pts_i, r_i) contains
    every root and, when the disks are pairwise disjoint, each contains
    exactly one (disks from the Weierstrass corrections scaled by the degree).
    """
    coeffs = poly.coeffs
    n = len(pts)
    lead = coeffs[-1]
    points = [ComplexBall.point(z, prec) for z in pts]
    radii = []
    for i in range(n):
        num = ball_horner(coeffs, points[i], prec)
        den = ComplexBall.from_int(lead, prec)
        for j in range(n):
            if j != i:
                den = den * (points[i] - points[j])
        den_abs = den.abs()
        if den_abs.contains_zero():
            return None
        w_sup = (num.abs() / den_abs).sup
        _, cu, _ = _ctx(prec)
        radii.append(cu.mul(w_sup, n))
    return radii


def _disks_disjoint(centers, radii, prec) -> bool:
    cd, _, _ = _ctx(prec)
    n = len(centers)
    for i in range(n):
        for j in range(i + 1, n):
            dx = RealBall(cd.sub(centers[i].real, centers[j].real),
                          _ctx(prec)[1].sub(centers[i].real, centers[j].real), prec)
            dy = RealBall(cd.sub(centers[i].imag, centers[j].imag),
                          _ctx(prec)[1].sub(centers[i].imag, centers[j].imag), prec)
            dist = (dx.sqr() + dy.sqr()).sqrt()
            _, cu, _ = _ctx(prec)
            if not dist.lo > cu.add(radii[i], radii[j]):
                return False
    return True


def complex_roots(P: IntPoly, precision_bits: int = DEFAULT_PRECISION,
                  cap: int = PRECISION_CAP) -> CertifiedRoots:
    """Certified enclosures of all complex roots of P, with multiplicity.

    Squarefree factors are isolated separately (multiplicities come from the
    exact squarefree decomposition), then all disks are certified pairwise
    disjoint.  Precision doubles until every disk radius drops below
    2^-(precision_bits+2) * max(1, |center|), or the cap is hit.
    """
    if P.is_zero or P.degree < 1:
        raise ValueError("need a nonzero polynomial of degree >= 1")
    parts = [(f, m) for f, m in squarefree_decomposition(P) if f.degree >= 1]

    # exact zero roots split off first
    zero_mult = 0
    stripped = []
    for f, m in parts:
        if f.coeff(0) == 0:
            zero_mult += m
            f = IntPoly(f.coeffs[1:])
        if f.degree >= 1:
            stripped.append((f, m))

    # cheap low-precision ramp to converge the iteration before certifying
    certify_floor = max(64, precision_bits + 32)
    warm: dict = {}
    work = 64
    while work < certify_floor:
        for idx, (f, _) in enumerate(stripped):
            pts = warm.get(idx)
            cold = pts is None
            pts = pts or _initial_points(f.coeffs, work)
            pts = [mpc(z, precision=work) for z in pts]
            warm[idx] = _aberth_sweeps(f.coeffs, pts, work,
                                       max_sweeps=200 if cold else 16)
        work *= 2
    work = certify_floor

    while work <= cap:
        entries = []
        ok = True
        for idx, (f, mult) in enumerate(stripped):
            pts = warm.get(idx)
            cold = pts is None
            pts = pts or _initial_points(f.coeffs, work)
            pts = [mpc(z, precision=work) for z in pts]
            pts = _aberth_sweeps(f.coeffs, pts, work,
                                 max_sweeps=200 if cold else 24)
            warm[idx] = pts
            radii = _certify_disks(f, pts, work)
            if radii is None:
                ok = False
                break
            entries.extend(
                (z, r, mult) for z, r in zip(pts, radii)
            )
        if ok:
            centers = [e[0] for e in entries]
            radii = [e[1] for e in entries]
            small_enough = all(
                r <= mpfr(2) ** (-precision_bits - 2) * max(mpfr(1), abs(z))
                for z, r in zip(centers, radii)
            )
            zero_clear = zero_mult == 0 or all(
                abs(z) > r for z, r in zip(centers, radii)
            )
            if small_enough and zero_clear and _disks_disjoint(centers, radii, work):
                balls = []
                for z, r, mult in entries:
                    cd, cu, _ = _ctx(work)
                    re = RealBall(cd.sub(z.real, r), cu.add(z.real, r), work)
                    im = RealBall(cd.sub(z.imag, r), cu.add(z.imag, r), work)
                    balls.append((ComplexBall(re, im), mult))
                if zero_mult:
                    balls.append((ComplexBall.from_int(0, work), zero_mult))
                balls.sort(key=lambda bm: (bm[0].re.mid, bm[0].im.mid))
                return CertifiedRoots(
                    polynomial=P,
                    roots=tuple(b for b, _ in balls),
                    multiplicities=tuple(m for _, m in balls),
                    precision_bits=precision_bits,
                )
        work *= 2
    raise PrecisionExhausted(
        f"root certification failed below {cap} bits for degree {P.degree}"
    )


# ---------------------------------------------------------------------------
# Mahler measure
# ---------------------------------------------------------------------------


def mahler_measure(P: IntPoly, precision_bits: int = DEFAULT_PRECISION,
                   cap: int = PRECISION_CAP) -> RealBall:
    """Certified ball around |lead| * prod max(1, |root|).

    Root balls straddling the unit circle contribute the monotone enclosure
    [1, sup], which keeps the product correct at any precision.
    """
    if P.is_zero:
        raise ValueError("zero polynomial")
    if P.degree == 0:
        return RealBall.from_int(abs(P.coeff(0)), precision_bits)
    d = P.degree
    inner = precision_bits + max(16, d.bit_length() + 8)
    while True:
        roots = complex_roots(P, inner, cap=cap)
        acc = RealBall.from_int(abs(P.leading), inner)
        for ball, mult in zip(roots.roots, roots.multiplicities):
            acc = acc * ball.abs().max1().pow_int(mult)
        target = acc.mid * mpfr(2) ** (-precision_bits + 2)
        if acc.rad <= max(target, mpfr(2) ** (-precision_bits + 2)):
            return acc.round_to(max(precision_bits, 64))
        inner *= 2
        if inner > cap:
            raise PrecisionExhausted("Mahler measure did not stabilize")


def log_mahler_quadrature(P: IntPoly, grid: int = 1024,
                          precision_bits: int = 53) -> RealBall:
    """Heuristic circle average of log|P|, NOT certified.

    Midpoint-rule estimate at ``grid`` and ``2*grid`` samples; the returned
    radius is the difference between the two plus a rounding allowance.  Used
    only as an independent cross-check against the certified Mahler route.
    """
    if P.is_zero:
        raise ValueError("zero polynomial")
    if grid < 8:
        raise ValueError("grid too small")
    for attempt, offset in enumerate((0.0, 1.0 / 3.0, 1.0 / 7.1)):
        try:
            est1 = _circle_average(P, grid, offset, precision_bits)
            est2 = _circle_average(P, 2 * grid, offset, precision_bits)
        except GridDegenerate:
            if attempt == 2:
                raise
            continue
        prec = max(64, precision_bits)
        cd, cu, _ = _ctx(prec)
        err = cu.add(abs(cu.sub(mpfr(est2, precision=prec), mpfr(est1, precision=prec))),
                     mpfr(2) ** (-min(precision_bits, 53) + 10) * (1 + abs(mpfr(est2))))
        mid = mpfr(est2, precision=prec)
        return RealBall(cd.sub(mid, err), cu.add(mid, err), prec)
    raise GridDegenerate("all sample offsets hit a root")


def _circle_average(P: IntPoly, n: int, offset: float, precision_bits: int):
    if precision_bits <= 53 and max(abs(c) for c in P.coeffs) < 2**500:
        coeffs = np.array([float(c) for c in reversed(P.coeffs)])
        t = (np.arange(n) + 0.5 + offset) / n
        z = np.exp(2j * np.pi * t)
        vals = np.abs(np.polyval(coeffs, z))
        if np.any(vals == 0.0) or np.any(~np.isfinite(vals)):
            raise GridDegenerate("sample point is (numerically) a root")
        return float(np.mean(np.log(vals)))
    prec = max(64, precision_bits)
    with gmpy2.context(precision=prec):
        two_pi = 2 * gmpy2.const_pi()
        total = mpfr(0)
        for j in range(n):
            theta = two_pi * (mpfr(2 * j + 1) / (2 * n) + mpfr(offset) / n)
            s, c = gmpy2.sin_cos(theta)
            z = mpc(c, s)
            acc = mpc(P.coeffs[-1])
            for coeff in reversed(P.coeffs[:-1]):
                acc = acc * z + coeff
            a = abs(acc)
            if a == 0:
                raise GridDegenerate("sample point is a root")
            total += gmpy2.log(a)
        return total / n
