"""Algebraic numbers, heights, and conjugate log-distance averages.

An algebraic number is a primitive irreducible integer polynomial with
positive leading coefficient plus an embedding selector: an index into the
canonical certified root ordering (archimedean) or a local-factor index at a
prime (p-adic).  Heights come from the certified Mahler measure; averages of
log|conjugate - point| come from the closed form log|T(point)/lc(T)| with an
independent root-sum cross-check at the archimedean place.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import gmpy2

from . import padics, zfactor
from .errors import (
    ConjugateInputs,
    PadicContextUnavailable,
    PrecisionExhausted,
    PreconditionError,
)
from .intpoly import (
    IntPoly,
    cyclotomic,
    euler_phi,
    eval_exact,
    poly_gcd,
    primitive_part,
    resultant,
    sign_normalize,
)
from .numeric import (
    DEFAULT_PRECISION,
    PRECISION_CAP,
    ComplexBall,
    RealBall,
    ball_horner,
    complex_roots,
    mahler_measure,
)


@dataclass(frozen=True)
class Place:
    """A place of Q: the archimedean place (p=None) or a prime p."""

    p: Optional[int] = None

    def __post_init__(self):
        if self.p is not None and not gmpy2.is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_infinite(self) -> bool:
        return self.p is None

    @property
    def c(self) -> int:
        """The place constant used by the sequence envelopes: 2 at the
        archimedean place, p at a finite place."""
        return 2 if self.p is None else self.p

    def __str__(self):
        return "inf" if self.p is None else f"p={self.p}"


INFINITY = Place(None)


@dataclass(frozen=True)
class ArchEmbedding:
    index: int = 0


@dataclass(frozen=True)
class PadicEmbedding:
    p: int
    index: int = 0


Embedding = Union[ArchEmbedding, PadicEmbedding]


class AlgebraicNumber:
    """Minimal polynomial plus embedding choice.

    Equality is (minpoly, embedding); two numbers are conjugate when they
    share the minimal polynomial.  Irreducibility is checked at construction
    unless the caller vouches for it (trusted=True for inputs certified
    upstream, e.g. by an Eisenstein certificate or a cyclotomic identity).
    """

    __slots__ = ("minpoly", "embedding", "_arch_cache", "_ref_ball")

    def __init__(self, minpoly: IntPoly, embedding: Embedding = ArchEmbedding(0),
                 trusted: bool = False):
        mp = sign_normalize(primitive_part(minpoly))
        if mp.is_zero or mp.degree < 1:
            raise PreconditionError("minimal polynomial must have degree >= 1")
        if mp != minpoly:
            raise PreconditionError(
                "minimal polynomial must be primitive with positive leading "
                "coefficient"
            )
        if not trusted and not zfactor.is_irreducible(mp):
            raise PreconditionError("minimal polynomial is reducible")
        self.minpoly = mp
        self.embedding = embedding
        self._arch_cache = {}
        self._ref_ball = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(x) -> "AlgebraicNumber":
        x = Fraction(x)
        return AlgebraicNumber(IntPoly((-x.numerator, x.denominator)),
                               ArchEmbedding(0), trusted=True)

    @staticmethod
    def from_root(P: IntPoly, index: int = 0, trusted: bool = False
                  ) -> "AlgebraicNumber":
        return AlgebraicNumber(P, ArchEmbedding(index), trusted=trusted)

    @staticmethod
    def from_padic(P: IntPoly, p: int, index: int = 0, trusted: bool = False
                   ) -> "AlgebraicNumber":
        return AlgebraicNumber(P, PadicEmbedding(p, index), trusted=trusted)

    # -- basic queries -------------------------------------------------------

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @property
    def is_zero(self) -> bool:
        return self.minpoly == IntPoly((0, 1))

    def is_conjugate_of(self, other: "AlgebraicNumber") -> bool:
        return self.minpoly == other.minpoly

    def __eq__(self, other):
        return (isinstance(other, AlgebraicNumber)
                and self.minpoly == other.minpoly
                and self.embedding == other.embedding)

    def __hash__(self):
        return hash((self.minpoly, self.embedding))

    def __repr__(self):
        return f"AlgebraicNumber({self.minpoly.to_human()!r}, {self.embedding!r})"

    # -- embedding access ------------------------------------------------

    def root_ball(self, precision_bits: int = DEFAULT_PRECISION) -> ComplexBall:
        """Certified enclosure of the selected archimedean root.

        The embedding index refers to the canonical ordering at the first
        precision used; later calls at other precisions revalidate the
        selection by ball containment, so the same true root is returned.
        """
        if not isinstance(self.embedding, ArchEmbedding):
            raise PreconditionError("not an archimedean embedding")
        cached = self._arch_cache.get(precision_bits)
        if cached is not None:
            return cached
        roots = complex_roots(self.minpoly, precision_bits)
        if self._ref_ball is None:
            if not 0 <= self.embedding.index < len(roots.roots):
                raise PreconditionError(
                    f"root index {self.embedding.index} out of range"
                )
            ball = roots.roots[self.embedding.index]
        else:
            ball = self._match_reference(roots, precision_bits)
        self._arch_cache[precision_bits] = ball
        if self._ref_ball is None or ball.re.rad < self._ref_ball.re.rad:
            self._ref_ball = ball
        return ball

    def _match_reference(self, roots, precision_bits):
        ref = self._ref_ball
        prec = precision_bits
        while True:
            hits = [b for b in roots.roots
                    if b.re.overlaps(ref.re) and b.im.overlaps(ref.im)]
            if len(hits) == 1:
                return hits[0]
            prec *= 2
            if prec > PRECISION_CAP:
                raise PrecisionExhausted("could not revalidate the root index")
            roots = complex_roots(self.minpoly, prec)

    def local_factor(self, N: int = padics.DEFAULT_PRECISION_EXPONENT
                     ) -> padics.LocalFactor:
        if not isinstance(self.embedding, PadicEmbedding):
            raise PreconditionError("not a p-adic embedding")
        factors = padics.local_factors(self.minpoly, self.embedding.p, N)
        if self.embedding.index >= len(factors):
            raise PadicContextUnavailable(
                f"factor index {self.embedding.index} out of range"
            )
        return factors[self.embedding.index]


# ---------------------------------------------------------------------------
# heights
# ---------------------------------------------------------------------------


def weil_height(alpha: AlgebraicNumber,
                precision_bits: int = DEFAULT_PRECISION) -> RealBall:
    """h(alpha) = log(Mahler measure of the minimal polynomial) / degree."""
    d = alpha.degree
    m = mahler_measure(alpha.minpoly, precision_bits + 8)
    return (m.log() / d).round_to(precision_bits)


def multiplicative_height(alpha: AlgebraicNumber,
                          precision_bits: int = DEFAULT_PRECISION) -> RealBall:
    """H(alpha) = exp(h(alpha))."""
    return weil_height(alpha, precision_bits + 8).exp().round_to(precision_bits)


def modified_height(alpha: AlgebraicNumber,
                    precision_bits: int = DEFAULT_PRECISION) -> RealBall:
    """h(alpha) + log(2d)/d, strictly positive for every algebraic number."""
    d = alpha.degree
    h = weil_height(alpha, precision_bits + 8)
    return (h + RealBall.log_of_int(2 * d, precision_bits + 8) / d
            ).round_to(precision_bits)


def is_root_of_unity(P: IntPoly) -> Optional[int]:
    """Order n if P is the n-th cyclotomic polynomial, else None.

    P is expected primitive and irreducible.  The candidate orders are the
    finitely many n with Euler phi(n) equal to deg(P); phi(n) >= sqrt(n/2)
    bounds the search.
    """
    if P.is_zero or P.degree < 1:
        return None
    if P.leading != 1:
        return None
    d = P.degree
    for n in range(1, 2 * d * d + 3):
        if euler_phi(n) == d and P == cyclotomic(n):
            return n
    return None


# ---------------------------------------------------------------------------
# minimal polynomial of Q(alpha)
# ---------------------------------------------------------------------------


def characteristic_poly_of_image(minpoly: IntPoly, Q: IntPoly) -> IntPoly:
    """lead^deg(Q) * prod over conjugates (X - Q(conjugate)), exactly.

    Computed as the resultant in Y of (minpoly(Y), X - Q(Y)) by evaluation at
    d+1 integer points and Lagrange interpolation.
    """
    d = minpoly.degree
    vals = []
    for t in range(d + 1):
        G = IntPoly.constant(t) - Q
        vals.append(Fraction(resultant(minpoly, G)))
    # Lagrange interpolation at the nodes 0..d
    coeffs = [Fraction(0)] * (d + 1)
    for i in range(d + 1):
        # basis polynomial prod_{j != i} (X - j)/(i - j), built incrementally
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(d + 1):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= j * basis[k + 1]
            denom *= i - j
        scale = vals[i] / denom
        for k, b in enumerate(basis):
            coeffs[k] += scale * b
    assert all(c.denominator == 1 for c in coeffs), "interpolation not integral"
    return IntPoly(int(c) for c in coeffs)


def minimal_poly_of_image(alpha: AlgebraicNumber, Q: IntPoly,
                          precision_bits: int = DEFAULT_PRECISION) -> IntPoly:
    """Primitive minimal polynomial of Q(alpha).

    The characteristic polynomial of the image is factored and the factor
    vanishing at the embedded value is selected by exclusion: precision is
    raised until every other factor certifiably misses zero.
    """
    if Q.is_zero:
        raise PreconditionError("Q must be nonzero")
    if Q.degree == 0:
        c = Q.coeff(0)
        return IntPoly((-c, 1))
    char = sign_normalize(primitive_part(
        characteristic_poly_of_image(alpha.minpoly, Q)))
    factors = [f for f, _ in zfactor.factor_primitive(char)]
    if len(factors) == 1:
        out = factors[0]
    elif isinstance(alpha.embedding, ArchEmbedding):
        out = _select_factor_arch(alpha, Q, factors, precision_bits)
    else:
        out = _select_factor_padic(alpha, Q, factors)
    assert alpha.degree % out.degree == 0, "image degree must divide"
    return out


def _select_factor_arch(alpha, Q, factors, precision_bits):
    prec = precision_bits
    while prec <= PRECISION_CAP:
        image = ball_horner(Q.coeffs, alpha.root_ball(prec), prec)
        alive = [f for f in factors
                 if ball_horner(f.coeffs, image, prec).contains_zero()]
        if len(alive) == 1:
            return alive[0]
        prec *= 2
    raise PrecisionExhausted("factor selection did not separate")


def _select_factor_padic(alpha, Q, factors):
    emb = alpha.embedding
    N = padics.DEFAULT_PRECISION_EXPONENT
    while N <= padics.PRECISION_EXPONENT_CAP:
        factor = alpha.local_factor(N)
        image = padics.eval_in_factor(Q, factor)
        alive = []
        for f in factors:
            # f(Q(x)) mod (p^N, g) via Horner on the image vector
            acc: tuple = ()
            for c in reversed(f.coeffs):
                acc = _vec_mul(acc, image, factor)
                if c % factor.context.modulus:
                    acc = _vec_add(acc, (c % factor.context.modulus,), factor)
            if all(c % factor.context.modulus == 0 for c in acc) or not acc:
                alive.append(f)
        if len(alive) == 1:
            return alive[0]
        N *= 2
    raise PrecisionExhausted("p-adic factor selection did not separate")


def _vec_mul(a, b, factor):
    from . import modpoly
    return modpoly.rem(modpoly.mul(a, b, factor.context.modulus),
                       factor.g, factor.context.modulus)


def _vec_add(a, b, factor):
    from . import modpoly
    return modpoly.add(a, b, factor.context.modulus)


def root_product_poly(P: IntPoly) -> IntPoly:
    """Primitive polynomial vanishing on all pairwise root products a_i a_j.

    Built from resultants Res_Y(P(Y), Y^d P(t/Y)) at d^2+1 integer points t
    and interpolation; used to decide |kappa| = 1 exactly.
    """
    d = P.degree
    if P.coeff(0) == 0:
        raise PreconditionError("zero root; strip it first")
    deg_total = d * d
    vals = []
    for t in range(deg_total + 1):
        # Y^d * P(t/Y) = sum_i p_i t^i Y^(d-i)
        Qt = IntPoly(P.coeff(d - k) * t ** (d - k) for k in range(d + 1))
        vals.append(Fraction(resultant(P, Qt)))
    coeffs = [Fraction(0)] * (deg_total + 1)
    for i in range(deg_total + 1):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(deg_total + 1):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= j * basis[k + 1]
            denom *= i - j
        scale = vals[i] / denom
        for k, b in enumerate(basis):
            coeffs[k] += scale * b
    assert all(c.denominator == 1 for c in coeffs)
    return sign_normalize(primitive_part(IntPoly(int(c) for c in coeffs)))


def certify_unit_circle(kappa: AlgebraicNumber,
                        precision_bits: int = DEFAULT_PRECISION) -> bool:
    """Exact decision of |kappa| = 1 for an archimedean embedding.

    |kappa|^2 is always a root of the pairwise root-product polynomial C.
    If (X-1) does not divide C, no root product is 1 and the answer is no.
    Otherwise write C = (X-1)^k D with D(1) != 0; if the ball of |kappa|^2
    certifiably avoids every root of D, then |kappa|^2 = 1 exactly.
    """
    if not isinstance(kappa.embedding, ArchEmbedding):
        raise PreconditionError("archimedean embedding required")
    if kappa.is_zero:
        return False
    C = root_product_poly(kappa.minpoly)
    one = IntPoly((-1, 1))
    k = 0
    D = C
    while True:
        q = _exact_div_or_none(D, one)
        if q is None:
            break
        D, k = q, k + 1
    if k == 0:
        return False
    if D.degree < 1 and k >= 1:
        return True  # every pairwise product is 1
    prec = precision_bits
    while prec <= PRECISION_CAP:
        sq = kappa.root_ball(prec).abs_sq()
        if not sq.contains(1) and sq.contains_zero() is False:
            # the ball no longer straddles 1: |kappa| != 1 certified
            if sq.hi < 1 or sq.lo > 1:
                return False
        val = _real_ball_horner(D, sq, prec)
        if not val.contains_zero():
            return True
        prec *= 2
    raise PrecisionExhausted("could not separate |kappa|^2 from the other "
                             "root products")


def _exact_div_or_none(A: IntPoly, B: IntPoly):
    from .intpoly import exact_divide
    return exact_divide(A, B)


def _real_ball_horner(P: IntPoly, x: RealBall, prec: int) -> RealBall:
    acc = RealBall.from_int(0, prec)
    for c in reversed(P.coeffs):
        acc = acc * x
        if c:
            acc = acc + RealBall.from_int(c, prec)
    return acc


# ---------------------------------------------------------------------------
# conjugate log-distance averages
# ---------------------------------------------------------------------------


def _check_not_conjugate(alpha: AlgebraicNumber, kappa: AlgebraicNumber):
    if alpha.is_conjugate_of(kappa):
        raise ConjugateInputs("alpha is a conjugate of kappa")


def _padic_place_data(kappa: AlgebraicNumber, place: Place):
    if not isinstance(kappa.embedding, PadicEmbedding):
        raise PadicContextUnavailable(
            "kappa needs a p-adic embedding for a finite place"
        )
    if kappa.embedding.p != place.p:
        raise PadicContextUnavailable(
            f"kappa is embedded at {kappa.embedding.p}, place is {place.p}"
        )


def log_distance_average_exact_padic(alpha: AlgebraicNumber,
                                     kappa: AlgebraicNumber,
                                     place: Place) -> Fraction:
    """The p-adic average as an exact rational multiple of log p.

    Returns r with average = r * log(p); r = (v_p(lc T) - v_p(T(kappa))) / d.
    """
    _check_not_conjugate(alpha, kappa)
    _padic_place_data(kappa, place)
    T = alpha.minpoly
    p = place.p
    if kappa.is_zero:
        v_val = padics.vp(T.coeff(0), p)
    else:
        _, v_val = padics.padic_eval_abs(T, kappa.minpoly, p,
                                         kappa.embedding.index)
    v_t = padics.vp(T.leading, p)
    return Fraction(v_t - v_val, T.degree)


def log_distance_average(alpha: AlgebraicNumber, kappa: AlgebraicNumber,
                         place: Place = INFINITY,
                         precision_bits: int = DEFAULT_PRECISION,
                         cross_check: bool = True) -> RealBall:
    """(1/d) sum over conjugates s of alpha of log|s(alpha) - kappa|_place.

    Computed by the closed form (log|T(kappa)|_v - log|lc T|_v)/d with
    T the minimal polynomial of alpha.  At the archimedean place an
    independent sum over the certified roots of T must intersect the
    closed-form ball; the intersection is returned.
    """
    _check_not_conjugate(alpha, kappa)
    T = alpha.minpoly
    d = T.degree
    if not place.is_infinite:
        r = log_distance_average_exact_padic(alpha, kappa, place)
        logp = RealBall.log_of_int(place.p, precision_bits + 8)
        return (RealBall.from_fraction(r, precision_bits + 8) * logp
                ).round_to(precision_bits)

    if kappa.is_zero:
        a0 = abs(T.coeff(0))
        ball = ((RealBall.log_of_int(a0, precision_bits + 8)
                 - RealBall.log_of_int(abs(T.leading), precision_bits + 8)) / d)
        return ball.round_to(precision_bits)

    closed = _closed_form_arch(T, kappa, precision_bits)
    if not cross_check:
        return closed.round_to(precision_bits)
    summed = _root_sum_arch(T, kappa, precision_bits)
    meet = closed.intersect(summed)
    if meet is None:
        raise PrecisionExhausted(
            "closed form and root sum disagree beyond their radii"
        )
    return meet.round_to(precision_bits)


def _closed_form_arch(T: IntPoly, kappa: AlgebraicNumber, precision_bits):
    prec = precision_bits + 16
    while prec <= PRECISION_CAP:
        kball = kappa.root_ball(prec)
        val = ball_horner(T.coeffs, kball, prec).abs()
        if not val.contains_zero():
            return (val.log()
                    - RealBall.log_of_int(abs(T.leading), prec)) / T.degree
        prec *= 2
    raise PrecisionExhausted("T(kappa) enclosure kept touching zero")


def _root_sum_arch(T: IntPoly, kappa: AlgebraicNumber, precision_bits):
    prec = precision_bits + 16
    while prec <= PRECISION_CAP:
        kball = kappa.root_ball(prec)
        roots = complex_roots(T, prec)
        total = RealBall.from_int(0, prec)
        ok = True
        for ball, mult in zip(roots.roots, roots.multiplicities):
            dist = (ball - kball).abs()
            if dist.contains_zero():
                ok = False
                break
            total = total + dist.log() * mult
        if ok:
            return total / T.degree
        prec *= 2
    raise PrecisionExhausted("a root enclosure kept touching kappa")


def reference_value(kappa: AlgebraicNumber, place: Place = INFINITY,
                    precision_bits: int = DEFAULT_PRECISION) -> RealBall:
    """log max(1, |kappa|_place), the limit value of the averages."""
    if kappa.is_zero:
        return RealBall.from_int(0, precision_bits)
    if place.is_infinite:
        mag = kappa.root_ball(precision_bits + 8).abs().max1()
        return mag.log().round_to(precision_bits)
    _padic_place_data(kappa, place)
    q = padics.padic_abs_from_factor(
        kappa.local_factor(padics.DEFAULT_PRECISION_EXPONENT))
    if q <= 1:
        return RealBall.from_int(0, precision_bits)
    v = padics.vp(q.numerator, place.p)
    return (RealBall.log_of_int(place.p, precision_bits + 8) * v
            ).round_to(precision_bits)


def equidistribution_error(alpha: AlgebraicNumber, kappa: AlgebraicNumber,
                           place: Place = INFINITY,
                           precision_bits: int = DEFAULT_PRECISION) -> RealBall:
    """|average - log max(1, |kappa|_place)|."""
    avg = log_distance_average(alpha, kappa, place, precision_bits + 8)
    ref = reference_value(kappa, place, precision_bits + 8)
    return (avg - ref).abs().round_to(precision_bits)
