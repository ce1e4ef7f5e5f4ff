"""Finite-precision p-adic arithmetic.

Newton polygons give root valuations without factoring.  Unit-part arithmetic
happens in unramified local rings Z_p[X]/(g) with g monic, irreducible mod p,
obtained by Hensel-lifting the distinct irreducible factors of the minimal
polynomial mod p.  Only the unramified case (minimal polynomial squarefree
mod p with unit leading coefficient) carries unit arithmetic; valuations
through the Newton polygon work for any input.

Normalization: |p|_p = 1/p, so an element of valuation v has absolute value
p^(-v).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import gmpy2

from . import modpoly
from .errors import (
    NonIntegralElement,
    PadicContextUnavailable,
    PrecisionExhausted,
    RamifiedError,
    VanishingInput,
)
from .intpoly import IntPoly, primitive_part, reduce_mod, sign_normalize

DEFAULT_PRECISION_EXPONENT = 64
PRECISION_EXPONENT_CAP = 4096


def vp(n: int, p: int) -> int:
    """Exact valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicContext:
    """Prime p with working precision exponent N (arithmetic mod p^N)."""

    p: int
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("precision exponent must be >= 1")
        if not gmpy2.is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def modulus(self) -> int:
        return self.p**self.N


@dataclass(frozen=True)
class LocalFactor:
    """Monic factor of a minimal polynomial over Z_p, irreducible over Q_p.

    g is monic mod p^N and irreducible mod p (unramified), so the residue
    degree equals deg(g) and the power basis 1, x, ..., x^(deg g - 1) detects
    valuations coefficientwise.
    """

    context: PadicContext
    g: tuple
    index: int

    @property
    def residue_degree(self) -> int:
        return len(self.g) - 1

    @property
    def reduction_mod_p(self) -> tuple:
        return modpoly.from_int_coeffs(self.g, self.context.p)

    def root_valuation(self) -> int:
        """Common valuation of the roots of g (an integer, g unramified)."""
        if self.residue_degree >= 2:
            return 0
        c0 = self.g[0] if self.g else 0
        if c0 == 0:
            # root is 0 mod p^N; valuation at least N, report N
            return self.context.N
        return vp(c0, self.context.p)


@dataclass(frozen=True)
class PadicValuation:
    """Valuation result; exact=False means only 'valuation >= value' is known
    at the working precision."""

    value: int
    exact: bool

    def abs_value(self, p: int) -> Fraction:
        if self.value >= 0:
            return Fraction(1, p**self.value)
        return Fraction(p ** (-self.value))


# ---------------------------------------------------------------------------
# Newton polygons
# ---------------------------------------------------------------------------


def newton_polygon(P: IntPoly, p: int) -> List[Tuple[Fraction, int]]:
    """Lower-hull slopes of (i, v_p(a_i)) with their horizontal lengths.

    Zero roots are stripped first (they would sit at valuation infinity).
    Root valuations are the negated slopes; slopes come out ascending.
    """
    if P.is_zero:
        raise ValueError("zero polynomial")
    coeffs = list(P.coeffs)
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if len(coeffs) <= 1:
        return []
    pts = [(i, vp(c, p)) for i, c in enumerate(coeffs) if c != 0]
    hull = [pts[0]]
    for pt in pts[1:]:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep the hull lower-convex
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        out.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
    return out


def root_valuations(P: IntPoly, p: int) -> List[Tuple[Fraction, int]]:
    """Valuations of the nonzero roots with multiplicities (negated slopes),
    sorted descending (largest valuation first)."""
    return [(-s, ln) for s, ln in reversed(newton_polygon(P, p))]


# ---------------------------------------------------------------------------
# local factors via Hensel lifting
# ---------------------------------------------------------------------------


def local_factors(P: IntPoly, p: int, N: int = DEFAULT_PRECISION_EXPONENT
                  ) -> List[LocalFactor]:
    """Factors of P irreducible over Q_p, certified by Hensel separation.

    Requires the unramified setting: p must not divide the leading
    coefficient and P must be squarefree mod p.  Factors are sorted by their
    reductions mod p (degree first, then coefficient tuple), which keeps
    embedding indices stable across precision changes.
    """
    if P.is_zero or P.degree < 1:
        raise ValueError("need degree >= 1")
    ctx = PadicContext(p, N)
    if P.leading % p == 0:
        raise RamifiedError(
            f"leading coefficient divisible by {p}; unit-part arithmetic "
            "unsupported (use the Newton polygon for valuations)"
        )
    red = reduce_mod(P, p)
    if not modpoly.is_squarefree(red, p):
        raise RamifiedError(f"polynomial is not squarefree mod {p}")
    bar_factors = modpoly.factor_squarefree(red, p)
    modulus = ctx.modulus
    linv = pow(P.leading % modulus, -1, modulus)
    fstar = [(c * linv) % modulus for c in P.coeffs]
    if len(bar_factors) == 1:
        lifted = [modpoly.from_int_coeffs(fstar, modulus)]
    else:
        lifted, _ = modpoly.hensel_lift_multi(fstar, bar_factors, p, modulus)
    prod = (1,)
    for g in lifted:
        prod = modpoly.mul(prod, g, modulus)
    assert prod == modpoly.trim(c % modulus for c in fstar), "lift product mismatch"
    order = sorted(range(len(lifted)),
                   key=lambda i: (len(lifted[i]),
                                  modpoly.from_int_coeffs(lifted[i], p)))
    return [LocalFactor(context=ctx, g=lifted[j], index=k)
            for k, j in enumerate(order)]


def padic_abs_from_factor(factor: LocalFactor) -> Fraction:
    """|x|_p for the root x of the chosen local factor, an exact power of p."""
    return Fraction(1, factor.context.p ** factor.root_valuation()) \
        if factor.root_valuation() >= 0 \
        else Fraction(factor.context.p ** (-factor.root_valuation()))


# ---------------------------------------------------------------------------
# power-basis coordinates and evaluation
# ---------------------------------------------------------------------------


def zp_coordinates(factor: LocalFactor, n: int,
                   element: Optional[tuple] = None,
                   element_valuation: int = 0) -> tuple:
    """Coordinates of x^n in the basis 1, x, ..., x^(d-1) mod (p^N, g).

    x defaults to the canonical root of the local factor; an explicit element
    (coefficient vector, with its valuation) may be supplied instead, but must
    be a p-adic integer.  All returned coordinates are p-adic integers, padded
    to length d.
    """
    if n < 0:
        raise ValueError("exponent must be >= 0")
    if element_valuation < 0:
        raise NonIntegralElement("element has negative valuation")
    ctx = factor.context
    modulus = ctx.modulus
    base = (0, 1) if element is None else modpoly.from_int_coeffs(element, modulus)
    vec = modpoly.powmod(base, n, factor.g, modulus)
    d = factor.residue_degree
    out = list(vec) + [0] * (d - len(vec))
    return tuple(out[:d])


def eval_in_factor(P: IntPoly, factor: LocalFactor) -> tuple:
    """P evaluated at the canonical root of the factor, as a coordinate
    vector mod (p^N, g)."""
    modulus = factor.context.modulus
    acc: tuple = ()
    x = (0, 1)
    for c in reversed(P.coeffs):
        acc = modpoly.rem(modpoly.mul(acc, x, modulus), factor.g, modulus)
        if c % modulus:
            acc = modpoly.add(acc, (c % modulus,), modulus)
    d = factor.residue_degree
    out = list(acc) + [0] * (d - len(acc))
    return tuple(out[:d])


def vector_valuation(vec: tuple, ctx: PadicContext) -> PadicValuation:
    """Valuation of an element from its power-basis coordinates.

    In the unramified basis the valuation is the coefficientwise minimum; a
    vector vanishing mod p^N only certifies valuation >= N.
    """
    vals = [vp(c, ctx.p) for c in vec if c % ctx.modulus != 0]
    if not vals:
        return PadicValuation(ctx.N, exact=False)
    return PadicValuation(min(vals), exact=True)


def padic_eval_abs(P: IntPoly, minpoly: IntPoly, p: int, factor_index: int = 0,
                   N: int = DEFAULT_PRECISION_EXPONENT,
                   cap: int = PRECISION_EXPONENT_CAP) -> Tuple[Fraction, int]:
    """|P(x)|_p and the exact valuation, x the root picked by factor_index.

    Nonvanishing is checked exactly first (P(x) = 0 iff minpoly divides P
    over Q).  The precision exponent escalates until the valuation is exact.
    """
    from .intpoly import poly_gcd  # local import to keep module load light

    mp = sign_normalize(primitive_part(minpoly))
    if not P.is_zero and P.degree >= mp.degree:
        if poly_gcd(P, mp).degree == mp.degree:
            raise VanishingInput("P vanishes at every root of the minimal polynomial")
    if P.is_zero:
        raise VanishingInput("zero polynomial")
    while N <= cap:
        factors = local_factors(mp, p, N)
        if factor_index >= len(factors):
            raise PadicContextUnavailable(
                f"factor index {factor_index} out of range ({len(factors)} factors)"
            )
        factor = factors[factor_index]
        val = vector_valuation(eval_in_factor(P, factor), factor.context)
        if val.exact:
            return val.abs_value(p), val.value
        N *= 2
    raise PrecisionExhausted(f"valuation still >= working precision at cap {cap}")
