"""Factorization of integer polynomials.

Zassenhaus-style pipeline: pick an auxiliary prime with squarefree reduction,
factor modulo it, Hensel-lift past a Landau-Mignotte coefficient bound, then
recombine subsets of the modular factors and confirm each candidate by exact
division.  A bounded-degree variant splits off only the factors of degree at
most ``max_degree``, which keeps the subset search tiny when the cofactor is
known (for instance from an Eisenstein certificate) to be one big irreducible.
"""

from __future__ import annotations

import math
from itertools import combinations

import gmpy2

from . import modpoly
from .errors import FactorizationInconclusive, NoSquarefreePrime
from .intpoly import (
    IntPoly,
    exact_divide,
    l2_norm_squared,
    primitive_part,
    reduce_mod,
    sign_normalize,
    squarefree_decomposition,
)

_PRIME_SEARCH_LIMIT = 200  # candidate primes examined before giving up
_DEFAULT_BUDGET = 2_000_000


def choose_factoring_prime(P: IntPoly, skip=(), start: int = 3, candidates: int = 5):
    """Smallest primes (from ``start``) with squarefree reduction of P, not
    dividing the leading coefficient and not in ``skip``; among the first few
    valid ones, the prime giving the fewest modular factors is returned."""
    best = None
    found = 0
    ell = start - 1
    for _ in range(_PRIME_SEARCH_LIMIT):
        ell = int(gmpy2.next_prime(ell))
        if ell in skip or P.leading % ell == 0:
            continue
        red = reduce_mod(P, ell)
        if len(red) - 1 != P.degree or not modpoly.is_squarefree(red, ell):
            continue
        pattern = modpoly.degree_pattern(red, ell)
        if best is None or len(pattern) < len(best[1]):
            best = (ell, pattern)
        found += 1
        if found >= candidates or len(pattern) == 1:
            break
    if best is None:
        raise NoSquarefreePrime(
            f"no squarefree reduction among the first {_PRIME_SEARCH_LIMIT} primes"
        )
    return best[0]


def factor_coeff_bound(P: IntPoly, m: int) -> int:
    """Bound on the max-norm of lc(P)/lc(g) * g over all integer factors g of P
    with deg(g) <= m (Mignotte-style, via M(g) <= l2 norm of P)."""
    norm2 = math.isqrt(l2_norm_squared(P)) + 1
    return (1 << m) * norm2


def _lift_modular_factors(P: IntPoly, ell: int, max_degree: int):
    """Factor P mod ell and lift the degree <= max_degree part.

    Lifts the monicized polynomial (P times the inverse of its leading
    coefficient) to a prime-power modulus beyond twice the coefficient bound
    for candidates.  Returns (lifted small factors, modulus).
    """
    red = reduce_mod(P, ell)
    small, rest = modpoly.factor_squarefree(red, ell, max_degree=max_degree)
    if not small:
        return [], None
    target = 4 * factor_coeff_bound(P, max_degree) * abs(P.leading) + 1
    modulus = ell
    while modulus < target:
        modulus *= ell
    linv = pow(P.leading % modulus, -1, modulus)
    fstar = [(c * linv) % modulus for c in P.coeffs]
    all_parts = list(small) + ([rest] if modpoly.deg(rest) > 0 else [])
    lifted, modulus = modpoly.hensel_lift_multi(fstar, all_parts, ell, modulus)
    return lifted[: len(small)], modulus


def _candidate(P: IntPoly, parts, modulus):
    """Symmetric lift of lc(P) * prod(parts) mod modulus, made primitive."""
    prod = (P.leading % modulus,)
    for g in parts:
        prod = modpoly.mul(prod, g, modulus)
    coeffs = modpoly.symmetric_lift(prod, modulus)
    cand = sign_normalize(primitive_part(IntPoly(coeffs)))
    if cand.degree < 1:
        return None
    # cheap divisibility filter on the constant term
    c0 = cand.coeff(0)
    if c0 and (P.coeff(0) * P.leading) % c0 != 0:
        return None
    return cand


def _recombine(P: IntPoly, lifted, modulus, max_degree, budget, full):
    """Subset recombination.  Returns (integer factors found, cofactor)."""
    remaining = list(lifted)
    current = P
    factors: list = []
    tests = 0
    while remaining and current.degree > 0:
        if full:
            card_cap = max(1, len(remaining) // 2)
        else:
            card_cap = min(len(remaining), max_degree)
        hit = None
        for card in range(1, card_cap + 1):
            for subset in combinations(range(len(remaining)), card):
                degsum = sum(modpoly.deg(remaining[i]) for i in subset)
                if degsum > max_degree or degsum > current.degree:
                    continue
                tests += 1
                if tests > budget:
                    raise FactorizationInconclusive(
                        f"recombination budget {budget} exceeded"
                    )
                cand = _candidate(current, [remaining[i] for i in subset], modulus)
                if cand is None:
                    continue
                quotient = exact_divide(current, cand)
                if quotient is not None:
                    hit = (cand, subset, quotient)
                    break
            if hit:
                break
        if hit is None:
            break
        cand, subset, quotient = hit
        factors.append(cand)
        current = sign_normalize(primitive_part(quotient))
        remaining = [g for i, g in enumerate(remaining) if i not in subset]
    return factors, current


def _zassenhaus_squarefree(P: IntPoly, ell, skip_primes, budget, full,
                           max_degree=None):
    """Core routine on a primitive squarefree P with positive leading coeff.

    full=True performs a complete factorization (subset cardinality capped at
    half the modular factor count; an unfactored remainder is irreducible).
    full=False only extracts factors of degree <= max_degree and returns the
    cofactor unfactored.
    """
    if P.degree <= 0:
        return [], IntPoly.one()
    if P.degree == 1:
        return [sign_normalize(P)], IntPoly.one()
    if full:
        max_degree = P.degree // 2
    if ell is None:
        ell = choose_factoring_prime(P, skip=skip_primes)
    else:
        red = reduce_mod(P, ell)
        if (P.leading % ell == 0 or len(red) - 1 != P.degree
                or not modpoly.is_squarefree(red, ell)):
            raise NoSquarefreePrime(f"{ell} is not usable for this polynomial")
    lifted, modulus = _lift_modular_factors(P, ell, max_degree)
    if not lifted:
        if full:
            return [sign_normalize(P)], IntPoly.one()
        return [], P
    factors, cofactor = _recombine(P, lifted, modulus, max_degree, budget, full)
    if full and cofactor.degree > 0:
        factors.append(sign_normalize(cofactor))
        cofactor = IntPoly.one()
    factors.sort(key=lambda f: (f.degree, f.coeffs))
    return factors, cofactor


def split_by_degree(P: IntPoly, max_degree: int, ell=None, skip_primes=(),
                    budget: int = _DEFAULT_BUDGET):
    """All irreducible integer factors of P of degree <= max_degree.

    Returns (factors, cofactor) with factors a list of (IntPoly, multiplicity)
    and cofactor the remaining unfactored part, so that up to content
    P = prod(f^m) * cofactor.  P must be nonzero.
    """
    if P.is_zero:
        raise ValueError("zero polynomial")
    work = sign_normalize(primitive_part(P))
    found: list = []
    cofactor = IntPoly.one()
    for part, mult in squarefree_decomposition(work):
        if part.degree == 0:
            continue
        if part.degree <= max_degree:
            facs, rest = _zassenhaus_squarefree(part, ell, skip_primes, budget,
                                                full=True)
        else:
            facs, rest = _zassenhaus_squarefree(part, ell, skip_primes, budget,
                                                full=False, max_degree=max_degree)
        for f in facs:
            if f.degree <= max_degree:
                found.append((f, mult))
            else:
                rest = rest * f
        for _ in range(mult):
            cofactor = cofactor * rest
    found.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
    return found, cofactor


def factor_primitive(P: IntPoly, budget: int = _DEFAULT_BUDGET):
    """Irreducible factorization [(factor, mult)] of a nonzero polynomial.

    Content is discarded; factors are primitive with positive leading
    coefficient, sorted by degree then coefficients.
    """
    if P.is_zero:
        raise ValueError("zero polynomial")
    P = sign_normalize(primitive_part(P))
    if P.degree < 1:
        return []
    out = []
    for part, mult in squarefree_decomposition(P):
        facs, rest = _zassenhaus_squarefree(part, None, (), budget, full=True)
        assert rest.degree == 0
        out.extend((f, mult) for f in facs)
    out.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
    return out


def is_irreducible(P: IntPoly, budget: int = _DEFAULT_BUDGET) -> bool:
    """Irreducibility over Q of a polynomial of degree >= 1."""
    if P.degree < 1:
        return False
    prim = sign_normalize(primitive_part(P))
    facs = factor_primitive(prim, budget)
    return len(facs) == 1 and facs[0][1] == 1 and facs[0][0].degree == P.degree
