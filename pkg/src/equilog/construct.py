"""End-to-end construction of the counterexample sequences.

Two pipelines:

* unit-circle sequence: for an algebraic number kappa of modulus one (not a
  root of unity), pick viable exponents n, build an integer polynomial A of
  degree <= n that is certifiably tiny but nonzero at kappa^n (lattice small
  vectors), assemble R = X^(n^2) P + q A(X^n) + delta q P, split off the small
  cofactor S with an auxiliary-prime factorization, and record the certified
  conjugate log-distance average of the big irreducible factor T together
  with the explicit finite-n envelopes.

* off-circle sequence: for |kappa| != 1 at the place, the classical explicit
  family l X^n Q(X) - 1 (Q the minimal polynomial of kappa, l an auxiliary
  prime), whose averages have a closed form and approach log|kappa| away from
  the reference value.

Every inequality recorded here is certified by outward ball comparison; every
nonvanishing claim is decided exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

import gmpy2

from . import padics, zfactor
from .errors import (
    AssemblyInvariantViolated,
    CertificationFailed,
    DegenerateExponent,
    PreconditionError,
    PrecisionExhausted,
    SearchRangeExhausted,
)
from .heights import (
    INFINITY,
    AlgebraicNumber,
    ArchEmbedding,
    PadicEmbedding,
    Place,
    certify_unit_circle,
    is_root_of_unity,
    weil_height,
)
from .intpoly import (
    EisensteinCertificate,
    IntPoly,
    content,
    divides_in_q,
    eisenstein_degree,
    exact_divide,
    l1_norm,
    primitive_part,
    reduce_mod,
    sign_normalize,
    substitute_power,
)
from .lattice import (
    ArchLinearFormsProblem,
    PadicLinearFormsProblem,
    solve_arch,
    solve_padic,
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
from . import modpoly


@dataclass
class BuildConfig:
    """Knobs shared by the construction pipelines."""

    precision_bits: int = DEFAULT_PRECISION
    enumeration_budget: int = 10_000_000
    padic_exponent: int = 64
    exponent_ceiling: int = 4096
    precision_cap: int = PRECISION_CAP
    seed: int = 20240613


@dataclass
class CertifiedCheck:
    """One certified inequality attached to a sequence step.

    Ball endpoints compare in the certified direction with slack 2^-40, so
    exact-equality instances pass while anything violated by more than the
    slack fails.
    """

    name: str
    lhs: RealBall
    rhs: RealBall
    verdict: str  # pass / fail / indeterminate

    @staticmethod
    def compare(name: str, lhs: RealBall, rhs: RealBall) -> "CertifiedCheck":
        slack = gmpy2.mpfr(2) ** -40
        prec = max(lhs.prec, rhs.prec)
        up = gmpy2.context(precision=prec, round=gmpy2.RoundUp)
        down = gmpy2.context(precision=prec, round=gmpy2.RoundDown)
        if up.sub(lhs.hi, rhs.lo) <= slack:
            verdict = "pass"
        elif down.sub(lhs.lo, rhs.hi) > slack:
            verdict = "fail"
        else:
            verdict = "indeterminate"
        return CertifiedCheck(name, lhs, rhs, verdict)


@dataclass
class SequenceStep:
    """One constructed element of the unit-circle sequence."""

    n: int
    small_poly: IntPoly            # A, tiny at kappa^n
    assembled: IntPoly             # R = X^(n^2) P + q A(X^n) + delta q P
    irreducible_factor: IntPoly    # T, degree >= n^2
    cofactor: IntPoly              # S with S T = R
    shift_prime: int               # q
    shift_delta: int               # delta in {0, 1}
    certificate: EisensteinCertificate
    avg: RealBall                  # conjugate log-distance average of T at kappa
    avg_exact_logp: Optional[Fraction]  # p-adic case: avg = (this) * log p
    height_alpha: RealBall         # h of a root of T
    envelopes: dict                # name -> RealBall
    checks: List[CertifiedCheck]
    small_value_bound_exponent: Optional[int]  # p-adic f, None at infinity
    widened: bool = False

    @property
    def all_pass(self) -> bool:
        return all(c.verdict == "pass" for c in self.checks)


@dataclass
class OffCircleStep:
    """One element of the off-circle (classical) sequence."""

    n: int
    minimal_poly: IntPoly
    aux_prime: int                 # l
    lead_coeff: int                # q_m of the normalized Q
    avg: RealBall
    error: RealBall                # E_n = |avg - log max(1, |kappa|)|
    target: RealBall               # |log |kappa||
    height_alpha: RealBall
    reciprocal_branch: bool
    checks: List[CertifiedCheck]

    @property
    def all_pass(self) -> bool:
        return all(c.verdict == "pass" for c in self.checks)


# ---------------------------------------------------------------------------
# viable exponents
# ---------------------------------------------------------------------------


def _require_unit_circle_arch(kappa: AlgebraicNumber, precision: int):
    if not isinstance(kappa.embedding, ArchEmbedding):
        raise PreconditionError("archimedean embedding required")
    if is_root_of_unity(kappa.minpoly) is not None:
        raise PreconditionError("kappa must not be a root of unity")
    if kappa.minpoly in (IntPoly((-1, 1)), IntPoly((1, 1))):
        raise PreconditionError("kappa must not be +-1")
    if not certify_unit_circle(kappa, precision):
        raise PreconditionError("kappa is not on the unit circle")


def _kappa_power_balls(kappa: AlgebraicNumber, n: int, count: int, prec: int):
    """Balls for kappa^(n*i), i = 0..count, by iterated multiplication."""
    base = kappa.root_ball(prec)
    step = base.pow_int(n)
    out = [ComplexBall.from_int(1, prec)]
    cur = ComplexBall.from_int(1, prec)
    for _ in range(count):
        cur = cur * step
        out.append(cur)
    return out


def find_exponents(kappa: AlgebraicNumber, count: int, n_min: int = 1,
                   config: Optional[BuildConfig] = None) -> List[int]:
    """First `count` exponents n >= n_min usable by the archimedean pipeline.

    Requirements, each certified by ball arithmetic (straddling balls skip
    the exponent conservatively): Im(kappa^n) >= 1/2, n^2 >= deg(kappa), and
    H(kappa)^(2 sqrt n) > 6n.
    """
    config = config or BuildConfig()
    prec = config.precision_bits
    _require_unit_circle_arch(kappa, prec)
    d = kappa.degree
    h = weil_height(kappa, prec)
    out: List[int] = []
    base = kappa.root_ball(prec)
    n = max(n_min, 1)
    power = base.pow_int(n - 1)
    while n <= config.exponent_ceiling and len(out) < count:
        power = power * base
        if n * n >= d:
            im_ok = power.im.lo >= 0.5
            if im_ok and _largeness_arch(h, n, prec):
                out.append(n)
        n += 1
    if len(out) < count:
        raise SearchRangeExhausted(
            f"only {len(out)} viable exponents below {config.exponent_ceiling}"
        )
    return out


def _largeness_arch(h: RealBall, n: int, prec: int) -> bool:
    """Certified H^(2 sqrt n) > 6n."""
    root = RealBall.from_int(n, prec).sqrt()
    power = (h * 2 * root).exp()
    return power.lo > 6 * n


def padic_viable_exponents(kappa: AlgebraicNumber, count: int, n_min: int = 2,
                           config: Optional[BuildConfig] = None) -> List[int]:
    """First `count` exponents with n^2 >= deg and H^(sqrt n) > n + 1 certified."""
    config = config or BuildConfig()
    prec = config.precision_bits
    d = kappa.degree
    h = weil_height(kappa, prec)
    out: List[int] = []
    n = max(n_min, 1)
    while n <= config.exponent_ceiling and len(out) < count:
        if n * n >= d:
            root = RealBall.from_int(n, prec).sqrt()
            if (h * root).exp().lo > n + 1:
                out.append(n)
        n += 1
    if len(out) < count:
        raise SearchRangeExhausted(
            f"only {len(out)} viable exponents below {config.exponent_ceiling}"
        )
    return out


# ---------------------------------------------------------------------------
# small-value polynomials
# ---------------------------------------------------------------------------


@dataclass
class ArchSmallValue:
    poly: IntPoly
    value: RealBall                # |A(kappa^n)| certified
    epsilon: RealBall
    row_bound: RealBall            # C_n
    value_bound: RealBall          # sqrt(2) H^(-(n-1)(n - sqrt n))
    l1_bound_ok: bool              # l1 <= 6 n H^(2n) certified


def _vanishes_at_power(minpoly: IntPoly, coeffs_ascending, n: int) -> bool:
    """Exact test: does A(X^n) vanish at every root of minpoly (A from coeffs)."""
    A = IntPoly(coeffs_ascending)
    if A.is_zero:
        return True
    return divides_in_q(minpoly, substitute_power(A, n))


def build_arch_A(kappa: AlgebraicNumber, n: int,
                 config: Optional[BuildConfig] = None) -> ArchSmallValue:
    """Integer A, deg <= n, certifiably small but nonzero at kappa^n.

    Small-vector problem: rows bound the top coefficients by C_n and the real
    and imaginary parts of A(kappa^n) by epsilon = sqrt(y1 C_n^(1-n)), where
    y1 = Im(kappa^n) >= 1/2; the determinant matches the bound product, so a
    solution exists.  Nonvanishing is decided exactly (A(X^n) mod the minimal
    polynomial of kappa), with the ball exclusion as a fast path.
    """
    config = config or BuildConfig()
    _require_unit_circle_arch(kappa, config.precision_bits)
    d = kappa.degree
    h = weil_height(kappa, config.precision_bits)
    if not _largeness_arch(h, n, config.precision_bits):
        raise DegenerateExponent(
            f"H^(2 sqrt n) > 6n not certified at n={n}; use a larger exponent"
        )
    minpoly = kappa.minpoly
    prec = config.precision_bits
    A = None
    while prec <= config.precision_cap and A is None:
        h = weil_height(kappa, prec)
        powers = _kappa_power_balls(kappa, n, n, prec)
        y1 = powers[1].im
        if not y1.lo >= 0.5:
            raise DegenerateExponent(f"Im(kappa^n) >= 1/2 not certified at n={n}")
        sqrt_n = RealBall.from_int(n, prec).sqrt()
        c_n = ((RealBall.from_int(2 * n, prec) - 2 * sqrt_n) * h).exp()
        eps = (y1 * c_n.pow_int(1 - n)).sqrt()

        m = n + 1
        zero = RealBall.from_int(0, prec)
        one = RealBall.from_int(1, prec)
        matrix, bounds = [], []
        for i in range(1, n):
            row = [zero] * m
            row[i - 1] = one
            matrix.append(row)
            bounds.append(c_n)
        # column c holds the coefficient a_(n-c)
        matrix.append([powers[n - c].im for c in range(n)] + [zero])
        bounds.append(eps)
        matrix.append([powers[n - c].re for c in range(n)] + [one])
        bounds.append(eps)
        problem = ArchLinearFormsProblem(matrix=matrix, bounds=bounds)

        def reject(avec):
            coeffs = list(reversed(avec))
            return _vanishes_at_power(minpoly, coeffs, n)

        try:
            avec = solve_arch(problem, budget=config.enumeration_budget,
                              reject=reject)
            A = IntPoly(reversed(avec))
        except (PrecisionExhausted, CertificationFailed):
            prec *= 2
    if A is None:
        raise PrecisionExhausted("small-vector search did not certify")

    # refine the certified value and bounds without re-solving
    while prec <= config.precision_cap:
        h = weil_height(kappa, prec)
        powers = _kappa_power_balls(kappa, n, n, prec)
        sqrt_n = RealBall.from_int(n, prec).sqrt()
        c_n = ((RealBall.from_int(2 * n, prec) - 2 * sqrt_n) * h).exp()
        eps = (powers[1].im * c_n.pow_int(1 - n)).sqrt()
        value_ball = None
        for c, p_ball in zip(A.coeffs, powers):
            if c:
                term = p_ball * c
                value_ball = term if value_ball is None else value_ball + term
        value = value_ball.abs()
        exponent = -(RealBall.from_int(n - 1, prec)
                     * (RealBall.from_int(n, prec) - sqrt_n))
        value_bound = RealBall.from_int(2, prec).sqrt() * (exponent * h).exp()
        l1_cap = (RealBall.from_int(2 * n, prec) * h).exp() * (6 * n)
        l1_ok = l1_norm(A) <= l1_cap.lo
        if value.hi <= value_bound.lo and l1_ok:
            return ArchSmallValue(poly=A, value=value, epsilon=eps,
                                  row_bound=c_n, value_bound=value_bound,
                                  l1_bound_ok=True)
        prec *= 2
    raise PrecisionExhausted("could not certify the small-value polynomial")


@dataclass
class PadicSmallValue:
    poly: IntPoly
    f: int                         # certified valuation floor
    lam: int                       # coefficient bound used
    widened: bool
    valuation: int                 # exact v_p(A(kappa^n)) >= f
    local_degree: int


def build_padic_A(kappa: AlgebraicNumber, n: int,
                  config: Optional[BuildConfig] = None) -> PadicSmallValue:
    """Integer A, deg <= n, with v_p(A(kappa^n)) >= f, A(kappa^n) != 0.

    f = floor(n (n - sqrt n) h(kappa) / log p), validated so that
    p^(-f) <= p H^(-n(n - sqrt n)) is certified; the coefficient box is
    floor(p^(d f / (n+1))), widened once by p if the floor broke the
    existence threshold (recorded).
    """
    config = config or BuildConfig()
    if not isinstance(kappa.embedding, PadicEmbedding):
        raise PreconditionError("p-adic embedding required")
    if is_root_of_unity(kappa.minpoly) is not None:
        raise PreconditionError("kappa must not be a root of unity")
    p = kappa.embedding.p
    factor = kappa.local_factor(max(config.padic_exponent, 8))
    if padics.padic_abs_from_factor(factor) != 1:
        raise PreconditionError("|kappa|_p = 1 required")
    prec = config.precision_bits
    h = weil_height(kappa, prec)
    sqrt_n = RealBall.from_int(n, prec).sqrt()
    if not (h * sqrt_n).exp().lo > n + 1:
        raise DegenerateExponent(
            f"H^(sqrt n) > n+1 not certified at n={n}; use a larger exponent"
        )

    # f from the lower ball endpoint, then validate (f+1) log p >= sup
    f = None
    while prec <= config.precision_cap:
        h = weil_height(kappa, prec)
        sqrt_n = RealBall.from_int(n, prec).sqrt()
        logp = RealBall.log_of_int(p, prec)
        x = (RealBall.from_int(n, prec) - sqrt_n) * n * h / logp
        cand = max(0, int(gmpy2.floor(x.lo)))
        if x.hi < cand + 1:
            f = cand
            break
        prec *= 2
    if f is None:
        raise PrecisionExhausted("valuation floor did not stabilize")

    d_loc = factor.residue_degree
    lam = int(gmpy2.iroot(gmpy2.mpz(p) ** (d_loc * f), n + 1)[0]) if f else 1
    lam = max(lam, 1)

    work_exponent = max(f + 16, config.padic_exponent)
    factor = kappa.local_factor(work_exponent)
    modulus_f = p**f
    forms = []
    coords = [padics.zp_coordinates(factor, n * k) for k in range(n + 1)]
    for i in range(d_loc):
        forms.append([coords[k][i] % max(modulus_f, 1) for k in range(n + 1)])
    problem = PadicLinearFormsProblem(p=p, f=f, forms=forms, bound=lam)

    minpoly = kappa.minpoly

    def reject(vec):
        return _vanishes_at_power(minpoly, vec, n)

    sol = solve_padic(problem, budget=config.enumeration_budget, reject=reject)
    A = IntPoly(sol.vector)
    val = padics.padic_eval_abs(substitute_power(A, n), minpoly, p,
                                kappa.embedding.index,
                                N=work_exponent)[1]
    if val < f:
        raise AssemblyInvariantViolated("certified valuation below target")
    cap = (n + 1) * sol.bound_used
    if l1_norm(A) > cap:
        raise AssemblyInvariantViolated("l1 norm exceeds the box bound")
    return PadicSmallValue(poly=A, f=f, lam=sol.bound_used,
                           widened=sol.widened, valuation=val,
                           local_degree=d_loc)


# ---------------------------------------------------------------------------
# assembly and factor extraction
# ---------------------------------------------------------------------------


def choose_q_delta(P_kappa: IntPoly, A: IntPoly):
    """Smallest prime q not dividing P(0); delta = 1 iff q divides A(0)."""
    c0 = P_kappa.coeff(0)
    if c0 == 0:
        raise PreconditionError("P(0) must be nonzero")
    q = 2
    while c0 % q == 0:
        q = int(gmpy2.next_prime(q))
    delta = 1 if A.coeff(0) % q == 0 else 0
    return q, delta


def assemble_R(P_kappa: IntPoly, A: IntPoly, n: int, q: int, delta: int
               ) -> IntPoly:
    """R = X^(n^2) P + q A(X^n) + delta q P, with divisibility postconditions.

    Checks: q | r_i for i < n^2 exactly, q^2 does not divide r_0, q does not
    divide r_(n^2), and the Eisenstein certificate at q has e >= n^2.
    """
    d = P_kappa.degree
    if A.degree > n:
        raise PreconditionError("deg A must be <= n")
    if n * n < d:
        raise PreconditionError("n^2 >= deg P required")
    R = P_kappa.shift(n * n) + q * substitute_power(A, n) + delta * q * P_kappa
    nsq = n * n
    for i in range(nsq):
        if R.coeff(i) % q:
            raise AssemblyInvariantViolated(f"q does not divide r_{i}")
    if R.coeff(0) % (q * q) == 0:
        raise AssemblyInvariantViolated("q^2 divides r_0")
    if R.coeff(nsq) % q == 0:
        raise AssemblyInvariantViolated("q divides r_(n^2)")
    if R.degree != nsq + d:
        raise AssemblyInvariantViolated("unexpected degree")
    cert = eisenstein_degree(R, q)
    if cert is None or cert.e < nsq:
        raise AssemblyInvariantViolated("Eisenstein certificate too weak")
    return R


def extract_small_factors(R: IntPoly, max_deg: int, ell: Optional[int] = None,
                          skip_primes=(), budget: int = 2_000_000,
                          certificate: Optional[EisensteinCertificate] = None):
    """Split R = S T with S the product of all integer factors of degree
    <= max_deg and T the cofactor.

    With an Eisenstein certificate of e > max_deg and e >= deg(R) - max_deg,
    the cofactor T is irreducible: a second factor of T would have degree
    above max_deg, overshooting deg(R).
    """
    if certificate is not None:
        if certificate.e < R.degree - max_deg:
            raise PreconditionError("certificate too weak for this split")
        if certificate.e <= max_deg:
            raise PreconditionError("certificate window overlaps max_deg")
    facs, _ = zfactor.split_by_degree(R, max_deg, ell=ell,
                                      skip_primes=skip_primes, budget=budget)
    S = IntPoly.one()
    for fpoly, mult in facs:
        S = S * fpoly**mult
    T = exact_divide(R, S)
    if T is None:
        raise AssemblyInvariantViolated("small-factor product does not divide")
    if T.leading < 0:
        S, T = -S, -T
    assert S * T == R
    return S, T


def spot_check_irreducible(T: IntPoly, min_cofactor_window: int,
                           seed: int = 20240613, primes_tried: int = 8) -> str:
    """Degree-pattern test modulo a few seeded primes.

    'confirmed' when some prime's factor-degree subset sums avoid the window
    [1, min_cofactor_window] entirely (then no factor of such degree exists);
    'consistent' when every tried prime stays inconclusive.
    """
    import random

    rng = random.Random(seed)
    window = range(1, min_cofactor_window + 1)
    tried = 0
    ell = 1000 + rng.randrange(1000)
    while tried < primes_tried:
        ell = int(gmpy2.next_prime(ell))
        if T.leading % ell == 0:
            continue
        red = reduce_mod(T, ell)
        if len(red) - 1 != T.degree or not modpoly.is_squarefree(red, ell):
            continue
        tried += 1
        pattern = modpoly.degree_pattern(red, ell)
        sums = {0}
        for dd in pattern:
            sums |= {s + dd for s in sums}
        if not any(w in sums for w in window):
            return "confirmed"
    return "consistent"


# ---------------------------------------------------------------------------
# the unit-circle sequence
# ---------------------------------------------------------------------------


def _envelopes(n: int, d: int, q: int, place: Place, h: RealBall,
               prec: int) -> dict:
    """The three explicit finite-n envelopes, evaluated as balls."""
    log2 = RealBall.log_of_int(2, prec)
    logq = RealBall.log_of_int(q, prec)
    logn = RealBall.log_of_int(n, prec)
    logc = RealBall.log_of_int(place.c, prec)
    sqrt_n = RealBall.from_int(n, prec).sqrt()
    nsq = n * n

    # log(q c_v / c_1) with c_1 = c_0^d (2^(d+3) q)^(-d), c_0 = H^(-d)
    log_c1_inv = (h * d * d) + (d * (d + 3)) * log2 + d * logq
    upper_num = (logq + logc + log_c1_inv + d * logn
                 + ((sqrt_n * n * (d * d + 2)) - nsq) * h)
    upper = upper_num / (nsq + d)

    lower_num = -((d * (nsq + d + d * n)) * h) \
        - ((d * (nsq + d + 3)) * log2) - d * RealBall.log_of_int(n * q, prec)
    lower = lower_num / nsq

    height_num = RealBall.log_of_int(8 * q, prec) + logn + (d * n) * h
    height = height_num / nsq
    return {"upper": upper, "lower": lower, "height": height}


def _avg_closed_form_arch(T: IntPoly, kappa: AlgebraicNumber, prec: int,
                          cap: int) -> RealBall:
    w = prec
    while w <= cap:
        kball = kappa.root_ball(w)
        val = ball_horner(T.coeffs, kball, w).abs()
        if not val.contains_zero():
            return ((val.log() - RealBall.log_of_int(abs(T.leading), w))
                    / T.degree)
        w *= 2
    raise PrecisionExhausted("T(kappa) ball kept touching zero")


def _avg_root_sum_arch(T: IntPoly, kappa: AlgebraicNumber, prec: int,
                       cap: int) -> RealBall:
    w = prec
    while w <= cap:
        kball = kappa.root_ball(w)
        roots = complex_roots(T, w)
        total = RealBall.from_int(0, w)
        ok = True
        for ball, mult in zip(roots.roots, roots.multiplicities):
            dist = (ball - kball).abs()
            if dist.contains_zero():
                ok = False
                break
            total = total + dist.log() * mult
        if ok:
            return total / T.degree
        w *= 2
    raise PrecisionExhausted("root-sum average kept touching zero")


def build_kappa_sequence(kappa: AlgebraicNumber, place: Place = INFINITY,
                         k_max: int = 3,
                         config: Optional[BuildConfig] = None
                         ) -> List[SequenceStep]:
    """The first k_max steps of the unit-circle sequence at the given place.

    Each step records the constructed polynomials, the certified average, the
    height of the roots of T, and pass/fail verdicts for the three envelope
    inequalities plus the per-step bound checks.
    """
    config = config or BuildConfig()
    P = kappa.minpoly
    d = P.degree
    if place.is_infinite:
        exps = find_exponents(kappa, k_max, config=config)
    else:
        if not isinstance(kappa.embedding, PadicEmbedding) \
                or kappa.embedding.p != place.p:
            raise PreconditionError("kappa must be embedded at the place prime")
        exps = padic_viable_exponents(kappa, k_max, config=config)

    steps: List[SequenceStep] = []
    prev_deg = 0
    for n in exps:
        step = _build_step(kappa, place, n, config)
        if step.irreducible_factor.degree <= prev_deg:
            raise AssemblyInvariantViolated("degrees must strictly increase")
        prev_deg = step.irreducible_factor.degree
        steps.append(step)
    return steps


def _build_step(kappa: AlgebraicNumber, place: Place, n: int,
                config: BuildConfig) -> SequenceStep:
    P = kappa.minpoly
    d = P.degree
    prec = config.precision_bits
    checks: List[CertifiedCheck] = []

    if place.is_infinite:
        small = build_arch_A(kappa, n, config)
        A = small.poly
        checks.append(CertifiedCheck.compare(
            "small_value_bound", small.value, small.value_bound))
        f_exp = None
        widened = False
    else:
        psmall = build_padic_A(kappa, n, config)
        A = psmall.poly
        f_exp = psmall.f
        widened = psmall.widened
        # |A(kappa^n)|_p <= p^(-f) iff f <= v_p(A(kappa^n)): exact integers
        checks.append(CertifiedCheck.compare(
            "small_value_bound",
            RealBall.from_int(psmall.f, prec),
            RealBall.from_int(psmall.valuation, prec)))

    q, delta = choose_q_delta(P, A)
    R = assemble_R(P, A, n, q, delta)
    cert = eisenstein_degree(R, q)
    S, T = extract_small_factors(R, d, skip_primes=(q,), certificate=cert)
    if S * T != R:
        raise AssemblyInvariantViolated("S T != R")
    if T.degree < n * n:
        raise AssemblyInvariantViolated("deg T < n^2")
    spot = spot_check_irreducible(T, T.degree - cert.e, seed=config.seed)
    if spot not in ("confirmed", "consistent"):
        raise AssemblyInvariantViolated("irreducibility spot check failed")

    h_kappa = weil_height(kappa, prec)
    if place.is_infinite:
        avg_closed = _avg_closed_form_arch(T, kappa, prec, config.precision_cap)
        avg_sum = _avg_root_sum_arch(T, kappa, prec, config.precision_cap)
        meet = avg_closed.intersect(avg_sum)
        if meet is None:
            raise PrecisionExhausted("closed-form and root-sum averages disagree")
        avg = meet
        avg_exact = None
    else:
        r = _padic_avg_exact(T, kappa, place)
        avg_exact = r
        avg = RealBall.from_fraction(r, prec) * RealBall.log_of_int(place.p, prec)

    h_alpha = (mahler_measure(T, prec + 8).log() / T.degree).round_to(prec)
    env = _envelopes(n, d, q, place, h_kappa, prec)
    checks.append(CertifiedCheck.compare("avg_le_upper", avg, env["upper"]))
    checks.append(CertifiedCheck.compare("lower_le_avg", env["lower"], avg))
    checks.append(CertifiedCheck.compare("height_envelope", h_alpha, env["height"]))
    l1_cap = ((RealBall.from_int(2 * n, prec) * h_kappa).exp() * (6 * n)) \
        if place.is_infinite else None
    if l1_cap is not None:
        checks.append(CertifiedCheck.compare(
            "l1_bound", RealBall.from_int(l1_norm(A), prec), l1_cap))

    return SequenceStep(
        n=n, small_poly=A, assembled=R, irreducible_factor=T, cofactor=S,
        shift_prime=q, shift_delta=delta, certificate=cert, avg=avg,
        avg_exact_logp=avg_exact, height_alpha=h_alpha, envelopes=env,
        checks=checks, small_value_bound_exponent=f_exp, widened=widened,
    )


def _padic_avg_exact(T: IntPoly, kappa: AlgebraicNumber, place: Place
                     ) -> Fraction:
    p = place.p
    _, v_val = padics.padic_eval_abs(T, kappa.minpoly, p,
                                     kappa.embedding.index)
    v_t = padics.vp(T.leading, p)
    return Fraction(v_t - v_val, T.degree)


# ---------------------------------------------------------------------------
# the off-circle (classical) sequence
# ---------------------------------------------------------------------------


def _abs_place(kappa: AlgebraicNumber, place: Place, prec: int):
    """(|kappa|_place as ball, exact valuation or None)."""
    if place.is_infinite:
        return kappa.root_ball(prec).abs(), None
    factor = kappa.local_factor(padics.DEFAULT_PRECISION_EXPONENT)
    v = factor.root_valuation()
    ball = RealBall.from_fraction(padics.padic_abs_from_factor(factor), prec)
    return ball, v


def _select_aux_prime(q_m: int, q_0: int) -> int:
    ell = 2
    while q_m % ell == 0 or q_0 % ell == 0:
        ell = int(gmpy2.next_prime(ell))
    return ell


def build_bm_sequence(kappa: AlgebraicNumber, place: Place, ns: List[int],
                      config: Optional[BuildConfig] = None
                      ) -> List[OffCircleStep]:
    """Steps of the classical off-circle sequence at the listed exponents.

    Requires |kappa| != 1 at the place; when |kappa| < 1 the reciprocal
    branch runs the construction at 1/kappa and records the averages for the
    original number, which sit exactly at log|kappa| away from the reference.
    """
    config = config or BuildConfig()
    prec = config.precision_bits
    if kappa.is_zero:
        raise PreconditionError("kappa must be nonzero")
    mag, v = _abs_place(kappa, place, prec)
    if place.is_infinite:
        w = prec
        while mag.contains(1):
            w *= 2
            if w > config.precision_cap:
                raise PreconditionError("|kappa| = 1 not allowed (or undecidable)")
            mag = kappa.root_ball(w).abs()
        reciprocal = mag.hi < 1
    else:
        if v == 0:
            raise PreconditionError("|kappa|_p = 1 not allowed")
        reciprocal = v > 0  # |kappa|_p = p^(-v) < 1

    work = kappa
    if reciprocal:
        inv_poly = sign_normalize(kappa.minpoly.reverse())
        if isinstance(kappa.embedding, PadicEmbedding):
            work = AlgebraicNumber.from_padic(inv_poly, kappa.embedding.p,
                                              trusted=True)
        else:
            work = _reciprocal_arch(kappa, inv_poly, prec)

    # normalized Q with positive constant term
    Q = work.minpoly
    if Q.coeff(0) < 0:
        Q = -Q
    m = Q.degree
    q_m = Q.leading
    ell = _select_aux_prime(q_m, Q.coeff(0))

    ref = reference_ball(kappa, place, prec)
    target = _log_abs_place(kappa, place, prec).abs()

    steps: List[OffCircleStep] = []
    for n in ns:
        tilde = (ell * Q.shift(n)) - IntPoly.one()
        cert = eisenstein_degree(tilde.reverse(), ell)
        if cert is None or cert.e != n + m:
            raise AssemblyInvariantViolated("reversal is not Eisenstein at l")
        T = sign_normalize(tilde)

        logp_or_prec = prec
        if reciprocal:
            T_step = sign_normalize(tilde.reverse())
            avg = _log_abs_place(kappa, place, prec)
        else:
            T_step = T
            avg = -(_log_of_pos_int_place(ell * abs(q_m), place, prec)
                    ) / (n + m)
        err = (avg - ref).abs()
        h_alpha = (mahler_measure(T_step, prec + 8).log()
                   / (n + m)).round_to(prec)

        checks = [CertifiedCheck.compare(
            "height_chain",
            h_alpha * n,
            RealBall.log_of_int(l1_norm(ell * Q), prec) + h_alpha * m)]
        rate = (RealBall.log_of_int(ell, prec)
                + RealBall.log_of_int(abs(q_m), prec)) / (n + m)
        tol = RealBall.from_fraction(Fraction(1, 2**30), prec)
        checks.append(CertifiedCheck.compare(
            "rate", (err - target).abs(), rate + tol))

        steps.append(OffCircleStep(
            n=n, minimal_poly=T_step, aux_prime=ell, lead_coeff=q_m, avg=avg,
            error=err, target=target, height_alpha=h_alpha,
            reciprocal_branch=reciprocal, checks=checks))
    return steps


def _reciprocal_arch(kappa: AlgebraicNumber, inv_poly: IntPoly, prec: int
                     ) -> AlgebraicNumber:
    """1/kappa with the matching archimedean embedding."""
    target = ComplexBall.from_int(1, prec) / kappa.root_ball(prec)
    roots = complex_roots(inv_poly, prec)
    hits = [i for i, b in enumerate(roots.roots)
            if b.re.overlaps(target.re) and b.im.overlaps(target.im)]
    if len(hits) != 1:
        raise PrecisionExhausted("could not locate 1/kappa among the roots")
    return AlgebraicNumber.from_root(inv_poly, hits[0], trusted=True)


def reference_ball(kappa: AlgebraicNumber, place: Place, prec: int) -> RealBall:
    """log max(1, |kappa|_place)."""
    from .heights import reference_value
    return reference_value(kappa, place, prec)


def _log_abs_place(kappa: AlgebraicNumber, place: Place, prec: int) -> RealBall:
    """log |kappa|_place as a ball."""
    if place.is_infinite:
        return kappa.root_ball(prec).abs().log()
    factor = kappa.local_factor(padics.DEFAULT_PRECISION_EXPONENT)
    v = factor.root_valuation()
    return RealBall.log_of_int(place.p, prec) * (-v)


def _log_of_pos_int_place(k: int, place: Place, prec: int) -> RealBall:
    """log |k|_place for a positive integer k."""
    if place.is_infinite:
        return RealBall.log_of_int(k, prec)
    v = padics.vp(k, place.p) if k % place.p == 0 else 0
    return RealBall.log_of_int(place.p, prec) * (-v)
