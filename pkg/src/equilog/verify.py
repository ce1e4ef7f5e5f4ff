"""Independent certified checkers for every explicit inequality.

Each checker builds a (lhs, rhs) ball pair and passes only in the certified
direction sup(lhs) <= inf(rhs); overlapping balls are indeterminate and
trigger an automatic precision-doubling retry before being reported.  The
sequence checker re-derives every envelope constant from raw step data along
a different arithmetic route than the construction pipeline, so the two
implementations cross-validate each other.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

from . import padics, zfactor
from .errors import PreconditionError, PrecisionExhausted, RamifiedError
from .heights import (
    INFINITY,
    AlgebraicNumber,
    ArchEmbedding,
    PadicEmbedding,
    Place,
    equidistribution_error,
    is_root_of_unity,
    log_distance_average,
    minimal_poly_of_image,
    modified_height,
    multiplicative_height,
    weil_height,
)
from .intpoly import (
    IntPoly,
    cyclotomic,
    divides_in_q,
    eval_exact,
    l1_norm,
    sign_normalize,
)
from .numeric import (
    DEFAULT_PRECISION,
    PRECISION_CAP,
    RealBall,
    ball_horner,
    mahler_measure,
)

CORPUS_SEED = 20240613


@dataclass(frozen=True)
class CheckReport:
    check_id: str
    inputs: str
    lhs: RealBall
    rhs: RealBall
    verdict: str            # pass / fail / indeterminate
    slack: RealBall         # rhs - lhs
    precision_used: int

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def as_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "inputs": self.inputs,
            "lhs": self.lhs.as_dict(),
            "rhs": self.rhs.as_dict(),
            "verdict": self.verdict,
            "slack": self.slack.as_dict(),
            "precision_used": self.precision_used,
        }


COMPARISON_SLACK_BITS = 40  # endpoint slack 2^-40 for pass/fail decisions


def certified_compare(check_id: str, inputs: str,
                      pair: Callable[[int], Tuple[RealBall, RealBall]],
                      precision: int = DEFAULT_PRECISION,
                      cap: int = PRECISION_CAP) -> CheckReport:
    """Run pair(prec) -> (lhs, rhs) and certify lhs <= rhs.

    Endpoints compare in the certified direction (sup against inf) with the
    slack 2^-40, which lets exact-equality instances pass; overlap beyond the
    slack escalates precision, and only a certified violation fails.  An
    internal precision exhaustion counts as indeterminate, not an error.
    """
    import gmpy2

    slack = gmpy2.mpfr(2) ** (-COMPARISON_SLACK_BITS)
    prec = precision
    lhs = rhs = None
    while prec <= cap:
        try:
            lhs, rhs = pair(prec)
        except PrecisionExhausted:
            if lhs is None:
                raise
            break
        up = gmpy2.context(precision=max(lhs.prec, rhs.prec),
                           round=gmpy2.RoundUp)
        if up.sub(lhs.hi, rhs.lo) <= slack:
            return CheckReport(check_id, inputs, lhs, rhs, "pass",
                               rhs - lhs, prec)
        down = gmpy2.context(precision=max(lhs.prec, rhs.prec),
                             round=gmpy2.RoundDown)
        if down.sub(lhs.lo, rhs.hi) > slack:
            return CheckReport(check_id, inputs, lhs, rhs, "fail",
                               rhs - lhs, prec)
        prec *= 2
    return CheckReport(check_id, inputs, lhs, rhs, "indeterminate",
                       rhs - lhs, min(prec, cap))


def _pair_min(a: Tuple[RealBall, RealBall], b: Tuple[RealBall, RealBall]):
    """Combine two inequalities into the one with the smaller slack."""
    slack_a = a[1] - a[0]
    slack_b = b[1] - b[0]
    return a if slack_a.mid <= slack_b.mid else b


# ---------------------------------------------------------------------------
# lemma checkers
# ---------------------------------------------------------------------------


def check_sandwich(P: IntPoly, precision: int = DEFAULT_PRECISION) -> CheckReport:
    """M(P) <= l1(P) <= 2^deg * M(P); reports the tighter side."""
    if P.is_zero:
        raise PreconditionError("nonzero polynomial required")
    d = P.degree
    norm = l1_norm(P)

    def pair(prec):
        m = mahler_measure(P, prec)
        left = (m, RealBall.from_int(norm, prec))
        right = (RealBall.from_int(norm, prec), m * (1 << d))
        return _pair_min(left, right)

    return certified_compare("sandwich", f"P={P.to_csv()}", pair, precision)


def check_liouville(P: IntPoly, kappa: AlgebraicNumber, place: Place = INFINITY,
                    precision: int = DEFAULT_PRECISION) -> CheckReport:
    """|P(kappa)|_place >= H(kappa)^(-d deg P) * l1(P)^(-d), P(kappa) != 0."""
    if P.is_zero or divides_in_q(kappa.minpoly, P):
        raise PreconditionError("P must not vanish at kappa")
    d = kappa.degree
    D = max(P.degree, 0)
    norm = l1_norm(P)
    inputs = f"P={P.to_csv()};kappa={kappa.minpoly.to_csv()};v={place}"

    def pair(prec):
        H = multiplicative_height(kappa, prec)
        rhs_inv = H.pow_int(d * D) * RealBall.from_int(norm, prec).pow_int(d)
        lower = RealBall.from_int(1, prec) / rhs_inv
        if place.is_infinite:
            val = ball_horner(P.coeffs, kappa.root_ball(prec), prec).abs()
        else:
            absval, _ = padics.padic_eval_abs(P, kappa.minpoly, place.p,
                                              kappa.embedding.index)
            val = RealBall.from_fraction(absval, prec)
        return lower, val

    return certified_compare("liouville", inputs, pair, precision)


def check_height_image(alpha: AlgebraicNumber, Q: IntPoly,
                       precision: int = DEFAULT_PRECISION) -> CheckReport:
    """h(Q(alpha)) <= log l1(Q) + deg(Q) h(alpha)."""
    if Q.is_zero:
        raise PreconditionError("Q must be nonzero")
    image_poly = minimal_poly_of_image(alpha, Q)
    image = AlgebraicNumber(image_poly, alpha.embedding, trusted=True) \
        if isinstance(alpha.embedding, ArchEmbedding) \
        else AlgebraicNumber(image_poly, ArchEmbedding(0), trusted=True)
    m = Q.degree
    inputs = f"alpha={alpha.minpoly.to_csv()};Q={Q.to_csv()}"

    def pair(prec):
        lhs = weil_height(image, prec)
        rhs = RealBall.log_of_int(l1_norm(Q), prec) + weil_height(alpha, prec) * m
        return lhs, rhs

    return certified_compare("height_image", inputs, pair, precision)


def check_hprime_rules(alpha: AlgebraicNumber, n: int,
                       precision: int = DEFAULT_PRECISION) -> List[CheckReport]:
    """h'(alpha^n) <= n h'(alpha); and h'(alpha^n) >= h'(alpha)/2 when
    deg >= n^2/2."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    d = alpha.degree
    power_poly = minimal_poly_of_image(alpha, IntPoly.x_power(n))
    power = AlgebraicNumber(power_poly, ArchEmbedding(0), trusted=True)
    inputs = f"alpha={alpha.minpoly.to_csv()};n={n}"
    out = [certified_compare(
        "hprime_upper", inputs,
        lambda prec: (modified_height(power, prec),
                      modified_height(alpha, prec) * n),
        precision)]
    if 2 * d >= n * n:
        out.append(certified_compare(
            "hprime_lower", inputs,
            lambda prec: (modified_height(alpha, prec) / 2,
                          modified_height(power, prec)),
            precision))
    return out


def _hprime_pieces(alpha: AlgebraicNumber, prec: int):
    hp = modified_height(alpha, prec)
    cube = ((hp.log()) / 3).exp()          # h'(alpha)^(1/3)
    return hp, cube


def _require_height_at_most(alpha: AlgebraicNumber, bound: Fraction,
                            precision: int):
    h = weil_height(alpha, precision)
    if not h.hi <= RealBall.from_fraction(bound, precision).lo:
        raise PreconditionError(f"h(alpha) <= {bound} required")


def check_arch_upper(u: AlgebraicNumber, alpha: AlgebraicNumber,
                     precision: int = DEFAULT_PRECISION) -> CheckReport:
    """Average of log|conj(alpha) - u| <= 64 h'(alpha)^(1/3) log(4/h'(alpha)),
    for unit-modulus u, h(alpha) <= 1, and no conjugate of alpha equal to u."""
    _require_height_at_most(alpha, Fraction(1), precision)
    inputs = f"u={u.minpoly.to_csv()};alpha={alpha.minpoly.to_csv()}"

    def pair(prec):
        avg = log_distance_average(alpha, u, INFINITY, prec)
        hp, cube = _hprime_pieces(alpha, prec)
        bound = 64 * cube * (RealBall.log_of_int(4, prec) - hp.log())
        return avg, bound

    return certified_compare("arch_upper", inputs, pair, precision)


def check_rootunity_error(order: int, alpha: AlgebraicNumber,
                          precision: int = DEFAULT_PRECISION) -> CheckReport:
    """E(log|z - zeta|, alpha) <= 104 n h'(alpha)^(1/3) log(8/h'(alpha)) for a
    root of unity zeta of the given order; needs alpha outside mu_n,
    h(alpha) <= 1/n and deg(alpha) >= n^2/2."""
    n = order
    d = alpha.degree
    if 2 * d < n * n:
        raise PreconditionError("degree >= n^2/2 required")
    _require_height_at_most(alpha, Fraction(1, n), precision)
    k = is_root_of_unity(alpha.minpoly)
    if k is not None and n % k == 0:
        raise PreconditionError("alpha must lie outside mu_n")
    zeta = AlgebraicNumber(cyclotomic(n), ArchEmbedding(0), trusted=True)
    inputs = f"zeta_order={n};alpha={alpha.minpoly.to_csv()}"

    def pair(prec):
        err = equidistribution_error(alpha, zeta, INFINITY, prec)
        hp, cube = _hprime_pieces(alpha, prec)
        bound = (104 * n) * cube * (RealBall.log_of_int(8, prec) - hp.log())
        return err, bound

    return certified_compare("rootunity_error", inputs, pair, precision)


def _padic_average_at(alpha: AlgebraicNumber, value_poly: IntPoly, p: int,
                      factor_index: int, prec: int) -> RealBall:
    """(log|P_alpha(x)|_p - log|lead|_p)/d for x given by its minimal
    polynomial and local-factor index."""
    P = alpha.minpoly
    if value_poly == IntPoly((-1, 1)):
        val = eval_exact(P, 1)
        if val == 0:
            raise PreconditionError("alpha must not equal 1")
        v_val = padics.vp(val, p)
    else:
        _, v_val = padics.padic_eval_abs(P, value_poly, p, factor_index)
    v_lead = padics.vp(P.leading, p)
    r = Fraction(v_lead - v_val, P.degree)
    return RealBall.from_fraction(r, prec) * RealBall.log_of_int(p, prec)


def check_padic_one(alpha: AlgebraicNumber, p: int,
                    precision: int = DEFAULT_PRECISION) -> CheckReport:
    """|average of log|conj(alpha) - 1|_p| <= 40 h'^(1/3) log(4/h') + h,
    for alpha != 1 with h(alpha) <= 1."""
    if alpha.minpoly == IntPoly((-1, 1)):
        raise PreconditionError("alpha must not be 1")
    _require_height_at_most(alpha, Fraction(1), precision)
    inputs = f"alpha={alpha.minpoly.to_csv()};p={p}"

    def pair(prec):
        avg = _padic_average_at(alpha, IntPoly((-1, 1)), p, 0, prec)
        hp, cube = _hprime_pieces(alpha, prec)
        bound = 40 * cube * (RealBall.log_of_int(4, prec) - hp.log()) \
            + weil_height(alpha, prec)
        return avg.abs(), bound

    return certified_compare("padic_one", inputs, pair, precision)


def check_padic_upper(x, alpha: AlgebraicNumber, p: int,
                      precision: int = DEFAULT_PRECISION) -> CheckReport:
    """Average of log|conj(alpha) - x|_p <= h(alpha) for |x|_p <= 1.

    x may be a Fraction (evaluated exactly) or an algebraic number with a
    p-adic embedding."""
    P = alpha.minpoly
    d = P.degree
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        if padics.vp(x.denominator, p) > 0:
            raise PreconditionError("|x|_p <= 1 required")
        val = eval_exact(P, x)
        if val == 0:
            raise PreconditionError("x must not be a conjugate of alpha")
        v_val = padics.vp(val.numerator, p) - padics.vp(val.denominator, p)
        inputs = f"x={x};alpha={P.to_csv()};p={p}"
    else:
        if not isinstance(x.embedding, PadicEmbedding) or x.embedding.p != p:
            raise PreconditionError("x needs a p-adic embedding at p")
        if padics.padic_abs_from_factor(x.local_factor()) > 1:
            raise PreconditionError("|x|_p <= 1 required")
        _, v_val = padics.padic_eval_abs(P, x.minpoly, p, x.embedding.index)
        inputs = f"x={x.minpoly.to_csv()};alpha={P.to_csv()};p={p}"
    v_lead = padics.vp(P.leading, p)
    r = Fraction(v_lead - v_val, d)

    def pair(prec):
        avg = RealBall.from_fraction(r, prec) * RealBall.log_of_int(p, prec)
        return avg, weil_height(alpha, prec)

    return certified_compare("padic_upper", inputs, pair, precision)


def check_padic_rootunity(order: int, alpha: AlgebraicNumber, p: int,
                          precision: int = DEFAULT_PRECISION) -> CheckReport:
    """|average of log|conj(alpha) - zeta|_p| <=
    40 h'(alpha^n)^(1/3) log(4/h'(alpha^n)) + 2 h(alpha^n), zeta of order n;
    needs h(alpha) <= 1/n and alpha outside mu_n.  Ramified (p | n beyond the
    squarefree envelope) combinations raise RamifiedError."""
    n = order
    _require_height_at_most(alpha, Fraction(1, n), precision)
    k = is_root_of_unity(alpha.minpoly)
    if k is not None and n % k == 0:
        raise PreconditionError("alpha must lie outside mu_n")
    power_poly = minimal_poly_of_image(alpha, IntPoly.x_power(n))
    power = AlgebraicNumber(power_poly, ArchEmbedding(0), trusted=True)
    zeta_poly = cyclotomic(n)
    inputs = f"zeta_order={n};alpha={alpha.minpoly.to_csv()};p={p}"

    def pair(prec):
        if n == 1:
            avg = _padic_average_at(alpha, IntPoly((-1, 1)), p, 0, prec)
        else:
            avg = _padic_average_at(alpha, zeta_poly, p, 0, prec)
        hp, cube = _hprime_pieces(power, prec)
        bound = 40 * cube * (RealBall.log_of_int(4, prec) - hp.log()) \
            + weil_height(power, prec) * 2
        return avg.abs(), bound

    return certified_compare("padic_rootunity", inputs, pair, precision)


def check_zero_case(alpha: AlgebraicNumber, place: Place = INFINITY,
                    precision: int = DEFAULT_PRECISION) -> CheckReport:
    """|(1/d) log|a_0/a_d|_place| <= h(alpha) (the average against 0)."""
    P = alpha.minpoly
    if P.coeff(0) == 0:
        raise PreconditionError("alpha must be nonzero")
    d = P.degree
    a0, ad = abs(P.coeff(0)), abs(P.leading)
    inputs = f"alpha={P.to_csv()};v={place}"

    def pair(prec):
        if place.is_infinite:
            avg = (RealBall.log_of_int(a0, prec)
                   - RealBall.log_of_int(ad, prec)) / d
        else:
            r = Fraction(padics.vp(ad, place.p) - padics.vp(a0, place.p), d)
            avg = RealBall.from_fraction(r, prec) \
                * RealBall.log_of_int(place.p, prec)
        return avg.abs(), weil_height(alpha, prec)

    return certified_compare("zero_case", inputs, pair, precision)


# ---------------------------------------------------------------------------
# sequence replay
# ---------------------------------------------------------------------------


def _replay_envelopes(n: int, d: int, q: int, place: Place, h: RealBall,
                      prec: int) -> dict:
    """Envelope formulas recomputed along a multiplicative route (independent
    of the construction pipeline's log-space evaluation)."""
    H = h.exp()
    nsq = n * n
    sqrt_n = RealBall.from_int(n, prec).sqrt()
    c0 = RealBall.from_int(1, prec) / H.pow_int(d)
    c1 = c0.pow_int(d) / RealBall.from_int((1 << (d + 3)) * q, prec).pow_int(d)
    upper_num = (RealBall.from_int(q * place.c, prec) / c1).log() \
        + RealBall.log_of_int(n, prec) * d \
        + (sqrt_n * ((d * d + 2) * n) - nsq) * h
    upper = upper_num / (nsq + d)

    lower_num = -(h * (d * (nsq + d + d * n))) \
        - RealBall.log_of_int(2, prec) * (d * (nsq + d + 3)) \
        - RealBall.log_of_int(n * q, prec) * d
    lower = lower_num / nsq

    height_num = RealBall.log_of_int(8 * q, prec) \
        + RealBall.log_of_int(n, prec) + h * (d * n)
    return {"upper": upper, "lower": lower, "height": height_num / nsq}


def check_sequence(steps, kappa: AlgebraicNumber, place: Place = INFINITY,
                   precision: int = DEFAULT_PRECISION) -> List[CheckReport]:
    """Replay every envelope assertion of a constructed sequence from the raw
    (T, S, R, n, q) data, with all constants recomputed here."""
    from .heights import weil_height as _h

    reports: List[CheckReport] = []
    d = kappa.minpoly.degree
    for step in steps:
        n = step.n
        T = step.irreducible_factor
        R = step.assembled
        S = step.cofactor
        q = step.shift_prime
        tag = f"n={n};v={place}"
        ok_alg = (S * T == R) and T.degree >= n * n
        zero = RealBall.from_int(0, precision)
        one = RealBall.from_int(1, precision)
        reports.append(CheckReport(
            "seq_algebra", tag, zero, zero if ok_alg else -one,
            "pass" if ok_alg else "fail", zero, precision))

        def avg_pair(prec, which):
            h = _h(kappa, prec)
            env = _replay_envelopes(n, d, q, place, h, prec)
            if place.is_infinite:
                avg = _closed_form(T, kappa, prec)
            else:
                r = _padic_avg(T, kappa, place)
                avg = RealBall.from_fraction(r, prec) \
                    * RealBall.log_of_int(place.p, prec)
            if which == "upper":
                return avg, env["upper"]
            if which == "lower":
                return env["lower"], avg
            halpha = (mahler_measure(T, prec + 8).log() / T.degree)
            return halpha, env["height"]

        reports.append(certified_compare(
            "seq_avg_le_upper", tag,
            lambda prec: avg_pair(prec, "upper"), precision))
        reports.append(certified_compare(
            "seq_lower_le_avg", tag,
            lambda prec: avg_pair(prec, "lower"), precision))
        reports.append(certified_compare(
            "seq_height_envelope", tag,
            lambda prec: avg_pair(prec, "height"), precision))

        def l1_pair(prec):
            h = _h(kappa, prec)
            cap = RealBall.from_int((1 << (n * n + d + 3)) * n * q, prec) \
                * (h * (d * n)).exp()
            return RealBall.from_int(l1_norm(T), prec), cap

        reports.append(certified_compare("seq_l1_T", tag, l1_pair, precision))
    return reports


def _closed_form(T: IntPoly, kappa: AlgebraicNumber, prec: int) -> RealBall:
    w = prec
    while w <= PRECISION_CAP:
        val = ball_horner(T.coeffs, kappa.root_ball(w), w).abs()
        if not val.contains_zero():
            return (val.log() - RealBall.log_of_int(abs(T.leading), w)) / T.degree
        w *= 2
    raise PrecisionExhausted("T(kappa) ball kept touching zero")


def _padic_avg(T: IntPoly, kappa: AlgebraicNumber, place: Place) -> Fraction:
    _, v_val = padics.padic_eval_abs(T, kappa.minpoly, place.p,
                                     kappa.embedding.index)
    v_t = padics.vp(T.leading, place.p)
    return Fraction(v_t - v_val, T.degree)


# ---------------------------------------------------------------------------
# corpora
# ---------------------------------------------------------------------------


@dataclass
class CorpusConfig:
    seed: int = CORPUS_SEED
    cases: int = 500
    max_degree: int = 20
    coeff_bound: int = 100
    precision: int = DEFAULT_PRECISION
    jobs: int = 1


@dataclass
class SuiteSummary:
    name: str
    reports: List[dict]
    passes: int
    fails: int
    indeterminates: int
    escalated: int          # cases that needed precision above the base

    @property
    def ok(self) -> bool:
        return self.fails == 0 and self.indeterminates == 0


def _random_poly(rng: random.Random, max_degree: int, coeff_bound: int,
                 min_degree: int = 1) -> IntPoly:
    while True:
        deg = rng.randint(min_degree, max_degree)
        coeffs = [rng.randint(-coeff_bound, coeff_bound) for _ in range(deg)]
        lead = 0
        while lead == 0:
            lead = rng.randint(-coeff_bound, coeff_bound)
        poly = IntPoly(coeffs + [lead])
        if not poly.is_zero:
            return poly


def _random_algebraic(rng: random.Random, max_degree: int, coeff_bound: int
                      ) -> AlgebraicNumber:
    while True:
        poly = _random_poly(rng, max_degree, coeff_bound)
        facs = zfactor.factor_primitive(poly)
        if not facs:
            continue
        best = max((f for f, _ in facs), key=lambda f: f.degree)
        if best.degree >= 1 and best.coeff(0) != 0:
            return AlgebraicNumber(best, ArchEmbedding(0), trusted=True)


_LIOUVILLE_KAPPAS = (
    ("X-2", INFINITY), ("X^2+1", INFINITY), ("5X^2-6X+5", INFINITY),
    ("X-2", Place(13)), ("X^2+1", Place(13)), ("5X^2-6X+5", Place(13)),
)


def _suite_case(name: str, index: int, config: CorpusConfig) -> List[CheckReport]:
    rng = random.Random(config.seed * 1_000_003 + index)
    prec = config.precision
    if name == "sandwich":
        P = _random_poly(rng, config.max_degree, config.coeff_bound)
        return [check_sandwich(P, prec)]
    if name == "liouville":
        text, place = _LIOUVILLE_KAPPAS[index % len(_LIOUVILLE_KAPPAS)]
        kp = IntPoly.parse(text)
        if place.is_infinite:
            kappa = AlgebraicNumber(kp, ArchEmbedding(kp.degree - 1), trusted=True)
        else:
            kappa = AlgebraicNumber(kp, PadicEmbedding(place.p, 0), trusted=True)
        while True:
            P = _random_poly(rng, config.max_degree, config.coeff_bound)
            if not divides_in_q(kappa.minpoly, P):
                break
        return [check_liouville(P, kappa, place, prec)]
    if name == "image":
        alpha = _random_algebraic(rng, min(8, config.max_degree),
                                  config.coeff_bound)
        Q = _random_poly(rng, 3, 10, min_degree=0)
        if Q.is_zero:
            Q = IntPoly.one()
        return [check_height_image(alpha, Q, prec)]
    if name == "hprime":
        alpha = _random_algebraic(rng, min(8, config.max_degree),
                                  config.coeff_bound)
        n = rng.randint(1, 3)
        return check_hprime_rules(alpha, n, prec)
    if name == "zero":
        alpha = _random_algebraic(rng, config.max_degree, config.coeff_bound)
        place = (INFINITY, Place(2), Place(13))[index % 3]
        return [check_zero_case(alpha, place, prec)]
    raise ValueError(f"unknown randomized suite {name!r}")


_ENGINEERED_DEGREES = (16, 32, 64)


def _engineered_alpha(d: int) -> AlgebraicNumber:
    return AlgebraicNumber(IntPoly.x_power(d) - IntPoly.constant(2),
                           ArchEmbedding(0), trusted=True)


def _appendix_cases(name: str, precision: int) -> List[CheckReport]:
    out: List[CheckReport] = []
    if name == "arch-upper":
        units = [IntPoly((-1, 1)), IntPoly.parse("X^2+1"),
                 IntPoly.parse("5X^2-6X+5")]
        for d in _ENGINEERED_DEGREES:
            alpha = _engineered_alpha(d)
            for upoly in units:
                u = AlgebraicNumber(upoly, ArchEmbedding(upoly.degree - 1),
                                    trusted=True)
                out.append(check_arch_upper(u, alpha, precision))
        return out
    if name == "rootunity":
        for d in _ENGINEERED_DEGREES:
            alpha = _engineered_alpha(d)
            for order in (1, 4):
                out.append(check_rootunity_error(order, alpha, precision))
        return out
    if name == "padic":
        for d in _ENGINEERED_DEGREES:
            alpha = _engineered_alpha(d)
            for p in (2, 7, 13):
                out.append(check_padic_one(alpha, p, precision))
                out.append(check_padic_upper(Fraction(1), alpha, p, precision))
                out.append(check_padic_upper(Fraction(1, 3), alpha, p, precision)
                           if p != 3 else
                           check_padic_upper(Fraction(2), alpha, p, precision))
                out.append(check_padic_rootunity(1, alpha, p, precision))
                if p in (7, 13):
                    # order 4 is unramified at these primes (not at 2)
                    out.append(check_padic_rootunity(4, alpha, p, precision))
        return out
    raise ValueError(f"unknown engineered suite {name!r}")


RANDOMIZED_SUITES = ("sandwich", "liouville", "image", "hprime", "zero")
ENGINEERED_SUITES = ("arch-upper", "rootunity", "padic")
ALL_SUITES = RANDOMIZED_SUITES + ENGINEERED_SUITES


def _case_worker(args) -> List[dict]:
    name, index, cfg_tuple = args
    config = CorpusConfig(*cfg_tuple)
    reports = _suite_case(name, index, config)
    return [r.as_dict() for r in reports]


def run_suite(name: str, config: Optional[CorpusConfig] = None) -> SuiteSummary:
    """Run one verification suite; randomized suites honor config.cases and
    config.jobs, engineered suites run their fixed case list."""
    config = config or CorpusConfig()
    dicts: List[dict] = []
    if name in RANDOMIZED_SUITES:
        cfg_tuple = (config.seed, config.cases, config.max_degree,
                     config.coeff_bound, config.precision, 1)
        args = [(name, i, cfg_tuple) for i in range(config.cases)]
        if config.jobs > 1:
            from concurrent.futures import ProcessPoolExecutor
            with ProcessPoolExecutor(max_workers=config.jobs) as pool:
                for group in pool.map(_case_worker, args, chunksize=8):
                    dicts.extend(group)
        else:
            for a in args:
                dicts.extend(_case_worker(a))
    elif name in ENGINEERED_SUITES:
        dicts = [r.as_dict() for r in _appendix_cases(name, config.precision)]
    else:
        raise ValueError(f"unknown suite {name!r}")
    passes = sum(1 for r in dicts if r["verdict"] == "pass")
    fails = sum(1 for r in dicts if r["verdict"] == "fail")
    indet = sum(1 for r in dicts if r["verdict"] == "indeterminate")
    escal = sum(1 for r in dicts if r["precision_used"] > config.precision)
    return SuiteSummary(name=name, reports=dicts, passes=passes, fails=fails,
                        indeterminates=indet, escalated=escal)


def run_all_suites(config: Optional[CorpusConfig] = None) -> List[SuiteSummary]:
    return [run_suite(name, config) for name in ALL_SUITES]
