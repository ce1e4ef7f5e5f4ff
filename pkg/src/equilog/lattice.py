"""Constructive small-vector solvers for linear-forms problems.

Archimedean: given an invertible real matrix whose rows are scaled by target
bounds with matching determinant, find a nonzero integer vector mapped into
the box (strict in all but the last coordinate).  p-adic: find a short
integer vector on which a set of linear forms vanishes modulo p^f.

Both solvers share the same engine: an exact integer LLL reduction (the
all-integer variant, no floating point in the reduction itself), followed by
depth-first enumeration in Schnorr-Euchner zig-zag order whose pruning bounds
are computed with outward-rounded ball arithmetic, so no lattice point inside
the search radius is ever missed.  Every returned vector is re-verified
against the original problem data before being accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

from .errors import BudgetExhausted, CertificationFailed, PreconditionError
from .numeric import RealBall

DEFAULT_BUDGET = 10_000_000


# ---------------------------------------------------------------------------
# exact integer LLL (delta = 0.99)
# ---------------------------------------------------------------------------


def lll_reduce(columns: Sequence[Sequence[int]], delta=(99, 100)):
    """All-integer LLL on the column lattice.

    Returns (reduced columns, transform U) with reduced = original * U and U
    unimodular.  Gram data is kept as exact integers, so the reduction is
    deterministic and never wrong, only (at worst) slow.
    """
    b = [list(col) for col in columns]
    n = len(b)
    if n == 0:
        return [], []
    u = [[1 if i == j else 0 for i in range(n)] for j in range(n)]  # U columns
    dn, dd = delta

    d = [1] * (n + 1)  # d[i] = Gram determinant of first i vectors
    lam = [[0] * n for _ in range(n)]

    def dot(x, y):
        return sum(a * c for a, c in zip(x, y))

    for i in range(n):
        for j in range(i + 1):
            s = dot(b[i], b[j])
            for k in range(j):
                s = (d[k + 1] * s - lam[i][k] * lam[j][k]) // d[k]
            if j < i:
                lam[i][j] = s
            else:
                d[i + 1] = s
                if s == 0:
                    raise PreconditionError("basis is linearly dependent")

    def red(k, l):
        if abs(2 * lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            for t in range(len(b[k])):
                b[k][t] -= q * b[l][t]
            for t in range(n):
                u[k][t] -= q * u[l][t]
            lam[k][l] -= q * d[l + 1]
            for t in range(l):
                lam[k][t] -= q * lam[l][t]

    def swap(k):
        b[k], b[k - 1] = b[k - 1], b[k]
        u[k], u[k - 1] = u[k - 1], u[k]
        for t in range(k - 1):
            lam[k][t], lam[k - 1][t] = lam[k - 1][t], lam[k][t]
        lam_ = lam[k][k - 1]
        bnew = (d[k - 1] * d[k + 1] + lam_ * lam_) // d[k]
        for i in range(k + 1, n):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lam_ * t) // d[k]
            lam[i][k - 1] = (bnew * t + lam_ * lam[i][k]) // d[k + 1]
        d[k] = bnew

    k = 1
    while k < n:
        red(k, k - 1)
        lhs = dd * d[k + 1] * d[k - 1]
        rhs = dn * d[k] * d[k] - dd * lam[k][k - 1] * lam[k][k - 1]
        if lhs < rhs:
            swap(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return [list(col) for col in b], [list(col) for col in u]


# ---------------------------------------------------------------------------
# kernel of linear forms modulo N
# ---------------------------------------------------------------------------


def kernel_mod(forms: Sequence[Sequence[int]], modulus: int) -> List[List[int]]:
    """Basis of {a in Z^n : forms . a = 0 mod modulus} (full rank n).

    Column elimination with transform on the stacked matrix
    [forms | modulus * I]; the columns mapping to zero project onto a kernel
    basis of the first n coordinates.
    """
    d = len(forms)
    n = len(forms[0]) if d else 0
    total = n + d
    cols = [[forms[r][j] for r in range(d)] for j in range(n)]
    cols += [[modulus if r == i else 0 for r in range(d)] for i in range(d)]
    u = [[1 if i == j else 0 for i in range(total)] for j in range(total)]

    fixed = 0
    for r in range(d):
        while True:
            nz = [j for j in range(fixed, total) if cols[j][r] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda j: abs(cols[j][r]))
            j0 = nz[0]
            if cols[j0][r] < 0:
                cols[j0] = [-x for x in cols[j0]]
                u[j0] = [-x for x in u[j0]]
            piv = cols[j0][r]
            for j1 in nz[1:]:
                q = (2 * cols[j1][r] + piv) // (2 * piv)  # nearest quotient
                if q:
                    for t in range(d):
                        cols[j1][t] -= q * cols[j0][t]
                    for t in range(total):
                        u[j1][t] -= q * u[j0][t]
        nz = [j for j in range(fixed, total) if cols[j][r] != 0]
        if nz:
            j = nz[0]
            cols[fixed], cols[j] = cols[j], cols[fixed]
            u[fixed], u[j] = u[j], u[fixed]
            fixed += 1
    kernel = [u[j][:n] for j in range(fixed, total)]
    assert len(kernel) == n, "kernel rank mismatch"
    return kernel


def integer_det(matrix: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    a = [list(row) for row in matrix]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


# ---------------------------------------------------------------------------
# rigorous enumeration
# ---------------------------------------------------------------------------


class _Budget:
    __slots__ = ("left",)

    def __init__(self, total):
        self.left = total

    def spend(self, k=1):
        self.left -= k
        if self.left < 0:
            raise BudgetExhausted("enumeration node budget exhausted")


def _ball_gso(columns, prec):
    """Gram-Schmidt data as balls: (mu lower-triangular, squared norms)."""
    m = len(columns)
    bstar: list = []
    mu = [[None] * m for _ in range(m)]
    norms = []
    for i in range(m):
        vec = [RealBall.from_int(c, prec) for c in columns[i]]
        for j in range(i):
            dot = None
            for a, c in zip(columns[i], bstar[j]):
                term = c * a
                dot = term if dot is None else dot + term
            mij = dot / norms[j]
            mu[i][j] = mij
            vec = [v - mij * w for v, w in zip(vec, bstar[j])]
        bstar.append(vec)
        nrm = None
        for v in vec:
            term = v.sqr()
            nrm = term if nrm is None else nrm + term
        if nrm.contains_zero():
            raise CertificationFailed("Gram-Schmidt norm ball touches zero")
        norms.append(nrm)
        mu[i][i] = RealBall.from_int(1, prec)
    return mu, norms


def _mpfr_ceil_int(x) -> int:
    return int(gmpy2.ceil(x))


def _mpfr_floor_int(x) -> int:
    return int(gmpy2.floor(x))


def enumerate_lattice(columns, radius_sq: RealBall, budget: _Budget,
                      on_leaf: Callable[[List[int], List[int]], Optional[object]],
                      prec: int):
    """DFS over lattice points with |point|^2 <= radius_sq (outer bound).

    Schnorr-Euchner zig-zag per level; on_leaf receives (coefficients, point)
    and the first non-None return value wins.  Pruning bounds come from
    outward ball arithmetic, so no point inside the certified radius is ever
    skipped; a zig-zag direction dies only once its candidates are certifiably
    past the center (monotone regime) and past the radius.
    """
    m = len(columns)
    mu, norms = _ball_gso(columns, prec)
    coeffs = [0] * m

    def descend(level, rho: RealBall):
        if level < 0:
            point = [0] * len(columns[0])
            for j, c in enumerate(coeffs):
                if c:
                    for t, entry in enumerate(columns[j]):
                        point[t] += c * entry
            if all(x == 0 for x in point):
                return None
            return on_leaf(list(coeffs), point)
        center = RealBall.from_int(0, prec)
        for j in range(level + 1, m):
            if coeffs[j]:
                center = center - mu[j][level] * coeffs[j]
        avail = (radius_sq - rho)
        if avail.hi < 0:
            return None
        spread = (avail.clamp_nonnegative() / norms[level]).sqrt()
        lo = _mpfr_ceil_int(_DOWN(prec).sub(center.lo, spread.hi))
        hi = _mpfr_floor_int(_UP(prec).add(center.hi, spread.hi))
        if lo > hi:
            return None
        start = min(max(_mpfr_floor_int(center.mid), lo), hi)

        def try_candidate(ci):
            """Returns (result, certifiably_past_radius)."""
            budget.spend()
            diff = RealBall.from_int(ci, prec) - center
            rho2 = rho + norms[level] * diff.sqr()
            if rho2.lo > radius_sq.hi:
                return None, True
            coeffs[level] = ci
            got = descend(level - 1, rho2)
            coeffs[level] = 0
            return got, False

        up, down = start, start - 1
        up_alive, down_alive = up <= hi, down >= lo
        while up_alive or down_alive:
            if up_alive:
                got, past = try_candidate(up)
                if got is not None:
                    return got
                # monotone only once the candidate is right of the center
                # (int-mpfr comparisons are exact)
                if past and up >= center.hi:
                    up_alive = False
                else:
                    up += 1
                    up_alive = up <= hi
            if down_alive:
                got, past = try_candidate(down)
                if got is not None:
                    return got
                if past and down <= center.lo:
                    down_alive = False
                else:
                    down -= 1
                    down_alive = down >= lo
        return None

    return descend(m - 1, RealBall.from_int(0, prec))


_DIR_CTX: dict = {}


def _DOWN(prec):
    key = (prec, "d")
    if key not in _DIR_CTX:
        _DIR_CTX[key] = gmpy2.context(precision=prec, round=gmpy2.RoundDown)
    return _DIR_CTX[key]


def _UP(prec):
    key = (prec, "u")
    if key not in _DIR_CTX:
        _DIR_CTX[key] = gmpy2.context(precision=prec, round=gmpy2.RoundUp)
    return _DIR_CTX[key]


# ---------------------------------------------------------------------------
# archimedean linear forms
# ---------------------------------------------------------------------------


@dataclass
class ArchLinearFormsProblem:
    """Square ball matrix B with positive bounds, |det B| = prod(bounds)."""

    matrix: List[List[RealBall]]
    bounds: List[RealBall]

    @property
    def dimension(self) -> int:
        return len(self.bounds)

    def validate(self):
        m = self.dimension
        if len(self.matrix) != m or any(len(r) != m for r in self.matrix):
            raise PreconditionError("matrix shape mismatch")
        if any(not lam.is_positive() for lam in self.bounds):
            raise PreconditionError("bounds must be positive")
        det = ball_det(self.matrix)
        prod = None
        for lam in self.bounds:
            prod = lam if prod is None else prod * lam
        if not det.abs().overlaps(prod):
            raise PreconditionError(
                "determinant does not match the product of the bounds"
            )


def ball_det(matrix: List[List[RealBall]]) -> RealBall:
    """Determinant by ball Gaussian elimination with midpoint pivoting."""
    a = [row[:] for row in matrix]
    m = len(a)
    prec = max(b.prec for row in a for b in row)
    det = RealBall.from_int(1, prec)
    for k in range(m):
        piv = max(range(k, m), key=lambda i: abs(a[i][k].mid))
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        pivot = a[k][k]
        if pivot.contains_zero():
            raise CertificationFailed("pivot ball contains zero")
        det = det * pivot
        for i in range(k + 1, m):
            factor = a[i][k] / pivot
            a[i] = [a[i][j] - factor * a[k][j] for j in range(m)]
    return det


def _certify_arch(problem: ArchLinearFormsProblem, a: List[int]):
    """True iff B a certifiably satisfies the mixed strict/non-strict box."""
    m = problem.dimension
    for i in range(m):
        acc = None
        for j, aj in enumerate(a):
            if aj:
                term = problem.matrix[i][j] * aj
                acc = term if acc is None else acc + term
        mag = acc.abs() if acc is not None \
            else RealBall.from_int(0, problem.bounds[i].prec)
        lam = problem.bounds[i]
        if i < m - 1:
            if not mag.hi < lam.lo:
                return False
        else:
            if not mag.hi <= lam.lo:
                return False
    return True


def solve_arch(problem: ArchLinearFormsProblem, budget: int = DEFAULT_BUDGET,
               reject: Optional[Callable[[List[int]], bool]] = None) -> List[int]:
    """Nonzero integer a with |(Ba)_i| < bound_i (i < m) and <= for i = m.

    Existence is guaranteed by the determinant hypothesis; a failure here is
    a resource problem (budget) or a precision problem (certification), never
    a mathematical one.
    """
    problem.validate()
    m = problem.dimension
    tracker = _Budget(budget)
    last_error: Optional[Exception] = None
    for shift in (128, 256, 512):
        scaled_mid = []
        for i in range(m):
            lam = problem.bounds[i]
            row = [_scaled_int((problem.matrix[i][j] / lam).mid, shift)
                   for j in range(m)]
            scaled_mid.append(row)
        columns = [[scaled_mid[i][j] for i in range(m)] for j in range(m)]
        try:
            reduced, transform = lll_reduce(columns)
        except PreconditionError as exc:
            last_error = exc
            continue
        prec = max(64, max(abs(x).bit_length() for col in reduced for x in col) + 64)

        # cheap pre-pass: the reduced basis vectors themselves
        for k in range(m):
            cand = [transform[k][t] for t in range(m)]
            for vec in (cand, [-x for x in cand]):
                if any(vec) and (reject is None or not reject(vec)):
                    if _certify_arch(problem, vec):
                        return vec

        slack_num, slack_den = 65537, 65536  # 1 + 2^-16 outer slack
        r = RealBall.from_int(2, prec).pow_int(shift) * slack_num
        radius_sq = (r * r) * m / (slack_den * slack_den)

        def leaf(coeffs, point):
            a_vec = [0] * m
            for j, c in enumerate(coeffs):
                if c:
                    for t in range(m):
                        a_vec[t] += c * transform[j][t]
            if not any(a_vec):
                return None
            if reject is not None and reject(a_vec):
                return None
            if _certify_arch(problem, a_vec):
                return a_vec
            return None

        try:
            got = enumerate_lattice(reduced, radius_sq, tracker, leaf, prec)
        except CertificationFailed as exc:
            last_error = exc
            continue
        if got is not None:
            return got
    if isinstance(last_error, Exception) and not isinstance(last_error, BudgetExhausted):
        raise CertificationFailed(
            f"no certifiable vector found; raise precision (last: {last_error})"
        )
    raise CertificationFailed("no certifiable vector found; raise precision")


def _scaled_int(x, shift: int) -> int:
    """round(x * 2^shift) for an mpfr x, exactly."""
    import gmpy2

    with gmpy2.context(precision=max(64, x.precision + shift + 8)):
        y = gmpy2.mul_2exp(x, shift)
        f = gmpy2.rint(y)
    return int(f)


# ---------------------------------------------------------------------------
# p-adic congruence forms
# ---------------------------------------------------------------------------


@dataclass
class PadicLinearFormsProblem:
    """d rows of integer forms to vanish mod p^f on a vector of sup norm <= bound."""

    p: int
    f: int
    forms: List[List[int]]
    bound: int

    def __post_init__(self):
        if self.f < 0:
            raise PreconditionError("f must be >= 0")
        if self.bound < 1:
            raise PreconditionError("bound must be >= 1")

    @property
    def dimension(self) -> int:
        return len(self.forms[0]) if self.forms else 0

    @property
    def modulus(self) -> int:
        return self.p**self.f


@dataclass(frozen=True)
class PadicSolution:
    vector: tuple
    bound_used: int
    widened: bool
    kernel_det: int


def solve_padic(problem: PadicLinearFormsProblem, budget: int = DEFAULT_BUDGET,
                reject: Optional[Callable[[List[int]], bool]] = None
                ) -> PadicSolution:
    """Nonzero a with sup norm <= bound and all forms = 0 mod p^f.

    When the bound was floored below the existence threshold
    bound^(n) >= p^(d f), the solver widens the bound by one factor of p and
    records the widening.
    """
    n = problem.dimension
    d = len(problem.forms)
    if n == 0:
        raise PreconditionError("empty problem")
    modulus = problem.modulus
    if modulus == 1:
        kernel = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    else:
        kernel = kernel_mod(problem.forms, modulus)
    det = abs(integer_det(kernel))
    if modulus > 1 and (det == 0 or pow(problem.p, d * problem.f) % det != 0):
        raise CertificationFailed("kernel determinant must divide p^(d f)")
    tracker = _Budget(budget)
    guaranteed = problem.bound**n >= problem.p ** (d * problem.f)

    for widened, lam in ((False, problem.bound), (True, problem.bound * problem.p)):
        if widened and guaranteed:
            break
        reduced, _ = lll_reduce(kernel)
        prec = max(64, max(abs(x).bit_length() for col in reduced for x in col) + 64)

        def leaf(coeffs, point, lam=lam):
            if max(abs(x) for x in point) > lam:
                return None
            if reject is not None and reject(point):
                return None
            for row in problem.forms:
                if sum(r * x for r, x in zip(row, point)) % modulus:
                    return None
            return point

        # pre-pass on the reduced basis vectors
        for col in reduced:
            for vec in (col, [-x for x in col]):
                got = leaf([0], vec)
                if got is not None and any(vec):
                    return PadicSolution(tuple(got), lam, widened, det)

        radius_sq = RealBall.from_int(n, prec) * lam * lam
        got = enumerate_lattice(reduced, radius_sq, tracker, leaf, prec)
        if got is not None:
            return PadicSolution(tuple(got), lam, widened, det)
    raise BudgetExhausted(
        "no solution found within budget"
        + ("" if guaranteed else " (bound was below the existence threshold)")
    )
