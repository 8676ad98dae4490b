import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from glienard.ratpoly import (
    InvalidExponent,
    Poly,
    QuotientRing,
    Sign,
    ZeroPolynomial,
    compare_radical,
    count_roots,
    real_roots,
    sign_at,
)


def P(*coeffs):
    return Poly.from_coeffs(coeffs)


def naive_eval(p, x):
    return sum(c * Fraction(x) ** e for e, c in p.terms.items())


class TestEval:
    def test_constant_term(self):
        assert P(-1, 1, 0, 0, 1).eval(0) == -1

    def test_coefficient_sum(self):
        assert P(-1, 1, 0, 0, 1).eval(1) == 1

    def test_hand_value(self):
        # -x^3 - x^5 at x = -1, against an independent term-by-term sum
        p = Poly.from_terms({3: -1, 5: -1})
        assert p.eval(-1) == 2
        assert p.eval(-1) == naive_eval(p, -1)

    @given(
        st.lists(st.integers(-9, 9), max_size=6),
        st.lists(st.integers(-9, 9), max_size=6),
        st.fractions(),
    )
    def test_additivity(self, a, b, x):
        pa, pb = Poly.from_coeffs(a), Poly.from_coeffs(b)
        assert (pa + pb).eval(x) == pa.eval(x) + pb.eval(x)


class TestAntiderivative:
    def test_power_rule(self):
        g = Poly.from_terms({3: -1})
        assert g.antiderivative() == Poly.from_terms({4: Fraction(-1, 4)})

    def test_linearity(self):
        g = Poly.from_terms({3: -1, 5: -1})
        assert g.antiderivative() == Poly.from_terms({4: Fraction(-1, 4), 6: Fraction(-1, 6)})

    def test_zero(self):
        assert Poly.zero().antiderivative().is_zero()

    @given(st.lists(st.fractions(max_denominator=20), max_size=7))
    def test_roundtrip(self, coeffs):
        p = Poly.from_coeffs(coeffs)
        assert p.antiderivative().derivative() == p


class TestRealRoots:
    def test_quartic_two_roots(self):
        # E(u) = u^4 + u - 1
        p = Poly.from_terms({4: 1, 1: 1, 0: -1})
        roots = real_roots(p)
        assert len(roots) == 2
        neg, pos = roots
        assert neg.compare(-2) == Sign.POSITIVE and neg.compare(-1) == Sign.NEGATIVE
        assert pos.compare(0) == Sign.POSITIVE and pos.compare(1) == Sign.NEGATIVE

    def test_multiplicity(self):
        # -y^3 - y^7 = -y^3 (1 + y^4): only root 0, multiplicity 3
        p = Poly.from_terms({3: -1, 7: -1})
        roots = real_roots(p)
        assert len(roots) == 1
        assert roots[0].is_rational() and roots[0].value() == 0
        assert roots[0].multiplicity == 3

    def test_shifted_quadratic(self):
        # H_0 = 1 - 4v + 2v^2, roots (2 +- sqrt 2)/2 in (0,1) and (1,2)
        p = P(1, -4, 2)
        roots = real_roots(p)
        assert len(roots) == 2
        assert roots[0].compare(0) == Sign.POSITIVE and roots[0].compare(1) == Sign.NEGATIVE
        assert roots[1].compare(1) == Sign.POSITIVE and roots[1].compare(2) == Sign.NEGATIVE

    def test_zero_poly_rejected(self):
        with pytest.raises(ZeroPolynomial):
            real_roots(Poly.zero())

    def test_refinement_keeps_sign_change(self):
        p = Poly.from_terms({4: 1, 1: 1, 0: -1})
        for r in real_roots(p):
            fine = r.refined(Fraction(1, 10**9))
            assert fine.hi - fine.lo <= Fraction(1, 10**9)
            assert p.eval(fine.lo) * p.eval(fine.hi) < 0

    def test_rational_roots(self):
        # (x - 1/2)^2 (x + 3)
        p = P(Fraction(3, 4), Fraction(-11, 4), 2, 1)
        roots = real_roots(p)
        assert [r.multiplicity for r in roots] == [1, 2]
        assert roots[1].compare(Fraction(1, 2)) == Sign.ZERO
        # root zero is always recognized exactly
        q = p * Poly.x(2)
        zr = [r for r in real_roots(q) if r.compare(0) == Sign.ZERO]
        assert len(zr) == 1 and zr[0].is_rational() and zr[0].multiplicity == 2

    def test_domain_restriction(self):
        p = P(-1, 0, 1)  # x^2 - 1
        assert len(real_roots(p, 0, 2)) == 1
        assert len(real_roots(p, -2, 2)) == 2
        assert len(real_roots(p, -1, 1)) == 2  # closed endpoints included

    def test_random_against_counts(self):
        rng = random.Random(7)
        for _ in range(40):
            coeffs = [rng.randint(-5, 5) for _ in range(rng.randint(2, 7))]
            p = Poly.from_coeffs(coeffs)
            if p.is_zero() or p.degree() == 0:
                continue
            roots = real_roots(p)
            assert len(roots) == count_roots(p)
            for r in roots:
                assert sign_at(p, r) == Sign.ZERO


class TestSignAt:
    def test_sign_of_other_poly(self):
        p = P(-2, 0, 1)  # x^2 - 2, roots +-sqrt2
        roots = real_roots(p)
        f = P(-1, 1)  # x - 1
        assert sign_at(f, roots[0]) == Sign.NEGATIVE
        assert sign_at(f, roots[1]) == Sign.POSITIVE
        # x^2 - 2 itself vanishes
        assert sign_at(p, roots[1]) == Sign.ZERO
        # shared factor detection: (x^2-2)(x+5)
        assert sign_at(p * P(5, 1), roots[0]) == Sign.ZERO


class TestCompareRadical:
    def test_unit_base(self):
        assert compare_radical(2, 1, 4, 3) == Sign.POSITIVE

    def test_c_star_cross_power(self):
        # decide c_n vs -c_* for l=3, b_m=1, c_n=-2: compare |c_n| with
        # c_* = 3*(1/4)^{4/3}; cross-powered: 2^3*4^4 = 2048 > 3^3 = 27
        lhs = Fraction(2, 3)  # |c_n|/l
        base = Fraction(1, 4)  # |b_m/(l+1)|
        assert compare_radical(lhs, base, 4, 3) == Sign.POSITIVE
        assert Fraction(2) ** 3 * 4**4 > 3**3

    def test_exact_boundary_zero(self):
        # p=1, q=2, b_q=-2, c_r=-2: c-hat = 2*|b_q/2|^2 = 2, so |c_r| = c-hat
        lhs = Fraction(2, 2)
        base = Fraction(2, 2)
        assert compare_radical(lhs, base, 2, 1) == Sign.ZERO

    def test_nonpositive_lhs(self):
        assert compare_radical(0, 5, 3, 2) == Sign.NEGATIVE
        assert compare_radical(-3, 5, 3, 2) == Sign.NEGATIVE

    def test_invalid_exponent(self):
        with pytest.raises(InvalidExponent):
            compare_radical(1, 2, 3, 0)

    def test_against_high_precision(self):
        import mpmath

        mpmath.mp.prec = 200
        rng = random.Random(123)
        for _ in range(1000):
            lhs = Fraction(rng.randint(-20, 40), rng.randint(1, 20))
            base = Fraction(rng.randint(1, 30), rng.randint(1, 20))
            num = rng.randint(1, 6)
            den = rng.randint(1, 5)
            got = compare_radical(lhs, base, num, den)
            ref = mpmath.mpf(lhs.numerator) / lhs.denominator - (
                mpmath.mpf(base.numerator) / base.denominator
            ) ** (mpmath.mpf(num) / den)
            if abs(ref) > mpmath.mpf(2) ** -150:
                assert got == (Sign.POSITIVE if ref > 0 else Sign.NEGATIVE)
            else:
                assert got == Sign.ZERO


class TestQuotientRing:
    def test_inverse(self):
        g = P(-2, 0, 1)  # y^2 - 2
        ring = QuotientRing(g)
        a = P(1, 1)  # y + 1
        inv = ring.inv(a)
        assert ring.mul(a, inv) == Poly.one()

    def test_non_unit_rejected(self):
        g = P(0, 1) * P(-1, 1)  # y(y-1), reducible
        ring = QuotientRing(g)
        with pytest.raises(ZeroDivisionError):
            ring.inv(P(0, 1))
