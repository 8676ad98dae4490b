import random
from fractions import Fraction

import pytest

from glienard.ratpoly import Poly, Sign
from glienard.system import (
    SYMMETRY_GROUP,
    EmptyPolynomial,
    GeneralizedLienardSystem,
    UndefinedThreshold,
    ZeroBoundaryCoefficient,
    build_system,
    c_hat_comparator,
    c_star_comparator,
    c_star_upper_comparator,
    normalize_pair,
    normalize_time,
    symmetry_search,
    thresholds,
)


def example_system(tag):
    # the five realizations of the global portraits, x' = phi(y) - F(x), y' = -g(x)
    data = {
        "a": ({3: -1}, {4: 1}, {3: -1}),
        "b": ({5: -1}, {4: 1}, {3: -1}),
        "c": ({3: -1}, {10: 1}, {11: -1}),
        "d": ({3: -1, 7: -1}, {4: 1}, {3: -1, 5: -1}),
        "e": ({3: -1, 5: -1}, {4: 1}, {3: -1, 5: -1}),
    }
    return build_system(*data[tag])


class TestBuildSystem:
    def test_example_a_windows(self):
        s = example_system("a")
        assert (s.p, s.ell, s.q, s.m, s.r, s.n) == (3, 3, 4, 4, 3, 3)

    def test_example_d_windows(self):
        s = example_system("d")
        assert (s.p, s.ell, s.q, s.m, s.r, s.n) == (3, 7, 4, 4, 3, 5)

    def test_zero_boundary_rejected(self):
        with pytest.raises(ZeroBoundaryCoefficient) as e:
            build_system({3: 0, 5: 1}, {2: 1}, {1: 1})
        assert "a_3" in str(e.value)

    def test_empty_rejected(self):
        with pytest.raises(EmptyPolynomial):
            build_system({}, {2: 1}, {1: 1})

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            build_system({3: -1.0}, {2: 1}, {1: 1})

    def test_string_rationals(self):
        s = build_system({3: "-1/2"}, {2: "3"}, {1: "1/7"})
        assert s.a(3) == Fraction(-1, 2) and s.c(1) == Fraction(1, 7)


class TestNormalizeTime:
    def test_fixed_point(self):
        s = example_system("a")
        ns, rec = normalize_time(s)
        assert ns == s and rec.scale == 1 and not rec.reversed

    def test_positive_ap(self):
        s = build_system({3: 2}, {4: 1}, {3: -1})
        ns, rec = normalize_time(s)
        assert ns.a(3) == -1 and rec.reversed and rec.scale == Fraction(-1, 2)
        assert ns.b(4) == Fraction(-1, 2) and ns.c(3) == Fraction(1, 2)

    def test_negative_ap(self):
        s = build_system({3: -3}, {4: 1}, {3: -1})
        ns, rec = normalize_time(s)
        assert ns.a(3) == -1 and not rec.reversed and rec.scale == Fraction(1, 3)

    def test_idempotent(self):
        s = build_system({3: 2, 5: -4}, {4: 1}, {3: -1})
        once, _ = normalize_time(s)
        twice, rec = normalize_time(once)
        assert twice == once and rec.scale == 1

    def test_ell_anchor(self):
        s = build_system({3: -1, 5: 2}, {4: 1}, {3: -1})
        ns, rec = normalize_time(s, anchor="ell")
        assert ns.a(5) == -1 and rec.reversed


class TestNormalizePair:
    def test_already_normalized(self):
        rec = normalize_pair(example_system("d"))
        assert rec.alpha == 1.0 and rec.sign_pair == (-1, -1)

    def test_opposite_signs_flag(self):
        s = build_system({3: -1, 5: 1}, {4: 1}, {3: -1})
        rec = normalize_pair(s)
        assert rec.sign_pair == (-1, 1)

    def test_rescale_numeric(self):
        s = build_system({3: -2, 7: -4}, {4: 1}, {3: -1})
        rec = normalize_pair(s)
        assert abs(rec.alpha - 0.5**0.25) < 1e-15
        assert abs(rec.phi[3] + 1.0) < 1e-12
        assert abs(rec.phi[7] + 1.0) < 1e-12
        assert rec.sign_pair == (-1, -1)


def brute_transform(sys, t):
    """Independent derivation: substitute x = sx*X, y = sy*Y, t = st*T and
    read the new phi, F, g off the composed polynomials."""
    sx = -1 if t.flip_x else 1
    sy = -1 if t.flip_y else 1
    st = -1 if t.reverse_time else 1
    phi = sys.phi if sy == 1 else sys.phi.reflect()
    F = sys.F if sx == 1 else sys.F.reflect()
    g = sys.g if sx == 1 else sys.g.reflect()
    new_phi = phi.scale(sx * st)
    new_F = F.scale(sx * st)
    new_g = g.scale(sy * st)
    return GeneralizedLienardSystem(new_phi, new_F, new_g)


class TestSymmetry:
    def test_group_involutive(self):
        s = example_system("e")
        for t in SYMMETRY_GROUP:
            assert t.apply(t.apply(s)) == s

    def test_against_brute_substitution(self):
        rng = random.Random(5)
        for _ in range(30):
            phi = {e: rng.choice([-2, -1, 1, 3]) for e in rng.sample(range(1, 8), 2)}
            F = {e: rng.choice([-2, -1, 1, 3]) for e in rng.sample(range(1, 8), 2)}
            g = {e: rng.choice([-2, -1, 1, 3]) for e in rng.sample(range(1, 8), 2)}
            s = build_system(phi, F, g)
            for t in SYMMETRY_GROUP:
                assert t.apply(s) == brute_transform(s, t)

    def test_parities_invariant(self):
        s = example_system("d")
        for t in SYMMETRY_GROUP:
            img = t.apply(s)
            assert (img.p, img.ell, img.q, img.m, img.r, img.n) == (
                s.p, s.ell, s.q, s.m, s.r, s.n)

    def test_search_identity_first(self):
        s = example_system("a")
        found = symmetry_search(s, lambda u: u.a(u.p) < 0)
        assert found is not None and found[0].is_identity()

    def test_search_unsatisfiable(self):
        s = example_system("a")
        assert symmetry_search(s, lambda u: u.m % 2 == 1) is None

    def test_search_finds_flip(self):
        s = build_system({3: 1}, {4: 1}, {3: -1})  # a_p = +1
        found = symmetry_search(s, lambda u: u.a(u.p) < 0 and u.b(u.q) > 0)
        assert found is not None
        t, img = found
        assert img.a(3) < 0 and img.b(4) > 0


class TestThresholds:
    def test_c_hat_integral_exponent(self):
        s = build_system({1: -1}, {2: -2}, {1: 1})
        cmp_ = c_hat_comparator(s)
        assert cmp_.coefficient == 2 and cmp_.base == 1
        # c_hat = 2, and exponent (p+1)/p = 2 is integral here
        assert cmp_.compare(2) == Sign.ZERO
        assert cmp_.compare(Fraction(201, 100)) == Sign.POSITIVE

    def test_c_star_value(self):
        s = build_system({3: -1}, {3: 1}, {3: 1})
        cmp_ = c_star_comparator(s)
        assert abs(cmp_.float() - 3 * 0.25 ** (4 / 3)) < 1e-12
        assert cmp_.compare(Fraction(47247, 100000)) == Sign.NEGATIVE
        assert cmp_.compare(Fraction(47248, 100000)) == Sign.POSITIVE

    def test_c_star_upper_undefined(self):
        s = build_system({3: -1}, {3: 1}, {3: 1})
        with pytest.raises(UndefinedThreshold):
            c_star_upper_comparator(s)
        assert thresholds(s).c_star_upper is None

    def test_c_star_upper_equality_case(self):
        # ell=3, m=6, n=7 (k=2): coefficient (m-l)(n+1)/((n-m)(l+1)) = 6 = m
        s = build_system({1: -1, 3: -1}, {6: 1}, {7: -1})
        cmp_ = c_star_upper_comparator(s)
        assert cmp_.coefficient == 6
        # c^* = 6 |b(n-m)/(n-l)|^{4/3} = 6 (1/4)^{4/3}
        assert abs(cmp_.float() - 6 * 0.25 ** (4 / 3)) < 1e-12

    def test_against_200bit(self):
        import mpmath

        rng = random.Random(11)
        checked = 0
        while checked < 1000:
            p = rng.randint(1, 6)
            q = rng.randint(1, 6)
            bq = Fraction(rng.randint(-30, 30), rng.randint(1, 9))
            if bq == 0:
                continue
            s = build_system({p: -1}, {q: bq}, {1: 1})
            cmp_ = c_hat_comparator(s)
            with mpmath.workprec(200):
                ref = q * abs(mpmath.mpf(bq.numerator) / bq.denominator / (p + 1)) ** (
                    mpmath.mpf(p + 1) / p
                )
                mine = mpmath.mpf(cmp_.coefficient.numerator) / cmp_.coefficient.denominator * (
                    mpmath.mpf(cmp_.base.numerator) / cmp_.base.denominator
                ) ** (mpmath.mpf(cmp_.num) / cmp_.den)
                assert abs(mine - ref) <= abs(ref) * mpmath.mpf(10) ** -30
            checked += 1
