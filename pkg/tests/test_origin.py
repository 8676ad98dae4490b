import random
from fractions import Fraction

import pytest

from glienard.blowup import classes_equal
from glienard.figures import FIG1_CLASS
from glienard.origin import (
    NotMonodromic,
    OrderTooSmall,
    center_test,
    cherkas_branch,
    classify_origin,
    monodromy_origin,
    verify_origin_against_oracle,
)
from glienard.ratpoly import Poly
from glienard.system import SYMMETRY_GROUP, build_system

MAGS = [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3), Fraction(1, 3), Fraction(5, 2)]


def S(phi, F, g):
    return build_system(phi, F, g)


def tagged(oc):
    return "fig1-hi" if oc.portrait in ("fig1-h", "fig1-i") else oc.portrait


class TestTableRows:
    def test_paper_examples(self):
        # realizations (a) and (d): odd p, r, c_r < 0, case I: monodromic, M1
        oc = classify_origin(S({3: -1}, {4: 1}, {3: -1}))
        assert tagged(oc) == "fig1-hi" and oc.monodromy == "M1" and oc.case_label == "I"
        oc = classify_origin(S({3: -1, 7: -1}, {4: 1}, {3: -1, 5: -1}))
        assert tagged(oc) == "fig1-hi" and oc.monodromy == "M1"

    def test_case_I_rows(self):
        assert tagged(classify_origin(S({3: -1}, {4: 1}, {3: 1}))) == "fig1-a"
        assert tagged(classify_origin(S({3: -1}, {4: 1}, {2: 1}))) == "fig1-d"
        assert tagged(classify_origin(S({2: -1}, {4: 1}, {3: -1}))) == "fig1-d"

    def test_case_II_odd_p(self):
        # p=1, q=2, r=3: gap = 0; c-hat = 2|b/2|^2
        oc = classify_origin(S({1: -1}, {2: -2}, {3: -3}))
        assert tagged(oc) == "fig1-hi" and oc.monodromy == "M2"  # c=-3 < -chat=-2
        oc = classify_origin(S({1: -1}, {2: -2}, {3: -1}))
        assert tagged(oc) == "fig1-b" and oc.monodromy is None  # -2 < -1 < 0, even q
        oc = classify_origin(S({1: -1}, {1: -2}, {1: -1}))
        assert tagged(oc) == "fig1-g"  # odd q: chat = |b|^2/4 = 1, c in [-1, 0)

    def test_case_II_boundary_exact(self):
        # p=q=r=3, b=-4: chat = 3|b/4|^(4/3) = 3 exactly
        at = classify_origin(S({3: -1}, {3: -4}, {3: -3}))
        below = classify_origin(S({3: -1}, {3: -4}, {3: Fraction(-3) - Fraction(1, 10**9)}))
        above = classify_origin(S({3: -1}, {3: -4}, {3: Fraction(-3) + Fraction(1, 10**9)}))
        assert tagged(at) == "fig1-g" and at.monodromy is None
        assert tagged(below) == "fig1-hi" and below.monodromy == "M2"
        assert tagged(above) == "fig1-g"

    def test_case_II_even_p(self):
        # p=2, q=4, r=5, b=-3: chat = 4
        rows = {5: "fig1-d", 4: "fig1-e", 2: "fig1-e", -2: "fig1-e", -4: "fig1-e", -5: "fig1-d"}
        for c, tag in rows.items():
            assert tagged(classify_origin(S({2: -1}, {4: -3}, {5: c}))) == tag
        assert tagged(classify_origin(S({2: -1}, {4: 3}, {5: 2}))) == "fig1-d"  # b > 0
        # even r variant: p=2, q=2, r=2
        assert tagged(classify_origin(S({2: -1}, {2: -1}, {2: Fraction(1, 10)}))) == "fig1-c"

    def test_case_III_rows(self):
        assert tagged(classify_origin(S({3: -1}, {1: 1}, {1: -1}))) == "fig1-g"
        assert tagged(classify_origin(S({3: -1}, {2: 1}, {3: -1}))) == "fig1-b"
        assert tagged(classify_origin(S({3: -1}, {2: 1}, {2: 1}))) == "fig1-f"
        assert tagged(classify_origin(S({2: -1}, {1: 1}, {1: 1}))) == "fig1-f"
        assert tagged(classify_origin(S({2: -1}, {2: 1}, {3: 1}))) == "fig1-d"
        assert tagged(classify_origin(S({2: -1}, {2: -1}, {3: 1}))) == "fig1-e"
        assert tagged(classify_origin(S({2: -1}, {2: -1}, {4: 1}))) == "fig1-c"

    def test_subcase_labels(self):
        assert classify_origin(S({3: -1}, {4: 1}, {3: -1})).subcase == "I3"
        assert classify_origin(S({2: -1}, {4: -3}, {5: -2})).subcase == "II4/Z4"
        oc = classify_origin(S({2: -1}, {2: -1}, {3: 1}))
        assert oc.subcase == "R10"

    def test_unnormalized_input(self):
        # a_p = +2: time reversal maps to the same table row
        oc = classify_origin(S({3: 2}, {4: 1}, {3: 1}))
        assert oc.time_record.reversed
        # normalized system has c_r = -1/2 < 0: monodromic
        assert tagged(oc) == "fig1-hi"


def random_row_systems(rng, count):
    """Systems drawn across all origin table rows (after normalization)."""
    out = []
    while len(out) < count:
        p = rng.randint(1, 4)
        kind = rng.choice(["I", "II", "III"])
        if kind == "II":
            k = rng.randint(1, 3)
            q, r = p * k, k * (p + 1) - 1
        elif kind == "I":
            q = rng.randint(1, 5)
            r = rng.randint(1, 5)
            if p * (r + 1) >= q * (p + 1):
                continue
        else:
            q = rng.randint(1, 4)
            r = rng.randint(1, 6)
            if p * (r + 1) <= q * (p + 1):
                continue
        ell = p + rng.choice([0, 2, 4])
        m = q + rng.choice([0, 1])
        n = r + rng.choice([0, 2])
        phi = {p: -rng.choice(MAGS)}
        if ell > p:
            phi[ell] = rng.choice([-1, 1]) * rng.choice(MAGS)
        F = {q: rng.choice([-1, 1]) * rng.choice(MAGS)}
        if m > q:
            F[m] = rng.choice([-1, 1]) * rng.choice(MAGS)
        g = {r: rng.choice([-1, 1]) * rng.choice(MAGS)}
        if n > r:
            g[n] = rng.choice([-1, 1]) * rng.choice(MAGS)
        out.append(build_system(phi, F, g))
    return out


class TestOracleAgreement:
    def test_table_matches_blowup(self):
        rng = random.Random(2024)
        for sys in random_row_systems(rng, 120):
            oc, oracle = verify_origin_against_oracle(sys)
            want = FIG1_CLASS[oc.portrait]
            got = oracle.canonical()
            assert classes_equal(got, want), (sys.describe(), oc.portrait, got)
            assert oracle.monodromic == (oc.monodromy is not None)

    def test_symmetry_equivariance(self):
        rng = random.Random(9)
        for sys in random_row_systems(rng, 25):
            base = classify_origin(sys)
            for t in SYMMETRY_GROUP:
                img = classify_origin(t.apply(sys))
                assert FIG1_CLASS[img.portrait] == FIG1_CLASS[base.portrait]
                assert (img.monodromy is None) == (base.monodromy is None)


class TestCherkas:
    def test_even_G_branch_exact(self):
        z = cherkas_branch(S({3: -1}, {4: 1}, {3: -1}), 12)
        assert z == Poly.from_coeffs([0, -1])

    def test_example_coefficient(self):
        # g = -x^3 - x^4: G = -x^4/4 - x^5/5; matching the x^5 coefficient of
        # G(z) = G(x) with z = -x + z2 x^2 gives z2 + 1/5 = -1/5, so z2 = -2/5
        sys = S({3: -1}, {4: 1}, {3: -1, 4: -1})
        z = cherkas_branch(sys, 6)
        assert z.coeff(1) == -1 and z.coeff(2) == Fraction(-2, 5)
        # independent numeric check: G(z(x)) = G(x) near x = 1e-3 (a wrong z2
        # would leave a residual around 4e-16 here)
        G = sys.g.antiderivative()
        x = Fraction(1, 1000)
        assert abs(G.eval(z.eval(x)) - G.eval(x)) < Fraction(1, 10**18)

    def test_order_guard(self):
        with pytest.raises(OrderTooSmall):
            cherkas_branch(S({3: -1}, {4: 1}, {3: -1}), 1)

    def test_not_monodromic_guard(self):
        with pytest.raises(NotMonodromic):
            cherkas_branch(S({3: -1}, {4: 1}, {3: 1}), 4)


class TestCenterTest:
    def test_even_even_center(self):
        v = center_test(S({3: -1}, {4: 1}, {3: -1}))
        assert v.verdict == "center"
        v = center_test(S({3: -1, 7: -1}, {4: 1}, {3: -1, 5: -1}))
        assert v.verdict == "center"

    def test_classical_focus(self):
        # x' = y - (x^2 + x^3), y' = -x: residual 2x^3
        v = center_test(S({1: 1}, {2: 1, 3: 1}, {1: 1}))
        assert v.verdict == "focus"
        assert v.residual_order == 3

    def test_noneven_center_certified(self):
        # F(x) = x^2 + x^3 paired with G built from the same reflection branch:
        # apply x -> -x to an even-even center to get a non-even one
        base = S({1: 1}, {2: 1}, {1: 1})
        from glienard.system import SymmetryTransform

        flipped = SymmetryTransform(flip_x=True).apply(base)
        assert center_test(base).verdict == "center"
        assert center_test(flipped).verdict == "center"

    def test_perturbed_focus_family(self):
        for k in (1, 2):
            for eps in (Fraction(1), Fraction(1, 10)):
                sys = S({1: 1}, {2 * k: 1, 2 * k + 1: eps}, {1: 1})
                v = center_test(sys)
                assert v.verdict == "focus", (k, eps)

    def test_random_even_centers(self):
        rng = random.Random(3)
        for _ in range(15):
            p = rng.choice([1, 3])
            r = rng.choice([1, 3])
            q = rng.choice([2, 4, 6])
            if p * (r + 1) >= q * (p + 1):
                continue
            F = {q: rng.choice(MAGS), q + 2: rng.choice(MAGS)}
            g = {r: -rng.choice(MAGS), r + 2: -rng.choice(MAGS)}
            v = center_test(S({p: -1}, F, g))
            assert v.verdict == "center"
