import random
from fractions import Fraction

import pytest

from glienard.infinity import (
    EllOne,
    classify_infinity,
    equator_structure,
    infinity_case,
    load_fig8_data,
    monodromy_infinity,
    poincare_charts,
)
from glienard.planar import lienard_field, poincare_chart_u, total_degree
from glienard.system import SYMMETRY_GROUP, build_system, normalize_time

MAGS = [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3), Fraction(5, 2)]


def S(phi, F, g):
    return build_system(phi, F, g)


class TestCharts:
    def test_c1_equator_slice(self):
        # l = m = n = 3: the chart-U equator polynomial is E(u) = -c_n + b_m u + u^(l+1)
        sys = S({3: -1}, {3: 2}, {3: 5})
        ns, _ = normalize_time(sys, anchor="ell")
        ch = poincare_chart_u(lienard_field(ns))
        eq = {i: c for (i, j), c in ch.P if j == 0}
        assert eq == {0: -5, 1: 2, 3: 0, 4: 1} or eq == {0: -5, 1: 2, 4: 1}

    def test_c7_chart_v_regular(self):
        # l > max(m, n): the vertical chart is regular at its origin
        sys = S({5: -1}, {2: 1}, {3: 1})
        charts = poincare_charts(sys)
        const = {k: v for k, v in charts.chart_V.P if k == (0, 0)}
        assert const  # u' = -1 + O(v): nonzero constant term

    def test_ell_one_rejected(self):
        with pytest.raises(EllOne):
            poincare_charts(S({1: -1}, {2: 1}, {1: 1}))
        with pytest.raises(EllOne):
            classify_infinity(S({1: -1}, {2: 1}, {1: 1}))


class TestCasePartition:
    def test_exhaustive_and_exclusive(self):
        for ell in range(2, 13):
            for m in range(1, 13):
                for n in range(1, 13):
                    sys = S({ell: -1}, {m: 1}, {n: 1})
                    case = infinity_case(sys)
                    checks = {
                        "C1": n == m == ell,
                        "C2": n == m > ell,
                        "C3": n == ell > m,
                        "C4": n > max(ell, m),
                        "C5": m == ell > n,
                        "C6": m > max(ell, n),
                        "C7": ell > max(m, n),
                    }
                    assert checks[case]
                    assert sum(checks.values()) == 1


class TestGoldenTags:
    def test_example_realizations(self):
        expected = {
            ("a", "fig8-l"): ({3: -1}, {4: 1}, {3: -1}),
            ("b", "fig8-q"): ({5: -1}, {4: 1}, {3: -1}),
            ("c", "fig8-u"): ({3: -1}, {10: 1}, {11: -1}),
            ("d", "fig8-w"): ({3: -1, 7: -1}, {4: 1}, {3: -1, 5: -1}),
            ("e", "fig8-x"): ({3: -1, 5: -1}, {4: 1}, {3: -1, 5: -1}),
        }
        for (label, tag), args in expected.items():
            ic = classify_infinity(S(*args))
            assert ic.portrait == tag, label

    def test_monodromy_w1(self):
        assert monodromy_infinity(S({3: -1, 7: -1}, {4: 1}, {3: -1, 5: -1})) == "W1"
        assert monodromy_infinity(S({3: -1}, {4: 1}, {3: -1})) is None

    def test_monodromy_w2_cross_power(self):
        # l=m=n=3, b=1: c_* = 3(1/4)^{4/3}; c=-2: 2^3*4^4 = 2048 > 27 = 3^3
        assert monodromy_infinity(S({3: -1}, {3: 1}, {3: -2})) == "W2"
        assert monodromy_infinity(S({3: -1}, {3: 1}, {3: Fraction(-2, 5)})) is None

    def test_monodromy_w3(self):
        # l=3, m=6, n=7 (k=2 equality), b=4: c^* = 6
        assert monodromy_infinity(S({3: -1}, {6: 4}, {7: -7})) == "W3"
        assert monodromy_infinity(S({3: -1}, {6: 4}, {7: -6})) is None


class TestBoundaries:
    def test_c_star_exact(self):
        # l=m=n=3, b=4: c_* = 3 exactly
        eps = Fraction(1, 10**9)
        assert classify_infinity(S({3: -1}, {3: 4}, {3: -3 + eps})).portrait == "fig8-b"
        assert classify_infinity(S({3: -1}, {3: 4}, {3: -3})).portrait == "fig8-c"
        assert classify_infinity(S({3: -1}, {3: 4}, {3: -3 - eps})).portrait == "fig8-x"

    def test_c_star_upper_exact(self):
        # l=3, m=6, n=7, b=4: c^* = 6 exactly
        eps = Fraction(1, 10**9)
        assert classify_infinity(S({3: -1}, {6: 4}, {7: -6 + eps})).portrait == "fig8-u"
        assert classify_infinity(S({3: -1}, {6: 4}, {7: -6})).portrait == "fig8-u"
        assert classify_infinity(S({3: -1}, {6: 4}, {7: -6 - eps})).portrait == "fig8-w"


class TestRouting:
    def test_positive_a_ell(self):
        # a_ell = +1 routes through time reversal
        ic = classify_infinity(S({3: 1}, {4: 1}, {3: 1}))
        assert ic.time_record.reversed
        assert ic.portrait in load_fig8_data()

    def test_unlisted_signs_route(self):
        # C1 all odd with b < 0 is not listed; x/y flips reach S1 or S2
        ic = classify_infinity(S({3: -1}, {3: -1}, {3: 1}))
        assert ic.situation in ("S1", "S2")
        assert not ic.applied_symmetry.is_identity()

    def test_merged_equality_block_s10(self):
        # l=2, k=4: m=8, n=11: S10 row comes from the merged equality block
        ic = classify_infinity(S({2: -1}, {8: -3}, {11: 9}))
        assert ic.situation == "S10" and ic.portrait == "fig8-o"
        ic = classify_infinity(S({2: -1}, {8: -3}, {11: 7}))
        assert ic.portrait == "fig8-v"

    def test_symmetry_class_invariance(self):
        rng = random.Random(31)
        for sys in random_infinity_systems(rng, 20):
            base = classify_infinity(sys)
            for t in SYMMETRY_GROUP:
                img = classify_infinity(t.apply(sys))
                assert img.portrait == base.portrait, (sys.describe(), t)


def random_infinity_systems(rng, count):
    out = []
    while len(out) < count:
        kind = rng.choice(["C1", "C2", "C3", "C4", "C5", "C6", "C7"])
        ell = rng.choice([2, 3, 4, 5])
        if kind == "C1":
            m = n = ell
        elif kind == "C2":
            m = n = ell + rng.randint(1, 2)
        elif kind == "C3":
            n = ell
            m = rng.randint(1, ell - 1)
        elif kind == "C4":
            m = rng.randint(1, ell + 2)
            n = max(ell, m) + rng.randint(1, 2)
        elif kind == "C5":
            m = ell
            n = rng.randint(1, ell - 1)
        elif kind == "C6":
            n = rng.randint(1, ell + 1)
            m = max(ell, n) + rng.randint(1, 2)
        else:
            if ell < 3:
                continue
            m = rng.randint(1, ell - 1)
            n = rng.randint(1, ell - 1)
        p = rng.choice([e for e in (1, 2, 3) if e <= ell])
        q = rng.choice([e for e in (1, 2) if e <= m])
        r = rng.choice([e for e in (1, 2) if e <= n])
        phi = {ell: rng.choice([-1, 1]) * rng.choice(MAGS)}
        if p < ell:
            phi[p] = rng.choice([-1, 1]) * rng.choice(MAGS)
        F = {m: rng.choice([-1, 1]) * rng.choice(MAGS)}
        if q < m:
            F[q] = rng.choice([-1, 1]) * rng.choice(MAGS)
        g = {n: rng.choice([-1, 1]) * rng.choice(MAGS)}
        if r < n:
            g[r] = rng.choice([-1, 1]) * rng.choice(MAGS)
        out.append(build_system(phi, F, g))
    return out


class TestOracleAgreement:
    def test_structures_match_pinned_data(self):
        data = load_fig8_data()
        rng = random.Random(77)
        for sys in random_infinity_systems(rng, 40):
            ic = classify_infinity(sys)
            es = equator_structure(sys)
            entry = data[ic.portrait]
            assert es.monodromic == entry["monodromic"], sys.describe()
            assert str(es.index_sum()) == entry["index_sum"], sys.describe()
            canon = _listify(es.canonical())
            assert canon in entry["structures"], (sys.describe(), ic.portrait, canon)

    def test_monodromy_iff_w_tag(self):
        rng = random.Random(78)
        for sys in random_infinity_systems(rng, 60):
            ic = classify_infinity(sys)
            w = monodromy_infinity(sys)
            assert (w is not None) == (ic.portrait in ("fig8-w", "fig8-x")), sys.describe()
            es = equator_structure(sys)
            assert es.monodromic == (w is not None), sys.describe()


def _listify(x):
    if isinstance(x, tuple):
        return [_listify(v) for v in x]
    return x
