"""Classification at the origin: decision table, monodromy, and the center
test via the reflection branch of the primitive of g.

Everything here runs on the time-normalized system (lowest phi coefficient
equal to -1); the record of that normalization travels with the result so
portraits can be mapped back to the input's own time direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .planar import lienard_field
from .blowup import OraclePortrait, local_portrait_oracle
from .ratpoly import (
    Poly,
    Sign,
    series_compose,
    series_inverse,
    series_mul,
    series_shift_down,
    series_truncate,
)
from .system import (
    SYMMETRY_GROUP,
    GeneralizedLienardSystem,
    RadicalComparator,
    SymmetryTransform,
    TimeRescaleRecord,
    c_hat_comparator,
    normalize_time,
)


class NotMonodromic(ValueError):
    pass


class OrderTooSmall(ValueError):
    pass


class UnclassifiedByTable(RuntimeError):
    """No decision-table row covers the tuple (not expected to ever fire for
    the origin table, which is complete; kept as an honest escape hatch)."""


def _cmp_neg(comparator: RadicalComparator, x) -> Sign:
    """Sign of (x - (-value)) = sign of (x + value)."""
    return Sign(-int(comparator.compare(-x)))


@dataclass(frozen=True)
class OriginClass:
    portrait: str  # 'fig1-a' .. 'fig1-i'
    monodromy: Optional[str]  # None | 'M1' | 'M2'
    case_label: str  # 'I' | 'II' | 'III'
    subcase: str
    applied_symmetry: SymmetryTransform
    time_record: TimeRescaleRecord

    @property
    def monodromic(self) -> bool:
        return self.monodromy is not None

    def describe(self) -> dict:
        return {
            "portrait": self.portrait,
            "monodromy": self.monodromy,
            "case": self.case_label,
            "subcase": self.subcase,
            "applied_symmetry": self.applied_symmetry.describe(),
            "time_rescale": self.time_record.describe(),
        }


def monodromy_origin(sys: GeneralizedLienardSystem) -> Optional[str]:
    """M1: p(r+1) < q(p+1), p and r odd, c_r < 0.
    M2: p(r+1) = q(p+1), p and r odd, c_r < -c_hat (exact comparison).
    Stated for the a_p = -1 normalization, which is applied here."""
    ns, _ = normalize_time(sys)
    p, q, r = ns.p, ns.q, ns.r
    if p % 2 == 0 or r % 2 == 0:
        return None
    cr = ns.c(r)
    gap = p * (r + 1) - q * (p + 1)
    if gap < 0:
        return "M1" if cr < 0 else None
    if gap == 0:
        return "M2" if _cmp_neg(c_hat_comparator(ns), cr) == Sign.NEGATIVE else None
    return None


def classify_origin(sys: GeneralizedLienardSystem) -> OriginClass:
    ns, rec = normalize_time(sys)
    p, q, r = ns.p, ns.q, ns.r
    bq, cr = ns.b(q), ns.c(r)
    podd, qodd, rodd = p % 2 == 1, q % 2 == 1, r % 2 == 1
    gap = p * (r + 1) - q * (p + 1)
    case = "I" if gap < 0 else ("II" if gap == 0 else "III")
    chat = c_hat_comparator(ns)

    portrait = None
    if podd and rodd and cr > 0:
        portrait = "fig1-a"
    elif case == "I":
        if podd and rodd:
            portrait = "fig1-hi"
        else:
            portrait = "fig1-d"
    elif case == "II":
        if podd:  # r is odd automatically when the gap closes
            against = _cmp_neg(chat, cr)
            if against == Sign.NEGATIVE:
                portrait = "fig1-hi"
            else:
                portrait = "fig1-g" if qodd else "fig1-b"
        else:  # q is even automatically
            if bq > 0:
                portrait = "fig1-d"
            elif chat.compare(abs(cr)) == Sign.POSITIVE:
                portrait = "fig1-d"
            else:
                portrait = "fig1-e" if rodd else "fig1-c"
    else:  # case III
        if podd:
            if rodd:
                portrait = "fig1-g" if qodd else "fig1-b"
            else:
                portrait = "fig1-f"
        else:
            if qodd:
                portrait = "fig1-f"
            elif bq > 0:
                portrait = "fig1-d"
            else:
                portrait = "fig1-e" if rodd else "fig1-c"
    if portrait is None:
        raise UnclassifiedByTable(f"no origin row for p={p}, q={q}, r={r}")

    mono = monodromy_origin(sys)
    if portrait == "fig1-hi":
        # counterclockwise rotation in original time is drawn as fig1-h
        portrait = "fig1-h" if not rec.reversed else "fig1-i"
    subcase, symmetry = _subcase_label(ns, case)
    return OriginClass(portrait, mono, case, subcase, symmetry, rec)


def _subcase_label(ns: GeneralizedLienardSystem, case: str) -> tuple[str, SymmetryTransform]:
    """Name the paper's proof situation the tuple lands in (reporting only)."""
    p, q, r = ns.p, ns.q, ns.r
    bq, cr = ns.b(q), ns.c(r)
    podd, rodd = p % 2 == 1, r % 2 == 1
    ident = SymmetryTransform()
    if case == "I":
        if not podd:
            return "I1", ident
        if rodd:
            return ("I2" if cr > 0 else "I3"), ident
        return ("I4" if cr > 0 else "I5"), ident
    if case == "II":
        if podd:
            return ("II1" if q % 2 == 1 else "II2"), ident
        label = ("II3" if rodd else "II5") if bq > 0 else ("II4" if rodd else "II6")
        if bq < 0:
            chat = c_hat_comparator(ns)
            above = chat.compare(cr)  # sign(c_r - c_hat)
            below = _cmp_neg(chat, cr)  # sign(c_r + c_hat)
            if above == Sign.POSITIVE:
                z = "Z1"
            elif above == Sign.ZERO:
                z = "Z2"
            elif cr > 0:
                z = "Z3"
            elif below == Sign.POSITIVE:
                z = "Z4"
            elif below == Sign.ZERO:
                z = "Z5"
            else:
                z = "Z6"
            label += "/" + z
        return label, ident

    # case III: route the sign pattern into the paper's 12 situations
    wanted = {
        (True, True, True): (("R1", (1, 1)), ("R2", (1, -1))),
        (True, True, False): (("R3", (1, 1)),),
        (True, False, True): (("R4", (1, 1)), ("R5", (1, -1))),
        (True, False, False): (("R6", (1, 1)),),
        (False, True, True): (("R7", (1, 1)),),
        (False, True, False): (("R8", (1, 1)),),
        (False, False, True): (("R9", (1, 1)), ("R10", (-1, 1))),
        (False, False, False): (("R11", (1, 1)), ("R12", (-1, 1))),
    }[(podd, q % 2 == 1, rodd)]
    for t in SYMMETRY_GROUP:
        img, _ = normalize_time(t.apply(ns))
        signs = (1 if img.b(img.q) > 0 else -1, 1 if img.c(img.r) > 0 else -1)
        for name, pat in wanted:
            if signs == pat:
                return name, t
    return "R?", ident


def verify_origin_against_oracle(sys: GeneralizedLienardSystem, recursion_limit: int = 6):
    """Run the blow-up oracle on the normalized field and return it together
    with the table classification (tests compare the two)."""
    ns, _ = normalize_time(sys)
    oracle = local_portrait_oracle(lienard_field(ns), recursion_limit)
    return classify_origin(sys), oracle


# -- center test --------------------------------------------------------------


def cherkas_branch(sys: GeneralizedLienardSystem, order: int) -> Poly:
    """The series z(x) = -x + z_2 x^2 + ... solving G(z(x)) = G(x), truncated
    so coefficients through x^order are exact.  Requires the monodromic
    window (odd r), which makes the reflection branch exist and be unique;
    computed by Newton iteration on G(z) - G(x)."""
    if order < 2:
        raise OrderTooSmall(f"order must be >= 2, got {order}")
    if monodromy_origin(sys) is None:
        raise NotMonodromic("the reflection branch is defined for monodromic origins")
    g = sys.g
    r = sys.r
    G = g.antiderivative()
    z = Poly.from_coeffs([0, -1])
    prec = 1  # coefficients through x^prec are exact
    while prec < order:
        prec = min(2 * prec, order)
        work = prec + r + 1
        Hz = series_compose(G, z, work + 1) - series_truncate(G, work + 1)
        gz = series_compose(g, z, work)
        A = series_shift_down(Hz, r) if not Hz.is_zero() else Poly.zero()
        B = series_truncate(series_shift_down(gz, r), prec + 1)
        Q = series_mul(A, series_inverse(B, prec + 1), prec + 1)
        z = series_truncate(z - Q, prec + 1)
    return z


@dataclass(frozen=True)
class CenterVerdict:
    verdict: str  # 'center' | 'focus' | 'inconclusive'
    stability: Optional[str]  # 'stable' | 'unstable' | None
    method: str  # 'series' | 'numeric' | 'both'
    series_order: int
    residual_order: Optional[int] = None
    residual_coeff: Optional[Fraction] = None

    def describe(self) -> dict:
        return {
            "verdict": self.verdict,
            "stability": self.stability,
            "method": self.method,
            "series_order": self.series_order,
            "residual_order": self.residual_order,
            "residual_coeff": str(self.residual_coeff) if self.residual_coeff is not None else None,
        }


def default_series_order(sys: GeneralizedLienardSystem) -> int:
    return 2 * max(sys.m, sys.n + 1) ** 2 + 2


def center_test(
    sys: GeneralizedLienardSystem,
    series_order: Optional[int] = None,
    numeric_fallback: bool = False,
) -> CenterVerdict:
    """Exact center decision for a monodromic origin.

    The reflection branch z of G is computed to an order past the Bezout-type
    bound on the contact between z and the curve F(x) = F(w); a residual that
    vanishes to that order therefore certifies F(z(x)) = F(x) identically
    (the branch lies on a common factor), and any nonzero residual
    coefficient certifies a focus.
    """
    if monodromy_origin(sys) is None:
        raise NotMonodromic("center test needs a monodromic origin")
    F, G = sys.F, sys.g.antiderivative()
    even_F = all(e % 2 == 0 for e in F.terms)
    even_G = all(e % 2 == 0 for e in G.terms)
    order = series_order or default_series_order(sys)
    if even_F and even_G:
        return CenterVerdict("center", None, "series", order)
    # cheap first pass: a focus shows a low-order residual long before the
    # certificate order is reached
    quick = 2 * max(sys.m, sys.n + 1) + 4
    if order > quick:
        zq = cherkas_branch(sys, quick)
        rq = series_truncate(series_compose(F, zq, quick + 1) - F, quick + 1)
        if not rq.is_zero():
            order = quick
            z, resid = zq, rq
        else:
            z = cherkas_branch(sys, order)
            resid = series_truncate(series_compose(F, z, order + 1) - F, order + 1)
    else:
        z = cherkas_branch(sys, order)
        resid = series_truncate(series_compose(F, z, order + 1) - F, order + 1)
    if resid.is_zero():
        if order >= default_series_order(sys) and _common_branch_certificate(sys, z, order):
            return CenterVerdict("center", None, "series", order)
        return CenterVerdict("inconclusive", None, "series", order)
    j = resid.valuation()
    stability = None
    method = "series"
    if numeric_fallback:
        from .verify import center_probe

        probe = center_probe(sys)
        if probe.verdict == "focus":
            stability = probe.stability
            method = "both"
    return CenterVerdict("focus", stability, method, order, j, resid.coeff(j))


def _common_branch_certificate(sys: GeneralizedLienardSystem, z: Poly, order: int) -> bool:
    """Exact identity check behind a Center verdict: the reflection branch
    must lie on a common factor of (F(x)-F(w))/(x-w) and (G(x)-G(w))/(x-w)."""
    import sympy

    x, w = sympy.symbols("x w")

    def lift(p: Poly, var):
        return sum(sympy.Rational(c.numerator, c.denominator) * var**e for e, c in p.terms.items())

    F, G = sys.F, sys.g.antiderivative()
    F2 = sympy.cancel((lift(F, x) - lift(F, w)) / (x - w))
    G2 = sympy.cancel((lift(G, x) - lift(G, w)) / (x - w))
    h = sympy.gcd(sympy.Poly(F2, x, w), sympy.Poly(G2, x, w))
    if h.total_degree() == 0:
        return False
    zsym = lift(z, x)
    comp = sympy.expand(h.as_expr().subs(w, zsym))
    if comp == 0:
        return True
    poly = sympy.Poly(comp, x)
    return min(m[0] for m in poly.monoms()) > order
