"""System datatype, normalizations, symmetry group and exact thresholds.

The planar system is x' = phi(y) - F(x), y' = -g(x) with polynomial
phi, F, g whose lowest/highest coefficients are nonzero.  All coefficients
are exact rationals; floats are rejected on this path so that equality
branches (c_r = -c_hat and friends) stay decidable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional

from .ratpoly import Poly, Sign, _as_fraction, _sign, compare_radical


class EmptyPolynomial(ValueError):
    """One of phi, F, g has no nonzero terms."""


class ZeroBoundaryCoefficient(ValueError):
    """An explicitly supplied window-boundary coefficient is zero."""


class UndefinedThreshold(ValueError):
    """c* requested in a configuration where its formula degenerates."""


def _poly_from_spec(spec, name: str, symbol: str) -> Poly:
    """Build a Poly from {exponent: rational}; rejects floats and exponent 0."""
    if isinstance(spec, Poly):
        terms = spec.terms
    else:
        terms = {}
        items = spec.items() if isinstance(spec, Mapping) else spec
        for e, c in items:
            e = int(e)
            if isinstance(c, float):
                raise TypeError(f"{name}: float coefficient at exponent {e}; pass exact rationals")
            terms[e] = _as_fraction(c)
    if not any(c != 0 for c in terms.values()):
        raise EmptyPolynomial(f"{name} has no nonzero terms")
    supplied = sorted(e for e in terms)
    for e in (supplied[0], supplied[-1]):
        if terms[e] == 0:
            raise ZeroBoundaryCoefficient(f"{symbol}_{e} = 0 at the window boundary of {name}")
    if supplied[0] < 1:
        raise ValueError(f"{name}: exponents must be >= 1, got {supplied[0]}")
    return Poly.from_terms(terms)


@dataclass(frozen=True)
class GeneralizedLienardSystem:
    """x' = phi(y) - F(x), y' = -g(x), with inferred exponent windows."""

    phi: Poly
    F: Poly
    g: Poly

    @property
    def p(self) -> int:
        return self.phi.valuation()

    @property
    def ell(self) -> int:
        return self.phi.degree()

    @property
    def q(self) -> int:
        return self.F.valuation()

    @property
    def m(self) -> int:
        return self.F.degree()

    @property
    def r(self) -> int:
        return self.g.valuation()

    @property
    def n(self) -> int:
        return self.g.degree()

    def a(self, i: int) -> Fraction:
        return self.phi.coeff(i)

    def b(self, i: int) -> Fraction:
        return self.F.coeff(i)

    def c(self, i: int) -> Fraction:
        return self.g.coeff(i)

    @property
    def G(self) -> Poly:
        """Primitive of g with zero constant term."""
        return self.g.antiderivative()

    def scaled(self, k: Fraction) -> "GeneralizedLienardSystem":
        """Multiply the whole vector field by k (time reparametrization)."""
        return GeneralizedLienardSystem(self.phi.scale(k), self.F.scale(k), self.g.scale(k))

    def describe(self) -> dict:
        return {
            "phi": {str(e): str(c) for e, c in sorted(self.phi.terms.items())},
            "F": {str(e): str(c) for e, c in sorted(self.F.terms.items())},
            "g": {str(e): str(c) for e, c in sorted(self.g.terms.items())},
        }


def build_system(phi_coeffs, F_coeffs, g_coeffs) -> GeneralizedLienardSystem:
    phi = _poly_from_spec(phi_coeffs, "phi", "a")
    F = _poly_from_spec(F_coeffs, "F", "b")
    g = _poly_from_spec(g_coeffs, "g", "c")
    return GeneralizedLienardSystem(phi, F, g)


# -- symmetry group ------------------------------------------------------


@dataclass(frozen=True)
class SymmetryTransform:
    """Element of the order-8 group generated by x->-x, y->-y, t->-t."""

    flip_x: bool = False
    flip_y: bool = False
    reverse_time: bool = False

    def apply(self, sys: GeneralizedLienardSystem) -> GeneralizedLienardSystem:
        sx = -1 if self.flip_x else 1
        sy = -1 if self.flip_y else 1
        st = -1 if self.reverse_time else 1
        phi = Poly.from_terms({i: sx * st * sy**i * c for i, c in sys.phi.terms.items()})
        F = Poly.from_terms({i: st * sx ** (i + 1) * c for i, c in sys.F.terms.items()})
        g = Poly.from_terms({i: sy * st * sx**i * c for i, c in sys.g.terms.items()})
        return GeneralizedLienardSystem(phi, F, g)

    def is_identity(self) -> bool:
        return not (self.flip_x or self.flip_y or self.reverse_time)

    def describe(self) -> dict:
        return {"flip_x": self.flip_x, "flip_y": self.flip_y, "reverse_time": self.reverse_time}


#: canonical enumeration order: identity, x-flip, y-flip, xy-flip, then the
#: same four with time reversal
SYMMETRY_GROUP = tuple(
    SymmetryTransform(fx, fy, rt)
    for rt in (False, True)
    for fx, fy in ((False, False), (True, False), (False, True), (True, True))
)


def symmetry_search(
    sys: GeneralizedLienardSystem,
    predicate: Callable[[GeneralizedLienardSystem], bool],
) -> Optional[tuple[SymmetryTransform, GeneralizedLienardSystem]]:
    """First group element (in canonical order) whose image satisfies predicate."""
    for t in SYMMETRY_GROUP:
        image = t.apply(sys)
        if predicate(image):
            return t, image
    return None


# -- time normalization ----------------------------------------------------


@dataclass(frozen=True)
class TimeRescaleRecord:
    scale: Fraction  # vector field multiplied by this
    reversed: bool  # orientation flipped iff scale < 0

    def describe(self) -> dict:
        return {"scale": str(self.scale), "time_reversed": self.reversed}


def normalize_time(sys: GeneralizedLienardSystem, anchor: str = "p"):
    """Rescale time so the anchored phi coefficient becomes -1.

    anchor "p" enforces a_p = -1 (origin analysis), "ell" enforces
    a_ell = -1 (infinity analysis).  Orientation flips iff the anchored
    coefficient was positive.
    """
    a = sys.a(sys.p) if anchor == "p" else sys.a(sys.ell)
    lam = Fraction(-1) / a
    return sys.scaled(lam), TimeRescaleRecord(lam, lam < 0)


@dataclass(frozen=True)
class PairNormalization:
    """Numeric record of Remark-style y-rescaling to (a_p, a_ell) = (-1, +-1)."""

    alpha: float
    time_scale: float
    sign_pair: tuple[int, int]
    phi: dict[int, float]
    F: dict[int, float]
    g: dict[int, float]


def normalize_pair(sys: GeneralizedLienardSystem) -> PairNormalization:
    """y -> alpha*y, t -> -t/(a_p alpha^p) with alpha = |a_p/a_ell|^(1/(ell-p)).

    alpha is irrational in general, so this lives on the numeric path; the
    exact classifiers only ever use the sign pair, which is
    (-1, -sign(a_p a_ell)).
    """
    p, ell = sys.p, sys.ell
    ap, al = sys.a(p), sys.a(ell)
    if ell == p:
        alpha = 1.0
    else:
        alpha = abs(float(ap) / float(al)) ** (1.0 / (ell - p))
    lam = -1.0 / (float(ap) * alpha**p)
    phi = {i: lam * alpha**i * float(c) for i, c in sys.phi.terms.items()}
    F = {i: lam * float(c) for i, c in sys.F.terms.items()}
    g = {i: lam / alpha * float(c) for i, c in sys.g.terms.items()}
    sign_pair = (-1, -1 if ap * al > 0 else 1)
    return PairNormalization(alpha, lam, sign_pair, phi, F, g)


# -- thresholds -------------------------------------------------------------


@dataclass(frozen=True)
class RadicalComparator:
    """The exact number coefficient * base**(num/den), base > 0, den >= 1."""

    coefficient: Fraction
    base: Fraction
    num: int
    den: int

    def compare(self, x) -> Sign:
        """Exact sign of x - value."""
        x = _as_fraction(x)
        if self.coefficient == 0:
            return _sign(x)
        tsign = 1 if self.coefficient > 0 else -1
        xsign = 1 if x > 0 else (-1 if x < 0 else 0)
        if xsign != tsign:
            return Sign.POSITIVE if xsign > tsign else Sign.NEGATIVE
        mag = compare_radical(abs(x) / abs(self.coefficient), self.base, self.num, self.den)
        return Sign(tsign * mag)

    def float(self) -> float:
        return float(self.coefficient) * float(self.base) ** (self.num / self.den)

    def decimal(self, digits: int = 30) -> str:
        import mpmath

        with mpmath.workprec(digits * 4 + 40):
            v = mpmath.mpf(self.coefficient.numerator) / self.coefficient.denominator
            b = mpmath.mpf(self.base.numerator) / self.base.denominator
            val = v * b ** (mpmath.mpf(self.num) / self.den)
            return mpmath.nstr(val, digits)

    def describe(self) -> dict:
        return {
            "coefficient": str(self.coefficient),
            "base": str(self.base),
            "num": self.num,
            "den": self.den,
            "decimal": self.decimal(),
        }


@dataclass(frozen=True)
class Thresholds:
    c_hat: RadicalComparator
    c_star: RadicalComparator
    c_star_upper: Optional[RadicalComparator]

    def describe(self) -> dict:
        out = {"c_hat": self.c_hat.describe(), "c_star": self.c_star.describe()}
        out["c_star_upper"] = self.c_star_upper.describe() if self.c_star_upper else None
        return out


def c_hat_comparator(sys: GeneralizedLienardSystem) -> RadicalComparator:
    """c_hat = q |b_q/(p+1)|^((p+1)/p), from the a_p = -1 normalized system."""
    p, q = sys.p, sys.q
    return RadicalComparator(Fraction(q), abs(sys.b(q) / (p + 1)), p + 1, p)


def c_star_comparator(sys: GeneralizedLienardSystem) -> RadicalComparator:
    """c_* = ell |b_m/(ell+1)|^((ell+1)/ell), from the a_ell = -1 normalized system."""
    ell, m = sys.ell, sys.m
    return RadicalComparator(Fraction(ell), abs(sys.b(m) / (ell + 1)), ell + 1, ell)


def c_star_upper_comparator(sys: GeneralizedLienardSystem) -> RadicalComparator:
    """c^* = ((m-ell)(n+1)/((n-m)(ell+1))) |b_m(n-m)/(n-ell)|^((n-ell)/(m-ell))."""
    ell, m, n = sys.ell, sys.m, sys.n
    if m == ell or n == m or n == ell:
        raise UndefinedThreshold(f"c* undefined for (ell, m, n) = ({ell}, {m}, {n})")
    coeff = Fraction((m - ell) * (n + 1), (n - m) * (ell + 1))
    base = abs(sys.b(m) * Fraction(n - m, n - ell))
    num, den = n - ell, m - ell
    if den < 0:
        num, den = -num, -den
    if num < 0:
        base, num = 1 / base, -num
    return RadicalComparator(coeff, base, num, den)


def thresholds(sys: GeneralizedLienardSystem, want_c_star_upper: bool = False) -> Thresholds:
    upper = None
    if want_c_star_upper:
        upper = c_star_upper_comparator(sys)
    else:
        ell, m, n = sys.ell, sys.m, sys.n
        if m != ell and n != m and n != ell:
            upper = c_star_upper_comparator(sys)
    return Thresholds(c_hat_comparator(sys), c_star_comparator(sys), upper)
