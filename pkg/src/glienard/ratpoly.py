"""Exact univariate polynomial arithmetic over the rationals.

Everything the classifiers branch on (root counts, signs at algebraic
numbers, comparisons against fractional powers) is decided here without
floating point: Sturm sequences for root isolation, gcd chains for
multiplicities, and cross-powering for radical comparisons.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class ZeroPolynomial(ValueError):
    """Raised when an operation needs a nonzero polynomial."""


class InvalidExponent(ValueError):
    """Raised for a radical comparison with a non-positive root index."""


class Sign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


def _sign(x) -> Sign:
    if x > 0:
        return Sign.POSITIVE
    if x < 0:
        return Sign.NEGATIVE
    return Sign.ZERO


Q = Fraction


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"exact rational expected, got {type(x).__name__}: {x!r}")


@dataclass(frozen=True)
class Poly:
    """Univariate polynomial with exact rational coefficients.

    Coefficients are stored densely in ascending order with no trailing
    zeros; the zero polynomial has an empty tuple.
    """

    coeffs: tuple[Fraction, ...]

    # -- construction ----------------------------------------------------

    @staticmethod
    def from_coeffs(coeffs: Iterable) -> "Poly":
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return Poly(tuple(cs))

    @staticmethod
    def from_terms(terms: Mapping[int, object]) -> "Poly":
        if not terms:
            return Poly(())
        deg = max(terms)
        cs = [Fraction(0)] * (deg + 1)
        for e, c in terms.items():
            if e < 0:
                raise ValueError("negative exponent")
            cs[e] = _as_fraction(c)
        return Poly.from_coeffs(cs)

    @staticmethod
    def zero() -> "Poly":
        return Poly(())

    @staticmethod
    def one() -> "Poly":
        return Poly((Fraction(1),))

    @staticmethod
    def x(power: int = 1) -> "Poly":
        return Poly.from_terms({power: 1})

    @staticmethod
    def const(c) -> "Poly":
        return Poly.from_coeffs([c])

    # -- queries ----------------------------------------------------------

    @property
    def terms(self) -> dict[int, Fraction]:
        return {e: c for e, c in enumerate(self.coeffs) if c != 0}

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        if not self.coeffs:
            raise ZeroPolynomial("degree of zero polynomial")
        return len(self.coeffs) - 1

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ZeroPolynomial("leading coefficient of zero polynomial")
        return self.coeffs[-1]

    def valuation(self) -> int:
        """Smallest exponent with a nonzero coefficient."""
        if not self.coeffs:
            raise ZeroPolynomial("valuation of zero polynomial")
        for e, c in enumerate(self.coeffs):
            if c != 0:
                return e
        raise AssertionError

    def coeff(self, e: int) -> Fraction:
        if 0 <= e < len(self.coeffs):
            return self.coeffs[e]
        return Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        cs = [Fraction(0)] * n
        for e, c in enumerate(self.coeffs):
            cs[e] += c
        for e, c in enumerate(other.coeffs):
            cs[e] += c
        return Poly.from_coeffs(cs)

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.coeffs or not other.coeffs:
            return Poly(())
        cs = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b != 0:
                    cs[i + j] += a * b
        return Poly.from_coeffs(cs)

    def scale(self, k) -> "Poly":
        k = _as_fraction(k)
        if k == 0:
            return Poly(())
        return Poly(tuple(c * k for c in self.coeffs))

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        out = Poly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, a) -> "Poly":
        """Return p(x + a)."""
        a = _as_fraction(a)
        out = Poly.zero()
        for c in reversed(self.coeffs):
            out = out * Poly.from_coeffs([a, 1]) + Poly.const(c)
        return out

    def compose(self, inner: "Poly") -> "Poly":
        out = Poly.zero()
        for c in reversed(self.coeffs):
            out = out * inner + Poly.const(c)
        return out

    def reflect(self) -> "Poly":
        """Return p(-x)."""
        return Poly(tuple(c if e % 2 == 0 else -c for e, c in enumerate(self.coeffs)))

    def derivative(self) -> "Poly":
        return Poly.from_coeffs([c * e for e, c in enumerate(self.coeffs)][1:])

    def antiderivative(self) -> "Poly":
        """Primitive with zero constant term."""
        return Poly.from_coeffs([Fraction(0)] + [c / (e + 1) for e, c in enumerate(self.coeffs)])

    def eval(self, x) -> Fraction:
        x = _as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroPolynomial("division by zero polynomial")
        rem = list(self.coeffs)
        d = other.degree()
        lead = other.leading()
        if len(rem) - 1 < d:
            return Poly.zero(), self
        quot = [Fraction(0)] * (len(rem) - d)
        for i in range(len(rem) - 1, d - 1, -1):
            if rem[i] == 0:
                continue
            q = rem[i] / lead
            quot[i - d] = q
            for j, b in enumerate(other.coeffs):
                rem[i - d + j] -= q * b
        return Poly.from_coeffs(quot), Poly.from_coeffs(rem[:d])

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.leading())

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def squarefree_part(self) -> "Poly":
        if self.is_zero():
            raise ZeroPolynomial("squarefree part of zero polynomial")
        d = self.derivative()
        if d.is_zero():
            return Poly.one()
        return (self // self.gcd(d)).monic()

    def squarefree_decomposition(self) -> list[tuple["Poly", int]]:
        """Yun's algorithm: [(factor, multiplicity)] with factors squarefree."""
        if self.is_zero():
            raise ZeroPolynomial("squarefree decomposition of zero polynomial")
        p = self.monic()
        if p.degree() == 0:
            return []
        out = []
        g = p.gcd(p.derivative())
        if g.degree() == 0:
            return [(p, 1)]
        w = p // g
        i = 1
        while w.degree() > 0:
            y = w.gcd(g)
            f = w // y
            if f.degree() > 0:
                out.append((f.monic(), i))
            w, g = y, g // y
            i += 1
        return out

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for e, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if e == 0:
                parts.append(str(c))
            elif e == 1:
                parts.append(f"{c}*x")
            else:
                parts.append(f"{c}*x^{e}")
        return " + ".join(parts).replace("+ -", "- ")


# -- truncated power-series helpers -------------------------------------------


def series_truncate(p: Poly, n: int) -> Poly:
    """Drop terms of exponent >= n."""
    return Poly.from_coeffs(p.coeffs[:n])


def series_mul(a: Poly, b: Poly, n: int) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly.zero()
    cs = [Fraction(0)] * min(n, len(a.coeffs) + len(b.coeffs) - 1)
    for i, ca in enumerate(a.coeffs):
        if ca == 0 or i >= n:
            continue
        for j, cb in enumerate(b.coeffs):
            if i + j >= n:
                break
            if cb != 0:
                cs[i + j] += ca * cb
    return Poly.from_coeffs(cs)


def series_compose(p: Poly, inner: Poly, n: int) -> Poly:
    """p(inner(x)) mod x^n; inner must have zero constant term."""
    if not inner.is_zero() and inner.coeff(0) != 0:
        raise ValueError("series composition needs a zero constant term")
    out = Poly.zero()
    for c in reversed(p.coeffs):
        out = series_mul(out, inner, n) + Poly.const(c)
    return series_truncate(out, n)


def series_inverse(u: Poly, n: int) -> Poly:
    """1/u(x) mod x^n for a unit series (u(0) != 0), by Newton doubling."""
    c0 = u.coeff(0)
    if c0 == 0:
        raise ZeroDivisionError("series inverse of a non-unit")
    inv = Poly.const(1 / c0)
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        inv = series_truncate(inv.scale(2) - series_mul(series_mul(u, inv, prec), inv, prec), prec)
    return inv


def series_shift_down(p: Poly, k: int) -> Poly:
    """p / x^k, requiring valuation >= k."""
    if p.is_zero():
        return p
    if p.valuation() < k:
        raise ValueError("series valuation too small for the shift")
    return Poly.from_coeffs(p.coeffs[k:])


# -- Sturm machinery ---------------------------------------------------------


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(-r)
    return [q for q in seq if not q.is_zero()]


def _sign_changes(values: Sequence[Fraction]) -> int:
    signs = [v for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def _sturm_at(seq: Sequence[Poly], x: Fraction) -> int:
    return _sign_changes([q.eval(x) for q in seq])


def _sturm_at_inf(seq: Sequence[Poly], positive: bool) -> int:
    vals = []
    for q in seq:
        s = q.leading()
        if not positive and q.degree() % 2 == 1:
            s = -s
        vals.append(s)
    return _sign_changes(vals)


def count_roots(p: Poly, lo=None, hi=None) -> int:
    """Distinct real roots of p in (lo, hi]; open-ended when lo/hi is None."""
    if p.is_zero():
        raise ZeroPolynomial("root count of zero polynomial")
    sf = p.squarefree_part()
    if sf.degree() == 0:
        return 0
    seq = sturm_sequence(sf)
    a = _sturm_at_inf(seq, False) if lo is None else _sturm_at(seq, _as_fraction(lo))
    b = _sturm_at_inf(seq, True) if hi is None else _sturm_at(seq, _as_fraction(hi))
    return a - b


def root_bound(p: Poly) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    lead = abs(p.leading())
    return 1 + max(abs(c) for c in p.coeffs) / lead


@dataclass(frozen=True)
class RealRoot:
    """One real algebraic number: a squarefree defining polynomial plus an
    isolating interval.  lo == hi marks an exactly rational root."""

    poly: Poly
    lo: Fraction
    hi: Fraction
    multiplicity: int = 1

    def is_rational(self) -> bool:
        return self.lo == self.hi

    def value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("root is not known rational")
        return self.lo

    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def refined(self, width: Fraction) -> "RealRoot":
        """Shrink the isolating interval below the requested width by bisection."""
        if self.is_rational():
            return self
        lo, hi = self.lo, self.hi
        slo = _sign(self.poly.eval(lo))
        while hi - lo > width:
            mid = (lo + hi) / 2
            sm = _sign(self.poly.eval(mid))
            if sm == Sign.ZERO:
                return RealRoot(self.poly, mid, mid, self.multiplicity)
            if sm == slo:
                lo = mid
            else:
                hi = mid
        return RealRoot(self.poly, lo, hi, self.multiplicity)

    def float(self) -> float:
        r = self.refined(Fraction(1, 10**17))
        return float(r.mid())

    def compare(self, q) -> Sign:
        """Exact sign of (root - q) for rational q."""
        q = _as_fraction(q)
        if self.is_rational():
            return _sign(self.lo - q)
        if q <= self.lo:
            # root lies in (lo, hi); equality at lo only if poly(lo)=0
            if q == self.lo and self.poly.eval(q) == 0:
                return Sign.ZERO
            return Sign.POSITIVE
        if q >= self.hi:
            if q == self.hi and self.poly.eval(q) == 0:
                return Sign.ZERO
            return Sign.NEGATIVE
        if self.poly.eval(q) == 0:
            return Sign.ZERO
        # q sits inside the isolating interval: bisect around it
        if count_roots(self.poly, self.lo, q) == 1:
            return Sign.NEGATIVE
        return Sign.POSITIVE


@dataclass(frozen=True)
class RootList:
    roots: tuple[RealRoot, ...]

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __getitem__(self, i):
        return self.roots[i]

    def count_distinct(self) -> int:
        return len(self.roots)


def _isolate_squarefree(p: Poly, lo: Fraction, hi: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals for all roots of squarefree p in (lo, hi].

    With the drop-zeros convention, V(a) - V(b) counts roots in (a, b] even
    when an endpoint is itself a root, so midpoints hitting roots exactly
    need no special gap logic: they surface as point intervals.
    """
    seq = sturm_sequence(p)

    def count(a, b):
        return _sturm_at(seq, a) - _sturm_at(seq, b)

    out: list[tuple[Fraction, Fraction]] = []
    stack = [(lo, hi, count(lo, hi))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            if p.eval(b) == 0:
                out.append((b, b))
                continue
            if p.eval((a + b) / 2) == 0:
                m = (a + b) / 2
                out.append((m, m))
                continue
            # keep the left endpoint off roots so interval bisection can
            # steer by the sign of p there
            while p.eval(a) == 0:
                a2 = (a + b) / 2
                if count(a, a2) == 0:
                    a = a2
                else:
                    b = a2  # the single root is in (a, a2]; retry there
            out.append((a, b))
            continue
        m = (a + b) / 2
        stack.append((a, m, count(a, m)))
        stack.append((m, b, count(m, b)))
    out.sort(key=lambda ab: ab[0])
    return out


def real_roots(p: Poly, lo=None, hi=None) -> RootList:
    """All distinct real roots of p in the closed interval [lo, hi]
    (everything when unbounded), with multiplicities."""
    if p.is_zero():
        raise ZeroPolynomial("real_roots of zero polynomial")
    if p.degree() == 0:
        return RootList(())
    bound = root_bound(p)
    a = _as_fraction(lo) if lo is not None else -bound
    b = _as_fraction(hi) if hi is not None else bound
    found: list[RealRoot] = []
    val = p.valuation()
    if val > 0:
        if a <= 0 <= b:
            found.append(RealRoot(Poly.x(), Fraction(0), Fraction(0), val))
        p = Poly(p.coeffs[val:])
        if p.degree() == 0:
            return RootList(tuple(found))
    for factor, mult in p.squarefree_decomposition():
        if factor.degree() == 0:
            continue
        if lo is not None and factor.eval(a) == 0:
            found.append(RealRoot(factor, a, a, mult))
        for flo, fhi in _isolate_squarefree(factor, a, b):
            found.append(RealRoot(factor, flo, fhi, mult))
    # distinct squarefree factors have disjoint root sets, so refining any
    # overlapping intervals apart gives the true order
    found = _sort_disjoint(found)
    return RootList(tuple(found))


def _sort_disjoint(roots: list[RealRoot]) -> list[RealRoot]:
    roots = list(roots)
    changed = True
    width = Fraction(1, 16)
    while changed:
        overlap = False
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                a, b = roots[i], roots[j]
                if a.poly == b.poly:
                    continue
                if not (a.hi < b.lo or b.hi < a.lo or a.is_rational() and b.is_rational()):
                    overlap = True
        if overlap:
            roots = [r.refined(width) for r in roots]
            width /= 16
            changed = True
        else:
            changed = False
    roots.sort(key=lambda r: (r.lo, r.hi))
    return roots


def sign_at(f: Poly, root: RealRoot) -> Sign:
    """Exact sign of f evaluated at the algebraic number described by root."""
    if f.is_zero():
        return Sign.ZERO
    if root.is_rational():
        return _sign(f.eval(root.value()))
    common = f.gcd(root.poly)
    if not common.is_zero() and common.degree() > 0:
        if count_roots(common, root.lo, root.hi) == 1:
            return Sign.ZERO
    r = root
    while count_roots(f, r.lo, r.hi) > 0:
        r = r.refined((r.hi - r.lo) / 4)
        if r.is_rational():
            return _sign(f.eval(r.value()))
    return _sign(f.eval(r.mid()))


def compare_radical(lhs, base, num: int, den: int) -> Sign:
    """Exact sign of lhs - base**(num/den) for base > 0, num, den >= 1."""
    if den <= 0:
        raise InvalidExponent(f"den must be positive, got {den}")
    if num <= 0:
        raise InvalidExponent(f"num must be positive, got {num}")
    lhs = _as_fraction(lhs)
    base = _as_fraction(base)
    if base <= 0:
        raise ValueError("base must be positive")
    if lhs <= 0:
        return Sign.NEGATIVE
    return _sign(lhs**den - base**num)


# -- arithmetic in Q[y]/(g) ---------------------------------------------------


class QuotientRing:
    """Q[y]/(g) for squarefree g; elements are reduced Poly values.

    Used for center-manifold series whose base point is an algebraic number:
    coefficients live in this ring, and their sign at a chosen root of g is
    decided by sign_at.
    """

    def __init__(self, modulus: Poly):
        if modulus.is_zero() or modulus.degree() == 0:
            raise ZeroPolynomial("modulus must have positive degree")
        self.modulus = modulus.monic()

    def reduce(self, p: Poly) -> Poly:
        return p % self.modulus

    def mul(self, a: Poly, b: Poly) -> Poly:
        return (a * b) % self.modulus

    def inv(self, a: Poly) -> Poly:
        """Inverse of a modulo g via extended Euclid; a must be a unit."""
        r0, r1 = self.modulus, self.reduce(a)
        s0, s1 = Poly.zero(), Poly.one()
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r0.degree() != 0:
            raise ZeroDivisionError("element is not invertible in the quotient ring")
        return self.reduce(s0.scale(1 / r0.coeffs[0]))
