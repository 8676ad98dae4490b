"""Sparse bivariate vector fields, Newton polygons and blow-up charts.

A PlanarField holds x' = P(x, y), y' = Q(x, y) as exponent->coefficient
maps over exact rationals.  Support points follow the desingularization
convention: a P-monomial x^i y^j sits at (i-1, j), a Q-monomial at (i, j-1),
so the Newton polygon is the lower-left hull of that combined support.

Directional blow-up charts divide out the common quasi-homogeneous factor
(a positive time rescale on the visible half), so chart fields stay
polynomial and orientation-faithful where they are glued.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping

from .ratpoly import Poly, _as_fraction

Mono = tuple[int, int]
Coeffs = dict[Mono, Fraction]


def _clean(d: Coeffs) -> dict:
    return {k: v for k, v in d.items() if v != 0}


@dataclass(frozen=True)
class PlanarField:
    P: tuple[tuple[Mono, Fraction], ...]
    Q: tuple[tuple[Mono, Fraction], ...]

    @staticmethod
    def make(P: Mapping[Mono, object], Q: Mapping[Mono, object]) -> "PlanarField":
        p = _clean({k: _as_fraction(v) for k, v in P.items()})
        q = _clean({k: _as_fraction(v) for k, v in Q.items()})
        return PlanarField(tuple(sorted(p.items())), tuple(sorted(q.items())))

    @property
    def Pd(self) -> Coeffs:
        return dict(self.P)

    @property
    def Qd(self) -> Coeffs:
        return dict(self.Q)

    def is_zero(self) -> bool:
        return not self.P and not self.Q

    def eval(self, x, y):
        x, y = _as_fraction(x), _as_fraction(y)
        px = sum(c * x**i * y**j for (i, j), c in self.P)
        qx = sum(c * x**i * y**j for (i, j), c in self.Q)
        return px, qx

    def eval_float(self, x: float, y: float) -> tuple[float, float]:
        px = sum(float(c) * x**i * y**j for (i, j), c in self.P)
        qx = sum(float(c) * x**i * y**j for (i, j), c in self.Q)
        return px, qx

    def vanishes_at_origin(self) -> bool:
        return (0, 0) not in self.Pd and (0, 0) not in self.Qd

    # -- coordinate symmetries -------------------------------------------

    def x_flip(self) -> "PlanarField":
        """Field seen through x -> -x (time untouched)."""
        P = {(i, j): -((-1) ** i) * c for (i, j), c in self.P}
        Q = {(i, j): ((-1) ** i) * c for (i, j), c in self.Q}
        return PlanarField.make(P, Q)

    def y_flip(self) -> "PlanarField":
        P = {(i, j): ((-1) ** j) * c for (i, j), c in self.P}
        Q = {(i, j): -((-1) ** j) * c for (i, j), c in self.Q}
        return PlanarField.make(P, Q)

    def time_reverse(self) -> "PlanarField":
        return PlanarField.make({k: -c for k, c in self.P}, {k: -c for k, c in self.Q})

    def swap_axes(self) -> "PlanarField":
        """Exchange the roles of the two coordinates: (x,y) -> (y,x)."""
        P = {(j, i): c for (i, j), c in self.Q}
        Q = {(j, i): c for (i, j), c in self.P}
        return PlanarField.make(P, Q)

    def translate_y(self, a) -> "PlanarField":
        """Substitute y -> y + a (exact, for recursing at rational divisor roots)."""
        a = _as_fraction(a)

        def shift(terms):
            out: Coeffs = {}
            for (i, j), c in terms:
                row = Poly.from_terms({j: c}).shift(a)
                for e, cc in row.terms.items():
                    out[(i, e)] = out.get((i, e), Fraction(0)) + cc
            return out

        return PlanarField.make(shift(self.P), shift(self.Q))

    # -- support and polygon -----------------------------------------------

    def support(self) -> set[Mono]:
        pts = {(i - 1, j) for (i, j), _ in self.P}
        pts |= {(i, j - 1) for (i, j), _ in self.Q}
        return pts

    def newton_polygon(self) -> list["PolygonEdge"]:
        return newton_polygon(self.support())

    def min_qdegree(self, alpha: int, beta: int) -> int:
        degs = [alpha * i + beta * j - alpha for (i, j), _ in self.P]
        degs += [alpha * i + beta * j - beta for (i, j), _ in self.Q]
        if not degs:
            raise ValueError("zero field has no quasi-degree")
        return min(degs)

    def graded_components(self, alpha: int, beta: int) -> list[tuple[int, "PlanarField"]]:
        """Quasi-homogeneous slices of type (alpha, beta), ascending degree."""
        buckets: dict[int, tuple[Coeffs, Coeffs]] = {}
        for (i, j), c in self.P:
            k = alpha * i + beta * j - alpha
            buckets.setdefault(k, ({}, {}))[0][(i, j)] = c
        for (i, j), c in self.Q:
            k = alpha * i + beta * j - beta
            buckets.setdefault(k, ({}, {}))[1][(i, j)] = c
        return [(k, PlanarField.make(p, q)) for k, (p, q) in sorted(buckets.items())]


@dataclass(frozen=True)
class PolygonEdge:
    alpha: int
    beta: int
    delta: int
    points: tuple[Mono, ...]


def newton_polygon(support: set[Mono]) -> list[PolygonEdge]:
    """Edges of the lower-left Newton polygon, steepest first.

    Each edge carries coprime weights (alpha, beta) with
    alpha*u + beta*v = delta on the edge and > delta strictly below-left
    of no support point (the hull faces the origin).
    """
    if not support:
        return []
    # Pareto-minimal points: nothing else is <= in both coordinates
    pts = sorted(support)
    minimal = []
    for p in pts:
        if not any(q != p and q[0] <= p[0] and q[1] <= p[1] for q in pts):
            minimal.append(p)
    minimal.sort(key=lambda t: (t[0], -t[1]))
    # drop points not on the lower convex hull
    hull = []
    for p in minimal:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    edges = []
    for (u1, v1), (u2, v2) in zip(hull, hull[1:]):
        du, dv = u2 - u1, v2 - v1
        if du <= 0 or dv >= 0:
            continue  # vertical/horizontal faces are not blow-up edges
        alpha, beta = -dv, du
        g = gcd(alpha, beta)
        alpha, beta = alpha // g, beta // g
        delta = alpha * u1 + beta * v1
        on_edge = tuple(p for p in minimal if alpha * p[0] + beta * p[1] == delta)
        edges.append(PolygonEdge(alpha, beta, delta, on_edge))
    return edges


# -- directional blow-up charts ---------------------------------------------
#
# All charts are written back in the convention "first coordinate = radial
# (>= 0 on the glued side), divisor = {first coordinate = 0}".  Each chart
# divides by the positive factor radial^delta, so time orientation is kept.


def blowup_x_positive(field: PlanarField, alpha: int, beta: int) -> PlanarField:
    """x = u^alpha, y = u^beta v; returns the (u, v) chart field."""
    delta = field.min_qdegree(alpha, beta)
    P: Coeffs = {}
    Q: Coeffs = {}
    for (i, j), c in field.P:
        k = alpha * i + beta * j - alpha
        key = (k - delta + 1, j)
        P[key] = P.get(key, Fraction(0)) + c
        key = (k - delta, j + 1)
        Q[key] = Q.get(key, Fraction(0)) - beta * c
    for (i, j), c in field.Q:
        k = alpha * i + beta * j - beta
        key = (k - delta, j)
        Q[key] = Q.get(key, Fraction(0)) + alpha * c
    return PlanarField.make(P, Q)


def blowup_x_negative(field: PlanarField, alpha: int, beta: int) -> PlanarField:
    """x = -u^alpha, y = u^beta v (u >= 0 covers x < 0)."""
    return blowup_x_positive(field.x_flip(), alpha, beta)


def blowup_y_positive(field: PlanarField, alpha: int, beta: int) -> PlanarField:
    """x = w z^alpha, y = z^beta; returned swapped as (z, w) so the divisor
    z = 0 is the first coordinate."""
    delta = field.min_qdegree(alpha, beta)
    W: Coeffs = {}
    Z: Coeffs = {}
    for (i, j), c in field.P:
        k = alpha * i + beta * j - alpha
        key = (i, k - delta)
        W[key] = W.get(key, Fraction(0)) + beta * c
    for (i, j), c in field.Q:
        k = alpha * i + beta * j - beta
        key = (i + 1, k - delta)
        W[key] = W.get(key, Fraction(0)) - alpha * c
        key = (i, k - delta + 1)
        Z[key] = Z.get(key, Fraction(0)) + c
    # swap (w, z) -> (z, w)
    return PlanarField.make({(j, i): c for (i, j), c in Z.items()},
                            {(j, i): c for (i, j), c in W.items()})


def blowup_y_negative(field: PlanarField, alpha: int, beta: int) -> PlanarField:
    """x = w z^alpha, y = -z^beta, swapped to (z, w)."""
    return blowup_y_positive(field.y_flip(), alpha, beta)


# -- Poincare compactification charts ----------------------------------------


def total_degree(field: PlanarField) -> int:
    degs = [i + j for (i, j), _ in field.P] + [i + j for (i, j), _ in field.Q]
    return max(degs) if degs else 0


def poincare_chart_u(field: PlanarField, degree: int | None = None) -> PlanarField:
    """Chart x = 1/v, y = u/v, multiplied by v^(degree-1); covers x -> +-inf.

    Returned in (u, v) with the equator at v = 0; the second coordinate is
    the radial one here, callers wanting the divisor-first convention swap.
    """
    d = total_degree(field) if degree is None else degree
    U: Coeffs = {}
    V: Coeffs = {}
    for (i, j), c in field.Q:  # u' gets +Q-hat
        key = (j, d - i - j)
        U[key] = U.get(key, Fraction(0)) + c
    for (i, j), c in field.P:  # u' gets -u P-hat, v' gets -v P-hat
        key = (j + 1, d - i - j)
        U[key] = U.get(key, Fraction(0)) - c
        key = (j, d - i - j + 1)
        V[key] = V.get(key, Fraction(0)) - c
    return PlanarField.make(U, V)


def poincare_chart_v(field: PlanarField, degree: int | None = None) -> PlanarField:
    """Chart x = u/v, y = 1/v, multiplied by v^(degree-1); covers y -> +-inf."""
    d = total_degree(field) if degree is None else degree
    U: Coeffs = {}
    V: Coeffs = {}
    for (i, j), c in field.P:  # u' gets +P-hat2
        key = (i, d - i - j)
        U[key] = U.get(key, Fraction(0)) + c
    for (i, j), c in field.Q:  # u' gets -u Q-hat2, v' gets -v Q-hat2
        key = (i + 1, d - i - j)
        U[key] = U.get(key, Fraction(0)) - c
        key = (i, d - i - j + 1)
        V[key] = V.get(key, Fraction(0)) - c
    return PlanarField.make(U, V)


def equator_antipode(chart: PlanarField, degree: int) -> PlanarField:
    """Rebuild a Poincare chart field for the lower side v < 0 as a v > 0
    field in true time: w = -v, components twisted by (-1)^(degree-1)."""
    s = 1 if (degree - 1) % 2 == 0 else -1
    U = {(i, j): s * ((-1) ** j) * c for (i, j), c in chart.P}
    V = {(i, j): -s * ((-1) ** j) * c for (i, j), c in chart.Q}
    return PlanarField.make(U, V)


def lienard_field(sys) -> PlanarField:
    """x' = phi(y) - F(x), y' = -g(x) as a PlanarField."""
    P: Coeffs = {}
    for j, c in sys.phi.terms.items():
        P[(0, j)] = c
    for i, c in sys.F.terms.items():
        P[(i, 0)] = P.get((i, 0), Fraction(0)) - c
    Q = {(i, 0): -c for i, c in sys.g.terms.items()}
    return PlanarField.make(P, Q)
