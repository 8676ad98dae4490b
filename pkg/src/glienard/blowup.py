"""Recursive quasi-homogeneous blow-up and blow-down of planar singularities.

The resolver works on chart fields written in a fixed convention: the first
coordinate is radial (the exceptional divisor is {first = 0}, only its
non-negative side is glued back), the second runs along the divisor.  Each
divisor equilibrium is classified into "atoms": transverse separatrices and
parabolic bands, the only characteristic objects a blown-down singular point
can show.  Gluing the chart chains and reading the flow between consecutive
atoms yields the cyclic sector sequence (hyperbolic / elliptic / parabolic)
of the original point, its monodromy flag, and its index.

Chains are lists of ('arc', dir) and ('atom', Atom) in counterclockwise
order; dir = +1 means the divisor flow runs list-forward.  Orientation
bookkeeping follows the chart parities: x-positive and y-negative charts
preserve the parent orientation, x-negative and y-positive reverse it.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

from .planar import (
    PlanarField,
    PolygonEdge,
    blowup_x_negative,
    blowup_x_positive,
    blowup_y_negative,
    blowup_y_positive,
)
from .ratpoly import (
    Poly,
    QuotientRing,
    RealRoot,
    Sign,
    count_roots,
    real_roots,
    sign_at,
)


class RecursionLimitExceeded(RuntimeError):
    pass


class UnresolvedEquilibrium(RuntimeError):
    """The resolver met a configuration outside its (documented) reach."""


class NonElementaryResidue(UnresolvedEquilibrium):
    """A divisor equilibrium at an irrational position needs a deeper blow-up."""


class DegenerateSupport(UnresolvedEquilibrium):
    pass


@dataclass(frozen=True)
class Atom:
    kind: str  # 'sep' | 'par'
    out: bool  # True: orbits emanate (alpha-limit is the point)

    def flipped_time(self) -> "Atom":
        return Atom(self.kind, not self.out)

    def short(self) -> str:
        return f"{self.kind}_{'out' if self.out else 'in'}"


Elem = tuple  # ('arc', int) or ('atom', Atom)


def rev_chain(chain: list[Elem]) -> list[Elem]:
    out = []
    for tag, val in reversed(chain):
        out.append((tag, -val) if tag == "arc" else (tag, val))
    return out


def chain_atoms(chain: list[Elem]) -> list[Atom]:
    return [v for t, v in chain if t == "atom"]


# -- helpers on convention fields ---------------------------------------------
#
# convention: first coordinate radial, divisor {first = 0}, glued side >= 0.


def _radial_cofactor_slice(f: PlanarField) -> Poly:
    """A(0, v) where P = u * A(u, v); raises if the divisor is not invariant."""
    terms = {}
    for (i, j), c in f.P:
        if i == 0:
            raise ValueError("divisor is not invariant (first component not divisible)")
        if i == 1:
            terms[j] = c
    return Poly.from_terms(terms)


def _divisor_poly(f: PlanarField) -> Poly:
    """D(v) = Q(0, v): the flow along the divisor."""
    return Poly.from_terms({j: c for (i, j), c in f.Q if i == 0})


def _strip_common_radial(f: PlanarField) -> tuple[PlanarField, int]:
    """Divide both components by the largest common power of the radial
    coordinate (a positive rescale on the glued side)."""
    if f.is_zero():
        return f, 0
    c = min(min(i for (i, j), _ in f.P), min(i for (i, j), _ in f.Q))
    if c <= 0:
        return f, 0
    P = {(i - c, j): v for (i, j), v in f.P}
    Q = {(i - c, j): v for (i, j), v in f.Q}
    return PlanarField.make(P, Q), c


def _separating_samples(roots: list[RealRoot], low_bound: Optional[Fraction]) -> list[Fraction]:
    """Rational points s_0 < r_1 < s_1 < ... < r_k < s_k strictly separating
    the (refined) isolating intervals; low_bound bounds s_0 from below."""
    roots = list(roots)
    width = Fraction(1, 4)
    while True:
        ok = True
        for a, b in zip(roots, roots[1:]):
            if not a.hi < b.lo:
                ok = False
        if low_bound is not None and roots and not low_bound < roots[0].lo:
            if not (roots[0].is_rational() and roots[0].lo > low_bound):
                ok = False
        if ok:
            break
        roots = [r.refined(width) for r in roots]
        width /= 16
    samples = []
    if roots:
        first = roots[0]
        samples.append((low_bound + first.lo) / 2 if low_bound is not None else first.lo - 1)
        for a, b in zip(roots, roots[1:]):
            samples.append((a.hi + b.lo) / 2)
        samples.append(roots[-1].hi + 1)
    else:
        samples.append(low_bound + 1 if low_bound is not None else Fraction(0))
    return samples


_SERIES_CAP = 128


def _semihyperbolic_reduction(f: PlanarField, root: RealRoot) -> tuple[int, Sign]:
    """Center-manifold reduction at a divisor point (0, v0) with zero radial
    eigenvalue and simple divisor root: returns (K, sign) where the reduced
    radial equation is u' = c u^(K+1) + ... and sign = sign(c) at v0.

    Coefficients live in Q[v]/(g) for the squarefree g defining v0, so the
    computation is exact even at irrational positions.
    """
    D = _divisor_poly(f)
    Dp = D.derivative()
    # the root is simple in D, so D' does not vanish there; divide the
    # defining polynomial by any factor shared with D' to make D' a unit
    g = root.poly
    h = g.gcd(Dp)
    if h.degree() > 0:
        g = (g.divmod(h)[0]).monic()
    ring = QuotientRing(g)
    lam_inv = ring.inv(Dp % g)

    # group the field monomials by their v-exponent once
    def by_vexp(terms):
        rows: dict[int, Poly] = {}
        for (i, j), c in terms:
            rows.setdefault(j, {})
            rows[j][i] = rows[j].get(i, Fraction(0)) + c
        return {j: Poly.from_terms(row) for j, row in rows.items()}

    q_rows = by_vexp(f.Q)
    a_rows = by_vexp(tuple((((i - 1), j), c) for (i, j), c in f.P))

    def eval_series(rows, lam_coeffs, N):
        """sum_j rows[j](u) * Lambda(u)^j mod u^(N+1), coefficients in ring."""
        maxj = max(rows) if rows else 0
        powers = [[Poly.one()] + [Poly.zero()] * N]
        for _ in range(maxj):
            prev = powers[-1]
            nxt = [Poly.zero()] * (N + 1)
            for i in range(N + 1):
                if prev[i].is_zero():
                    continue
                for k in range(N + 1 - i):
                    if not lam_coeffs[k].is_zero():
                        nxt[i + k] = ring.reduce(nxt[i + k] + ring.mul(prev[i], lam_coeffs[k]))
            powers.append(nxt)
        out = [Poly.zero()] * (N + 1)
        for j, row in rows.items():
            for i, c in row.terms.items():
                if i > N:
                    continue
                pj = powers[j]
                for k in range(N + 1 - i):
                    if not pj[k].is_zero():
                        out[i + k] = ring.reduce(out[i + k] + pj[k].scale(c))
        return out

    N = 8
    while True:
        # Lambda = v + lam_1 u + ... solving Q(u, Lambda(u)) = 0 in the ring
        lam = [ring.reduce(Poly.x())] + [Poly.zero()] * N
        for k in range(1, N + 1):
            e = eval_series(q_rows, lam, k)[k]
            if not e.is_zero():
                lam[k] = ring.reduce(-ring.mul(e, lam_inv))
        sigma = eval_series(a_rows, lam, N)
        for k in range(1, N + 1):
            s = sign_at(sigma[k], root) if not sigma[k].is_zero() else Sign.ZERO
            if s != Sign.ZERO:
                return k, s
        if N >= _SERIES_CAP:
            raise UnresolvedEquilibrium("center-manifold reduction found no nonzero term")
        N *= 2


def _flank_band(side_sign: Sign, below: bool, s_radial: Sign) -> Optional[Atom]:
    """Parabolic band beside a divisor equilibrium: present when the divisor
    flow on that side runs toward the point and the transverse rate attracts,
    or both repel."""
    toward = side_sign > 0 if below else side_sign < 0
    if toward and s_radial < 0:
        return Atom("par", False)
    if not toward and s_radial > 0:
        return Atom("par", True)
    return None


@dataclass
class Trace:
    lines: list[str] = dc_field(default_factory=list)
    depth: int = 0

    def log(self, text: str):
        self.lines.append("  " * self.depth + text)

    def push(self):
        self.depth += 1

    def pop(self):
        self.depth -= 1


def point_elements(
    f: PlanarField,
    root: RealRoot,
    flanks: tuple[Sign, Sign],
    depth: int,
    limit: int,
    trace: Trace,
) -> list[Elem]:
    """Chain elements contributed by the divisor equilibrium at (0, root)."""
    A0 = _radial_cofactor_slice(f)
    sA = sign_at(A0, root) if not A0.is_zero() else Sign.ZERO
    mult = root.multiplicity
    s_lo, s_hi = flanks
    pos = f"v in ({root.lo},{root.hi})" if not root.is_rational() else f"v = {root.lo}"
    if sA != Sign.ZERO:
        atoms = []
        b = _flank_band(s_lo, True, sA)
        if b:
            atoms.append(b)
        atoms.append(Atom("sep", sA > 0))
        b = _flank_band(s_hi, False, sA)
        if b:
            atoms.append(b)
        kind = "hyperbolic" if mult == 1 else "divisor-saddle-node"
        trace.log(f"equilibrium {pos}: {kind}, radial {int(sA):+d}, divisor sides ({int(s_lo):+d},{int(s_hi):+d})")
        return [("atom", a) for a in atoms]
    if mult == 1:
        K, c_sign = _semihyperbolic_reduction(f, root)
        lamv = s_hi
        trace.log(
            f"equilibrium {pos}: semi-hyperbolic, reduced u' ~ c u^{K + 1} with sign {int(c_sign):+d}, divisor rate {int(lamv):+d}"
        )
        if int(c_sign) * int(lamv) < 0:
            return [("atom", Atom("sep", c_sign > 0))]
        return [("atom", Atom("par", c_sign > 0))]
    # fully degenerate point on the divisor: blow it up in place
    if not root.is_rational():
        raise NonElementaryResidue("non-elementary divisor equilibrium at an irrational position")
    trace.log(f"equilibrium {pos}: non-elementary, recursing")
    sub = f.translate_y(root.value())
    return resolve_half(sub, depth + 1, limit, trace)


def axis_chain(
    f: PlanarField,
    depth: int,
    limit: int,
    trace: Trace,
    positive_only: bool = False,
) -> list[Elem]:
    """Arcs and equilibria along the divisor of a radial-convention chart."""
    f2, stripped = _strip_common_radial(f)
    if stripped:
        # the divisor flow vanished identically: after the extra rescale
        # orbits cross the divisor
        return _dicritical_chain(f2, positive_only, trace)
    D = _divisor_poly(f)
    low = Fraction(0) if positive_only else None
    roots = [r for r in real_roots(D) if not positive_only or r.compare(0) == Sign.POSITIVE]
    roots = _refine_past_zero(roots) if positive_only else roots
    samples = _separating_samples(roots, low)
    dirs = [Sign.POSITIVE if D.eval(s) > 0 else Sign.NEGATIVE for s in samples]
    trace.log(f"divisor polynomial: {D}; {len(roots)} equilibria" + (" (v > 0)" if positive_only else ""))
    chain: list[Elem] = [("arc", int(dirs[0]))]
    for k, root in enumerate(roots):
        chain.extend(point_elements(f, root, (dirs[k], dirs[k + 1]), depth, limit, trace))
        chain.append(("arc", int(dirs[k + 1])))
    return chain


def _refine_past_zero(roots: list[RealRoot]) -> list[RealRoot]:
    out = []
    for r in roots:
        while not r.is_rational() and r.lo <= 0:
            r = r.refined((r.hi - r.lo) / 4)
        out.append(r)
    return out


def _dicritical_chain(f: PlanarField, positive_only: bool, trace: Trace) -> list[Elem]:
    """Divisor flow vanishes identically: orbits cross the divisor; after the
    extra rescale the crossing direction is the radial-component sign."""
    A0 = Poly.from_terms({j: c for (i, j), c in f.P if i == 0})
    if A0.is_zero():
        raise UnresolvedEquilibrium("dicritical divisor with vanishing crossing rate")
    lo = Fraction(0) if positive_only else None
    if count_roots(A0, lo, None) > 0:
        raise UnresolvedEquilibrium("dicritical divisor with tangency points")
    probe = A0.eval((lo if lo is not None else 0) + 1)
    trace.log(f"dicritical divisor, crossing sign {'+' if probe > 0 else '-'}")
    return [("atom", Atom("par", probe > 0))]


def _corner_factors(f: PlanarField) -> tuple[Fraction, Fraction]:
    """(P/a)(0,0) and (Q/b)(0,0) for a corner field with both axes invariant."""
    for (i, j), _ in f.P:
        if i == 0:
            raise ValueError("corner: first axis not invariant")
    for (i, j), _ in f.Q:
        if j == 0:
            raise ValueError("corner: second axis not invariant")
    f0 = f.Pd.get((1, 0), Fraction(0))
    g0 = f.Qd.get((0, 1), Fraction(0))
    return f0, g0


def _axis_restriction(terms, along_first: bool) -> Poly:
    """(P/a)(a, 0) or (Q/b)(0, b) as a univariate polynomial."""
    if along_first:
        return Poly.from_terms({i - 1: c for (i, j), c in terms if j == 0})
    return Poly.from_terms({j - 1: c for (i, j), c in terms if i == 0})


def corner_chain(f: PlanarField, depth: int, limit: int, trace: Trace) -> list[Elem]:
    """Characteristic structure inside the quadrant of a corner equilibrium,
    ordered from the first-axis ray to the second-axis ray."""
    if depth > limit:
        raise RecursionLimitExceeded(f"corner recursion beyond depth {limit}")
    f0, g0 = _corner_factors(f)
    if f0 != 0 and g0 != 0:
        if (f0 > 0) == (g0 > 0):
            trace.log(f"corner: node ({'out' if f0 > 0 else 'in'})")
            return [("atom", Atom("par", f0 > 0))]
        trace.log("corner: saddle (flow-by)")
        return []
    if (f0 == 0) != (g0 == 0):
        if f0 == 0:
            red = _axis_restriction(f.P, True)
            other = g0
        else:
            red = _axis_restriction(f.Q, False)
            other = f0
        if not red.is_zero():
            c = red.coeffs[red.valuation()]
            trace.log(
                f"corner: semi-hyperbolic, reduced rate {'+' if c > 0 else '-'} vs transverse {'+' if other > 0 else '-'}"
            )
            if (c > 0) == (other > 0):
                return [("atom", Atom("par", c > 0))]
            return []
        raise UnresolvedEquilibrium("corner with a line of equilibria along one axis")
    # both factors vanish: blow the corner up
    edges = f.newton_polygon()
    if not edges:
        raise DegenerateSupport("corner blow-up with no polygon edge")
    e = edges[0]
    trace.log(f"corner blow-up, weights ({e.alpha},{e.beta})")
    trace.push()
    x3 = blowup_x_positive(f, e.alpha, e.beta)
    y3 = blowup_y_positive(f, e.alpha, e.beta)
    chain = corner_chain(x3, depth + 1, limit, trace)
    chain += axis_chain(x3, depth, limit, trace, positive_only=True)
    chain += rev_chain(corner_chain(y3, depth + 1, limit, trace))
    trace.pop()
    return chain


def resolve_half(f: PlanarField, depth: int, limit: int, trace: Trace) -> list[Elem]:
    """Resolve a non-elementary equilibrium sitting on an invariant line,
    returning the chain across its glued half-plane (radial side > 0), from
    the negative to the positive along-axis ray."""
    if depth > limit:
        raise RecursionLimitExceeded(f"blow-up recursion beyond depth {limit}")
    edges = f.newton_polygon()
    if not edges:
        raise DegenerateSupport("half-plane blow-up with no polygon edge")
    e = edges[0]
    trace.log(f"half blow-up, weights ({e.alpha},{e.beta}), delta {e.delta}")
    trace.push()
    south = corner_chain(blowup_y_negative(f, e.alpha, e.beta), depth + 1, limit, trace)
    mid = axis_chain(blowup_x_positive(f, e.alpha, e.beta), depth, limit, trace)
    north = rev_chain(corner_chain(blowup_y_positive(f, e.alpha, e.beta), depth + 1, limit, trace))
    trace.pop()
    return south + mid + north


def _pole_elements(
    chart: PlanarField, depth: int, limit: int, trace: Trace, name: str
) -> list[Elem]:
    """Contribution of a y-direction pole at depth 0 (w = 0 on its divisor);
    chart comes swapped so the divisor is the first coordinate."""
    chart2, stripped = _strip_common_radial(chart)
    if stripped:
        return _dicritical_chain(chart2, False, trace)
    D = _divisor_poly(chart)
    if D.eval(0) != 0:
        return []
    roots = list(real_roots(D))
    idx = next(k for k, r in enumerate(roots) if r.compare(0) == Sign.ZERO)
    samples = _separating_samples(roots, None)
    flanks = (
        Sign.POSITIVE if D.eval(samples[idx]) > 0 else Sign.NEGATIVE,
        Sign.POSITIVE if D.eval(samples[idx + 1]) > 0 else Sign.NEGATIVE,
    )
    trace.log(f"{name} pole is an equilibrium")
    return point_elements(chart, roots[idx], flanks, depth, limit, trace)


def resolve_full(f: PlanarField, limit: int = 6, trace: Optional[Trace] = None) -> tuple[list[Elem], Trace]:
    """Full cycle of chain elements around an isolated singular point at the
    origin of an arbitrary polynomial field."""
    trace = trace or Trace()
    if not f.vanishes_at_origin():
        raise ValueError("origin is not an equilibrium")
    edges = f.newton_polygon()
    if not edges:
        raise DegenerateSupport("no Newton polygon edge at the origin")
    e = edges[0]
    trace.log(f"blow-up at origin, weights ({e.alpha},{e.beta}), delta {e.delta}")
    trace.push()
    trace.log("x+ chart:")
    trace.push()
    cyc = axis_chain(blowup_x_positive(f, e.alpha, e.beta), 0, limit, trace)
    trace.pop()
    trace.log("north pole:")
    trace.push()
    cyc += rev_chain(_pole_elements(blowup_y_positive(f, e.alpha, e.beta), 0, limit, trace, "north"))
    trace.pop()
    trace.log("x- chart:")
    trace.push()
    cyc += rev_chain(axis_chain(blowup_x_negative(f, e.alpha, e.beta), 0, limit, trace))
    trace.pop()
    trace.log("south pole:")
    trace.push()
    cyc += _pole_elements(blowup_y_negative(f, e.alpha, e.beta), 0, limit, trace, "south")
    trace.pop()
    trace.pop()
    return cyc, trace


# -- sector reading -----------------------------------------------------------


@dataclass(frozen=True)
class SectorSequence:
    """Cyclic sector list around a singular point.

    sectors use tokens 'H', 'E', 'Pi', 'Po'; monodromic points have an empty
    sequence and a rotation sense instead.
    """

    sectors: tuple[str, ...]
    monodromic: bool
    rotation: int  # +1 counterclockwise (meaningful when monodromic)

    def index(self) -> Fraction:
        e = sum(1 for s in self.sectors if s == "E")
        h = sum(1 for s in self.sectors if s == "H")
        if self.monodromic:
            return Fraction(1)
        return 1 + Fraction(e - h, 2)

    def canonical(self) -> tuple:
        return canonical_class(self.sectors, self.monodromic)


def _merge_cycle(cycle: list[Elem]) -> tuple[list[Atom], list[list[int]]]:
    """Split the cyclic element list into atoms and the arc runs between
    consecutive atoms (cyclically)."""
    atoms: list[Atom] = []
    positions: list[int] = []
    for k, (tag, val) in enumerate(cycle):
        if tag == "atom":
            atoms.append(val)
            positions.append(k)
    gaps = []
    n = len(cycle)
    for i, pos in enumerate(positions):
        nxt = positions[(i + 1) % len(positions)]
        run = []
        k = (pos + 1) % n
        while k != nxt:
            tag, val = cycle[k]
            if tag == "arc":
                run.append(val)
            k = (k + 1) % n
        gaps.append(run)
    return atoms, gaps


def sectors_from_cycle(cycle: list[Elem]) -> SectorSequence:
    atoms, gaps = _merge_cycle(cycle)
    if not atoms:
        dirs = {val for tag, val in cycle if tag == "arc"}
        if len(dirs) > 1:
            raise UnresolvedEquilibrium("empty atom cycle with inconsistent arc flow")
        rot = dirs.pop() if dirs else 1
        return SectorSequence((), True, rot)
    sectors = []
    n = len(atoms)
    for i in range(n):
        a, b = atoms[i], atoms[(i + 1) % n]
        run = [d for d in gaps[i] if d != 0]
        if run:
            if len(set(run)) > 1:
                raise UnresolvedEquilibrium("inconsistent divisor flow between atoms")
            start, end = (a, b) if run[0] > 0 else (b, a)
            sectors.append(_sector_type(start, end))
        else:
            sectors.append(_gapless_sector(a, b))
    return SectorSequence(tuple(sectors), False, 0)


def _sector_type(start: Atom, end: Atom) -> str:
    ok_start = (start.kind == "sep" and not start.out) or (start.kind == "par" and start.out)
    ok_end = (end.kind == "sep" and end.out) or (end.kind == "par" and not end.out)
    if not (ok_start and ok_end):
        # degenerate adjacency (bands overlapping fibers): fall back on types
        return _gapless_sector(start, end)
    if start.kind == "sep" and end.kind == "sep":
        return "H"
    if start.kind == "par" and end.kind == "par":
        return "E"
    return "Pi" if (end.kind == "par" and not end.out) or (start.kind == "sep") else "Po"


def _gapless_sector(a: Atom, b: Atom) -> str:
    """Sector squeezed between two characteristic atoms with no divisor arc
    between them: same orientation means a parabolic wedge, mixed orientation
    is hyperbolic unless both sides are full bands (then elliptic)."""
    if a.out == b.out:
        return "Po" if a.out else "Pi"
    if a.kind == "par" and b.kind == "par":
        return "E"
    return "H"


def canonical_class(sectors: tuple[str, ...], monodromic: bool) -> tuple:
    """Reduce a sector cycle to its comparison form: parabolic sectors merge
    and are absorbed by adjacent elliptic sectors; orientation is dropped."""
    if monodromic:
        return ("monodromic",)
    toks = ["P" if s in ("Pi", "Po") else s for s in sectors]
    changed = True
    while changed and toks:
        changed = False
        n = len(toks)
        for i in range(n):
            if toks[i] == "P" and (toks[(i - 1) % n] == "E" or toks[(i + 1) % n] == "E"):
                toks.pop(i)
                changed = True
                break
            if toks[i] == "P" and toks[(i + 1) % n] == "P" and n > 1:
                toks.pop(i)
                changed = True
                break
    if not toks or all(t == "P" for t in toks):
        return ("node",)
    return _min_rotation(tuple(toks))


def _min_rotation(t: tuple) -> tuple:
    cands = [t[i:] + t[:i] for i in range(len(t))]
    return min(cands)


def classes_equal(a: tuple, b: tuple, allow_reflection: bool = True) -> bool:
    if a == b:
        return True
    if allow_reflection and len(a) == len(b) and a and a[0] not in ("monodromic", "node"):
        return _min_rotation(tuple(reversed(b))) == a
    return False


# -- public oracle ------------------------------------------------------------


@dataclass(frozen=True)
class OraclePortrait:
    sectors: SectorSequence
    atoms: tuple[Atom, ...]
    dump: str

    @property
    def monodromic(self) -> bool:
        return self.sectors.monodromic

    def canonical(self) -> tuple:
        return self.sectors.canonical()

    def index(self) -> Fraction:
        return self.sectors.index()


def local_portrait_oracle(field: PlanarField, recursion_limit: int = 6) -> OraclePortrait:
    """Blow-up/blow-down portrait of the isolated singular point at the
    origin: the independent check behind the origin decision table."""
    cycle, trace = resolve_full(field, recursion_limit)
    seq = sectors_from_cycle(cycle)
    return OraclePortrait(seq, tuple(chain_atoms(cycle)), "\n".join(trace.lines))
