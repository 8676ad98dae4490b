"""Classification near the equator of the Poincare disc (ell >= 2).

The decision table keys on the case partition by (ell, m, n), the parity/sign
situations, and exact threshold comparisons; situations not listed in a case
block are routed through the symmetry group first.  The equator oracle
rebuilds the same answer mechanically: both Poincare charts (and their
antipodal rebuilds) are scanned for equator equilibria, each is resolved by
the blow-up machinery, and the glued cycle yields the monodromy flag, the
per-point structures, and the sphere indices for the index gate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Optional

from .blowup import (
    _gapless_sector,
    Atom,
    Elem,
    Trace,
    chain_atoms,
    point_elements,
    rev_chain,
    sectors_from_cycle,
    _divisor_poly,
    _pole_elements,
    _separating_samples,
)
from .planar import (
    PlanarField,
    equator_antipode,
    lienard_field,
    poincare_chart_u,
    poincare_chart_v,
    total_degree,
)
from .ratpoly import Poly, Sign, real_roots
from .system import (
    SYMMETRY_GROUP,
    GeneralizedLienardSystem,
    SymmetryTransform,
    TimeRescaleRecord,
    c_star_comparator,
    c_star_upper_comparator,
    normalize_time,
)


class EllOne(ValueError):
    """ell = 1 is the classical case, delegated to prior work; out of scope."""


class UnclassifiedByTable(RuntimeError):
    pass


def _require_ell2(sys: GeneralizedLienardSystem):
    if sys.ell < 2:
        raise EllOne("infinity classification requires ell >= 2")


# -- charts -------------------------------------------------------------------


@dataclass(frozen=True)
class PoincareCharts:
    chart_U: PlanarField  # x = 1/v, y = u/v, times v^(d-1)
    chart_V: PlanarField  # x = u/v, y = 1/v, times v^(d-1)
    degree: int


def poincare_charts(sys: GeneralizedLienardSystem) -> PoincareCharts:
    _require_ell2(sys)
    fld = lienard_field(sys)
    d = total_degree(fld)
    return PoincareCharts(poincare_chart_u(fld, d), poincare_chart_v(fld, d), d)


# -- case partition and situations ---------------------------------------------


def infinity_case(sys: GeneralizedLienardSystem) -> str:
    ell, m, n = sys.ell, sys.m, sys.n
    if n == m == ell:
        return "C1"
    if n == m > ell:
        return "C2"
    if n == ell > m:
        return "C3"
    if n > max(ell, m):
        return "C4"
    if m == ell > n:
        return "C5"
    if m > max(ell, n):
        return "C6"
    return "C7"


def _situation_S(sys: GeneralizedLienardSystem) -> Optional[str]:
    """S1..S12 label of an a_ell = -1 normalized system, if its parity/sign
    pattern is one of the listed twelve."""
    ell, m, n = sys.ell, sys.m, sys.n
    b, c = sys.b(m), sys.c(n)
    key = (ell % 2, m % 2, n % 2, b > 0, c > 0)
    table = {
        (1, 1, 1, True, True): "S1",
        (1, 1, 1, True, False): "S2",
        (1, 1, 0, True, True): "S3",
        (1, 0, 1, True, True): "S4",
        (1, 0, 1, True, False): "S5",
        (1, 0, 0, True, True): "S6",
        (0, 1, 1, True, True): "S7",
        (0, 1, 0, True, True): "S8",
        (0, 0, 1, True, True): "S9",
        (0, 0, 1, False, True): "S10",
        (0, 0, 0, True, True): "S11",
        (0, 0, 0, False, True): "S12",
    }
    return table.get(key)


def _situation_T(sys: GeneralizedLienardSystem) -> Optional[str]:
    ell, n = sys.ell, sys.n
    c = sys.c(n)
    key = (ell % 2, n % 2, c > 0)
    table = {
        (1, 1, True): "T1",
        (1, 1, False): "T2",
        (1, 0, True): "T3",
        (0, 1, True): "T4",
        (0, 0, True): "T5",
    }
    return table.get(key)


@dataclass(frozen=True)
class InfinityClass:
    portrait: str  # 'fig8-a' .. 'fig8-x'
    case_label: str  # 'C1' .. 'C7'
    sub_branch: str  # second-column condition of the row block
    situation: str  # 'S1'..'S12' or 'T1'..'T5'
    monodromy: Optional[str]  # None | 'W1' | 'W2' | 'W3'
    applied_symmetry: SymmetryTransform
    time_record: TimeRescaleRecord

    @property
    def monodromic(self) -> bool:
        return self.monodromy is not None

    def describe(self) -> dict:
        return {
            "portrait": self.portrait,
            "case": self.case_label,
            "sub_branch": self.sub_branch,
            "situation": self.situation,
            "monodromy": self.monodromy,
            "applied_symmetry": self.applied_symmetry.describe(),
            "time_rescale": self.time_record.describe(),
        }


def monodromy_infinity(sys: GeneralizedLienardSystem) -> Optional[str]:
    """W1: ell(n+1) > (ell+1)m, m <= n, ell and n odd, c_n < 0.
    W2: ell = m = n odd, b_m > 0, c_n < -c_*.
    W3: ell(n+1) = (ell+1)m, n >= m+1, ell and n odd, c_n < -c^*.
    Stated for a_ell = -1, applied here."""
    _require_ell2(sys)
    ns, _ = normalize_time(sys, anchor="ell")
    ell, m, n = ns.ell, ns.m, ns.n
    b, c = ns.b(m), ns.c(n)
    gap = ell * (n + 1) - (ell + 1) * m
    if gap > 0 and m <= n and ell % 2 == 1 and n % 2 == 1 and c < 0:
        return "W1"
    if ell == m == n and ell % 2 == 1 and b > 0:
        if _below_minus(c_star_comparator(ns), c):
            return "W2"
    if gap == 0 and n >= m + 1 and ell % 2 == 1 and n % 2 == 1:
        if _below_minus(c_star_upper_comparator(ns), c):
            return "W3"
    return None


def _below_minus(comparator, x) -> bool:
    """x < -value, exactly."""
    return comparator.compare(-x) == Sign.POSITIVE


def _vs_minus(comparator, x) -> Sign:
    """sign(x - (-value))"""
    return Sign(-int(comparator.compare(-x)))


def classify_infinity(sys: GeneralizedLienardSystem) -> InfinityClass:
    _require_ell2(sys)
    ns, rec = normalize_time(sys, anchor="ell")
    case = infinity_case(ns)
    mono = monodromy_infinity(sys)

    uses_T = case in ("C3",) or (case == "C4" and _c4_block(ns) == "ratio>1") or (
        case == "C7" and ns.m <= ns.n
    )
    allowed = _allowed_situations(ns, case)
    hit = None
    for t in SYMMETRY_GROUP:
        img, _ = normalize_time(t.apply(ns), anchor="ell")
        label = _situation_T(img) if uses_T else _situation_S(img)
        if label in allowed:
            hit = (t, img, label)
            break
    if hit is None:
        raise UnclassifiedByTable(
            f"no table row for case {case} with (ell,m,n)=({ns.ell},{ns.m},{ns.n})"
        )
    t, img, label = hit
    portrait, sub = _portrait_for(img, case, label)
    return InfinityClass(portrait, case, sub, label, mono, t, rec)


def _c4_block(ns) -> str:
    gap = ns.ell * (ns.n + 1) - (ns.ell + 1) * ns.m
    return "ratio>1" if gap > 0 else ("ratio=1" if gap == 0 else "ratio<1")


def _allowed_situations(ns, case: str) -> set[str]:
    if case == "C1":
        return {"S1", "S2", "S11", "S12"}
    if case == "C2":
        return {"S1", "S2", "S6", "S7", "S11", "S12"}
    if case == "C3":
        return {"T1", "T2", "T5"}
    if case == "C4":
        block = _c4_block(ns)
        if block == "ratio>1":
            return {"T1", "T2", "T3", "T4", "T5"}
        if block == "ratio=1":
            return {"S1", "S2", "S4", "S5", "S9", "S10", "S11", "S12"}
        return {f"S{i}" for i in range(1, 13)}
    if case == "C5":
        return {"S1", "S2", "S3", "S9", "S10", "S11", "S12"}
    if case == "C6":
        return {f"S{i}" for i in range(1, 13)}
    # C7
    if ns.m <= ns.n:
        return {"T1", "T2", "T3", "T4", "T5"}
    if ns.m == ns.n + 1:
        return {"S3", "S4", "S5", "S8", "S9", "S10"}
    return {f"S{i}" for i in range(1, 13)}


def _portrait_for(ns, case: str, sit: str) -> tuple[str, str]:
    """Figure tag plus the second-column condition actually used."""
    c = ns.c(ns.n)

    def fig(letter):
        return f"fig8-{letter}"

    if case == "C1":
        if sit == "S1":
            return fig("a"), "-"
        if sit == "S2":
            s = _vs_minus(c_star_comparator(ns), c)
            return (fig("b"), "c_n > -c_*") if s > 0 else (
                (fig("c"), "c_n = -c_*") if s == 0 else (fig("x"), "c_n < -c_*")
            )
        if sit == "S11":
            return fig("d"), "-"
        s = c_star_comparator(ns).compare(c)
        return (fig("d"), "c_n > c_*") if s > 0 else (
            (fig("e"), "c_n = c_*") if s == 0 else (fig("f"), "c_n < c_*")
        )
    if case == "C2":
        return fig({"S1": "a", "S2": "b", "S6": "g", "S7": "h", "S11": "i", "S12": "e"}[sit]), "-"
    if case == "C3":
        return fig({"T1": "a", "T2": "x", "T5": "d"}[sit]), "-"
    if case == "C4":
        block = _c4_block(ns)
        if block == "ratio>1":
            return fig({"T1": "n", "T2": "w", "T3": "d", "T4": "o", "T5": "d"}[sit]), "l(n+1)/((l+1)m) > 1"
        if block == "ratio=1":
            sub = "l(n+1) = (l+1)m" + (", m=2l, n=2l+1" if ns.m == 2 * ns.ell else ", n>m+1")
            if sit in ("S1", "S4", "S9", "S11", "S12"):
                return fig({"S1": "n", "S4": "n", "S9": "o", "S11": "d", "S12": "d"}[sit]), sub
            upper = c_star_upper_comparator(ns)
            if sit in ("S2", "S5"):
                s = _vs_minus(upper, c)
                letter = ("c" if sit == "S2" else "u") if s >= 0 else "w"
                return fig(letter), sub + (", c_n >= -c^*" if s >= 0 else ", c_n < -c^*")
            # S10
            s = upper.compare(c)
            return (fig("o"), sub + ", c_n > c^*") if s > 0 else (fig("v"), sub + ", c_n <= c^*")
        table = {"S1": "n", "S2": "c", "S3": "d", "S4": "n", "S5": "u", "S6": "d",
                 "S7": "p", "S8": "d", "S9": "o", "S10": "v", "S11": "d", "S12": "d"}
        return fig(table[sit]), "l(n+1)/((l+1)m) < 1"
    if case == "C5":
        return fig({"S1": "a", "S2": "b", "S3": "h", "S9": "d", "S10": "f",
                    "S11": "d", "S12": "j"}[sit]), "-"
    if case == "C6":
        return fig({"S1": "a", "S2": "b", "S3": "h", "S4": "k", "S5": "l", "S6": "g",
                    "S7": "h", "S8": "h", "S9": "i", "S10": "m", "S11": "i", "S12": "e"}[sit]), "-"
    # C7
    if ns.m <= ns.n:
        return fig({"T1": "n", "T2": "w", "T3": "o", "T4": "d", "T5": "d"}[sit]), "m <= n"
    if ns.m == ns.n + 1:
        return fig({"S3": "p", "S4": "n", "S5": "q", "S8": "r", "S9": "d", "S10": "s"}[sit]), "m = n+1"
    return fig({"S1": "n", "S2": "c", "S3": "p", "S4": "n", "S5": "q", "S6": "p", "S7": "r",
                "S8": "r", "S9": "d", "S10": "t", "S11": "d", "S12": "s"}[sit]), "m > n+1"


# -- equator oracle -------------------------------------------------------------


@dataclass(frozen=True)
class EquatorPoint:
    side: str  # 'U', 'V', 'U~', 'V~' (~ marks the antipodal rebuild)
    position: str
    atoms: tuple[Atom, ...]
    dir_before: int
    dir_after: int

    def sector_word(self) -> tuple[str, ...]:
        """One-sided sector word of the point between its equator rays; this
        is what a figure panel shows, independent of how finely the blow-up
        happened to split parabolic regions."""
        rays_atoms = (
            [Atom("sep", self.dir_before < 0)]
            + list(self.atoms)
            + [Atom("sep", self.dir_after > 0)]
        )
        word = [_gapless_sector(a, b) for a, b in zip(rays_atoms, rays_atoms[1:])]
        return _reduce_word(word)


@dataclass(frozen=True)
class EquatorStructure:
    points: tuple[EquatorPoint, ...]
    monodromic: bool
    sphere_indices: tuple[Fraction, ...]  # one per point, paired across sides
    dump: str
    arc_dirs: tuple[int, ...]  # inter-point equator flow, same cyclic order
    degree: int

    def index_sum(self) -> Fraction:
        return sum(self.sphere_indices, Fraction(0))

    def canonical(self) -> tuple:
        return canonical_equator([p.sector_word() for p in self.points], list(self.arc_dirs))


def _side_chain(field: PlanarField, limit: int, trace: Trace):
    """Equator chain of one chart side: list of (root_desc, elements, flanks)
    plus the joined element chain; flanks are in disc-cycle direction."""
    conv = field.swap_axes()
    D = _divisor_poly(conv)
    if D.is_zero():
        raise UnclassifiedByTable("equator flow vanishes identically")
    roots = list(real_roots(D))
    samples = _separating_samples(roots, None)
    dirs = [1 if D.eval(s) > 0 else -1 for s in samples]
    chain: list[Elem] = [("arc", dirs[0])]
    pts = []
    for k, root in enumerate(roots):
        elems = point_elements(conv, root, (Sign(dirs[k]), Sign(dirs[k + 1])), 0, limit, trace)
        pos = f"u={root.lo}" if root.is_rational() else f"u in ({root.lo},{root.hi})"
        pts.append((pos, elems, (dirs[k], dirs[k + 1])))
        chain.extend(elems)
        chain.append(("arc", dirs[k + 1]))
    return pts, chain


def _pole_point(chart: PlanarField, limit: int, trace: Trace, name: str):
    """Chart-V origin contribution, already in disc-cycle orientation (the
    chart's along-coordinate descends counterclockwise, so everything is
    reversed and flank directions are negated and swapped)."""
    conv = chart.swap_axes()
    elems = _pole_elements(conv, 0, limit, trace, name)
    D = _divisor_poly(conv)
    if D.eval(0) != 0:
        return None
    roots = list(real_roots(D))
    idx = next(k for k, r in enumerate(roots) if r.compare(0) == Sign.ZERO)
    samples = _separating_samples(roots, None)
    f_lo = 1 if D.eval(samples[idx]) > 0 else -1
    f_hi = 1 if D.eval(samples[idx + 1]) > 0 else -1
    return rev_chain(elems), (-f_hi, -f_lo)


def equator_structure(sys: GeneralizedLienardSystem, recursion_limit: int = 6) -> EquatorStructure:
    """Resolve every equator equilibrium of the compactified (a_ell = -1
    normalized) system and glue the full boundary cycle."""
    _require_ell2(sys)
    ns, _ = normalize_time(sys, anchor="ell")
    fld = lienard_field(ns)
    d = total_degree(fld)
    U = poincare_chart_u(fld, d)
    V = poincare_chart_v(fld, d)
    Ub = equator_antipode(U, d)
    Vb = equator_antipode(V, d)
    trace = Trace()

    entries: list[tuple[str, str, list[Elem], tuple[int, int]]] = []
    cycle: list[Elem] = []

    trace.log("chart U, upper side:")
    trace.push()
    ptsU, chainU = _side_chain(U, recursion_limit, trace)
    trace.pop()
    cycle += chainU
    entries += [("U", pos, elems, flanks) for pos, elems, flanks in ptsU]

    trace.log("chart V pole (+y):")
    trace.push()
    poleV = _pole_point(V, recursion_limit, trace, "+y")
    trace.pop()
    if poleV is not None:
        elems, flanks = poleV
        cycle += elems
        entries.append(("V", "pole", elems, flanks))

    trace.log("chart U, antipodal side:")
    trace.push()
    ptsUb, chainUb = _side_chain(Ub, recursion_limit, trace)
    trace.pop()
    cycle += chainUb
    entries += [("U~", pos, elems, flanks) for pos, elems, flanks in ptsUb]

    trace.log("chart V pole (-y):")
    trace.push()
    poleVb = _pole_point(Vb, recursion_limit, trace, "-y")
    trace.pop()
    if poleVb is not None:
        elems, flanks = poleVb
        cycle += elems
        entries.append(("V~", "pole", elems, flanks))

    points = tuple(
        EquatorPoint(side, pos, tuple(chain_atoms(elems)), flanks[0], flanks[1])
        for side, pos, elems, flanks in entries
    )
    seq = sectors_from_cycle(cycle)
    indices = _sphere_indices(list(points), d)
    arc_dirs = tuple(p.dir_after for p in points)
    return EquatorStructure(points, seq.monodromic, tuple(indices), "\n".join(trace.lines), arc_dirs, d)


def _antipodal_partner(points: list[EquatorPoint], k: int) -> int:
    """Points come in antipodal pairs: U-side root j pairs with the U~-side
    root j (same equator polynomial), V pole pairs with V~."""
    sides = [p.side for p in points]
    me = points[k]
    if me.side in ("U", "U~"):
        mine = [i for i, p in enumerate(points) if p.side == me.side]
        other = [i for i, p in enumerate(points) if p.side == ("U~" if me.side == "U" else "U")]
        return other[mine.index(k)]
    return next(i for i, p in enumerate(points) if p.side == ("V~" if me.side == "V" else "V"))


def _sphere_indices(points: list[EquatorPoint], degree: int) -> list[Fraction]:
    """Per-point indices of the analytic sphere field.

    The charts were rebuilt in true time on the antipodal side; the analytic
    field (the one the index theorem talks about) differs there by the sign
    (-1)^(degree-1), so for even degree the ~-side data is time-flipped
    before assembling each point's full circle of atoms."""
    flip = degree % 2 == 0

    def analytic(p: EquatorPoint) -> tuple[tuple[Atom, ...], int, int]:
        if flip and p.side.endswith("~"):
            return (
                tuple(a.flipped_time() for a in p.atoms),
                -p.dir_before,
                -p.dir_after,
            )
        return p.atoms, p.dir_before, p.dir_after

    out = []
    for k, p in enumerate(points):
        q = points[_antipodal_partner(points, k)]
        atoms_n, before_n, after_n = analytic(p)
        atoms_s, _, _ = analytic(q)
        ray_after = Atom("sep", after_n > 0)
        ray_before = Atom("sep", before_n < 0)
        cyc: list[Elem] = [("atom", ray_after)]
        cyc += [("atom", a) for a in reversed(atoms_n)]
        cyc += [("atom", ray_before)]
        cyc += [("atom", a) for a in atoms_s]
        seq = sectors_from_cycle(cyc)
        out.append(seq.index())
    return out


def _reduce_word(word: list[str]) -> tuple[str, ...]:
    """Linear sector-word reduction: merge parabolic runs, absorb parabolic
    sectors adjacent to elliptic ones."""
    toks = list(word)
    changed = True
    while changed:
        changed = False
        for i in range(len(toks)):
            if toks[i] in ("Pi", "Po"):
                left = toks[i - 1] if i > 0 else None
                right = toks[i + 1] if i + 1 < len(toks) else None
                if left == toks[i] or left == "E" or right == "E":
                    toks.pop(i)
                    changed = True
                    break
    return tuple(toks)


def _flip_token(t: str) -> str:
    return {"Pi": "Po", "Po": "Pi"}.get(t, t)


def canonical_equator(point_words, arc_dirs) -> tuple:
    """Cycle of per-point sector words and arc directions, minimized over
    rotation, reflection, and time reversal."""
    if not point_words:
        return ("empty",)

    def variant(pts, dirs):
        toks = []
        for p, d in zip(pts, dirs):
            toks.append(tuple(p))
            toks.append(d)
        best = None
        n = len(pts)
        for r in range(n):
            rot = tuple(toks[2 * r:] + toks[: 2 * r])
            if best is None or rot < best:
                best = rot
        return best

    base_pts = [tuple(w) for w in point_words]
    base_dirs = list(arc_dirs)
    cands = []
    for time_flip in (False, True):
        pts = [tuple(_flip_token(t) for t in w) for w in base_pts] if time_flip else base_pts
        dirs = [-d for d in base_dirs] if time_flip else base_dirs
        cands.append(variant(pts, dirs))
        # reflection: reverse cyclic order; each point's word reverses; the
        # arc between p_i and p_{i+1} becomes the arc between their mirrors
        rp = [tuple(reversed(x)) for x in reversed(pts)]
        rd = list(reversed([-d for d in dirs]))
        rd = rd[1:] + rd[:1]
        cands.append(variant(rp, rd))
    return min(cands)


# -- pinned figure data ----------------------------------------------------------


def load_fig8_data() -> dict:
    with resources.files("glienard").joinpath("data/fig8.json").open() as fh:
        return json.load(fh)


def infinity_oracle(sys: GeneralizedLienardSystem, recursion_limit: int = 6) -> EquatorStructure:
    return equator_structure(sys, recursion_limit)
