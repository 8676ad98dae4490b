"""Global phase portraits when the origin is the only equilibrium and a
center: the four-criterion global-center test and the index gate.

The gate cross-checks every classified configuration against the sphere
index theorem: twice the sum of finite-equilibrium indices (an integer
winding number, computed on a circle enclosing every equilibrium) plus the
pinned equator index sum of the infinity portrait must equal 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .figures import FIG1_INDEX, FIG12_FROM_FIG8, GLOBAL_CENTER_TAGS
from .infinity import InfinityClass, classify_infinity, load_fig8_data, monodromy_infinity
from .origin import OriginClass, center_test, classify_origin, monodromy_origin
from .planar import lienard_field
from .ratpoly import Poly, Sign, real_roots, root_bound
from .system import GeneralizedLienardSystem


class CenterUndecided(RuntimeError):
    """The center test came back inconclusive; the global verdict is withheld."""


@dataclass(frozen=True)
class CriterionResult:
    name: str
    holds: bool
    detail: str

    def describe(self) -> dict:
        return {"holds": self.holds, "detail": self.detail}


@dataclass(frozen=True)
class GlobalClass:
    portrait: Optional[str]  # 'fig12-a' .. 'fig12-e' or None
    global_center: bool
    criteria: tuple[CriterionResult, ...]
    reasons: tuple[str, ...]  # nonempty when portrait is None

    def describe(self) -> dict:
        return {
            "portrait": self.portrait,
            "global_center": self.global_center,
            "criteria": {c.name: c.describe() for c in self.criteria},
            "not_applicable_reasons": list(self.reasons),
        }


def g1_check(sys: GeneralizedLienardSystem) -> CriterionResult:
    """Neither phi nor g may have a nonzero real root."""
    for name, poly in (("phi", sys.phi), ("g", sys.g)):
        for root in real_roots(poly):
            if root.compare(0) != Sign.ZERO:
                r = root.refined(Fraction(1, 1000))
                return CriterionResult(
                    "G1", False, f"{name} has a nonzero real root in [{r.lo}, {r.hi}]"
                )
    return CriterionResult("G1", True, "phi and g vanish only at 0")


def origin_is_unique_equilibrium(sys: GeneralizedLienardSystem) -> tuple[bool, str]:
    """Equilibria solve g(x) = 0 and phi(y) = F(x); decide whether (0,0) is
    the only one.  For odd ell the range of phi is all of R, so uniqueness is
    exactly the no-nonzero-roots condition; for even ell a nonzero root of g
    needs a solvability check of phi(y) = F(x0), done by refining x0 until the
    interval image of F clears the (numeric) extremum of phi."""
    phi_roots = [r for r in real_roots(sys.phi) if r.compare(0) != Sign.ZERO]
    if phi_roots:
        return False, "phi has a nonzero real root, giving an equilibrium on x = 0"
    g_roots = [r for r in real_roots(sys.g) if r.compare(0) != Sign.ZERO]
    if not g_roots:
        return True, "only x = 0 solves g(x) = 0 and only y = 0 solves phi(y) = 0"
    if sys.ell % 2 == 1:
        return False, "g has a nonzero real root and phi is onto (odd top degree)"
    # even ell: phi has a one-sided range; compare numerically with margin
    lead = float(sys.a(sys.ell))
    crit = real_roots(sys.phi.derivative())
    vals = [sys.phi.eval_float(c.float()) for c in crit] + [0.0]
    extremum = min(vals) if lead > 0 else max(vals)
    for root in g_roots:
        t = sys.F.eval_float(root.refined(Fraction(1, 10**12)).float())
        if (lead > 0 and t > extremum + 1e-9) or (lead < 0 and t < extremum - 1e-9):
            return False, f"phi(y) = F(x0) is solvable at a nonzero root of g (F(x0) ~ {t:.6g})"
        if abs(t - extremum) <= 1e-9:
            return False, "F(x0) sits at the numeric extremum of phi; treating as non-unique"
    return True, "no nonzero root of g admits a real y with phi(y) = F(x0)"


def classify_global(
    sys: GeneralizedLienardSystem,
    origin: Optional[OriginClass] = None,
    infinity: Optional[InfinityClass] = None,
) -> GlobalClass:
    origin = origin or classify_origin(sys)
    infinity = infinity or classify_infinity(sys)

    g1 = g1_check(sys)
    g2_val = monodromy_origin(sys)
    g2 = CriterionResult("G2", g2_val is not None, g2_val or "origin not monodromic")
    if g2.holds:
        verdict = center_test(sys)
        if verdict.verdict == "inconclusive":
            raise CenterUndecided("center test inconclusive; global verdict withheld")
        g3 = CriterionResult("G3", verdict.verdict == "center", verdict.verdict)
    else:
        g3 = CriterionResult("G3", False, "center test requires a monodromic origin")
    g4_val = monodromy_infinity(sys)
    g4 = CriterionResult("G4", g4_val is not None, g4_val or "not monodromic at infinity")
    criteria = (g1, g2, g3, g4)

    if all(c.holds for c in criteria):
        portrait = FIG12_FROM_FIG8[infinity.portrait]
        assert portrait in GLOBAL_CENTER_TAGS
        return GlobalClass(portrait, True, criteria, ())

    reasons = tuple(f"{c.name}: {c.detail}" for c in criteria if not c.holds)
    if g2.holds and g3.holds:
        unique, why = origin_is_unique_equilibrium(sys)
        if unique:
            portrait = FIG12_FROM_FIG8.get(infinity.portrait)
            if portrait is None:
                return GlobalClass(
                    None,
                    False,
                    criteria,
                    reasons + (f"unexpected infinity portrait {infinity.portrait} for a sole-center system",),
                )
            return GlobalClass(portrait, portrait in GLOBAL_CENTER_TAGS, criteria, ())
        reasons = reasons + (why,)
    return GlobalClass(None, False, criteria, reasons)


# -- index gate ---------------------------------------------------------------


def equator_index_sum(infinity_tag: str) -> Fraction:
    return Fraction(load_fig8_data()[infinity_tag]["index_sum"])


def gate_total(origin_tag: str, infinity_tag: str) -> Fraction:
    """Sphere index total assuming the origin is the only finite equilibrium."""
    return 2 * FIG1_INDEX[origin_tag] + equator_index_sum(infinity_tag)


def finite_index_sum(sys: GeneralizedLienardSystem) -> int:
    """Winding number of the field along a circle enclosing all equilibria."""
    bx = root_bound(sys.g)
    fmax = sum(abs(float(c)) * float(bx) ** e for e, c in sys.F.terms.items())
    amax = max(abs(float(c)) for c in sys.phi.terms.values())
    by = 1.0 + (amax + fmax) / abs(float(sys.a(sys.ell)))
    R = 2.0 * max(float(bx), by) + 1.0
    fld = lienard_field(sys)

    def angle_at(theta):
        px, qx = fld.eval_float(R * math.cos(theta), R * math.sin(theta))
        return math.atan2(qx, px)

    n = 64
    while True:
        total = 0.0
        ok = True
        prev = angle_at(0.0)
        for k in range(1, n + 1):
            cur = angle_at(2 * math.pi * k / n)
            d = cur - prev
            while d > math.pi:
                d -= 2 * math.pi
            while d < -math.pi:
                d += 2 * math.pi
            if abs(d) > math.pi / 2:
                ok = False
                break
            total += d
            prev = cur
        if ok:
            return round(total / (2 * math.pi))
        n *= 2
        if n > 2**16:
            raise RuntimeError("winding number did not stabilize")


def index_check(
    origin: OriginClass,
    infinity: InfinityClass,
    sys: Optional[GeneralizedLienardSystem] = None,
) -> bool:
    """Poincare-Hopf gate: total sphere index must be 2.  With the system at
    hand the finite part is the exact winding integer; otherwise the origin
    is assumed to be the only finite equilibrium."""
    eq = equator_index_sum(infinity.portrait)
    if sys is not None:
        fin = Fraction(finite_index_sum(sys))
    else:
        fin = FIG1_INDEX[origin.portrait]
    return 2 * fin + eq == 2
