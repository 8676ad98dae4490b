"""Floating-point companion to the exact classifiers.

Adaptive integration runs in the plane while orbits are small and hands over
to a Poincare chart (u = y/x, v = 1/x, or the vertical twin) beyond radius
10, returning below radius 8.  Chart fields carry the v^(d-1) rescale, so an
auxiliary quadrature variable accumulates original time through every chart
segment; reported periods are in the input system's own time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

from .planar import PlanarField, lienard_field, poincare_chart_u, poincare_chart_v, total_degree
from .system import GeneralizedLienardSystem

HANDOVER_RADIUS = 10.0
HYSTERESIS_RADIUS = 8.0


class NotMonodromic(ValueError):
    pass


class EscapedOrbit(RuntimeError):
    pass


class NonClosingOrbit(RuntimeError):
    pass


class StepUnderflow(RuntimeError):
    pass


def _compile(fieldobj: PlanarField) -> Callable[[float, float], tuple[float, float]]:
    pterms = [(float(c), i, j) for (i, j), c in fieldobj.P]
    qterms = [(float(c), i, j) for (i, j), c in fieldobj.Q]

    def rhs(x, y):
        px = 0.0
        for c, i, j in pterms:
            px += c * x**i * y**j
        qx = 0.0
        for c, i, j in qterms:
            qx += c * x**i * y**j
        return px, qx

    return rhs


@dataclass
class Trajectory:
    samples: list  # (t, chart, u, v)
    events: list  # (t, kind, payload)
    escaped: bool = False

    def to_csv(self) -> str:
        lines = ["t,chart,u,v"]
        for t, chart, u, v in self.samples:
            lines.append(f"{t!r},{chart},{u!r},{v!r}")
        return "\n".join(lines)

    def plane_points(self):
        out = []
        for t, chart, u, v in self.samples:
            if chart == "plane":
                out.append((t, u, v))
            elif chart == "U" and v != 0:
                out.append((t, 1.0 / v, u / v))
            elif chart == "V" and v != 0:
                out.append((t, u / v, 1.0 / v))
        return out


def _as_field(sys_or_field) -> PlanarField:
    if isinstance(sys_or_field, GeneralizedLienardSystem):
        return lienard_field(sys_or_field)
    return sys_or_field


class ChartedIntegrator:
    """Plane/chart switching integrator over a polynomial field.

    The only section supported is the x-axis (y = 0), which is all the
    return-map machinery needs; crossings are recorded in plane coordinates
    with their original-time direction."""

    def __init__(self, sys_or_field, tol: float = 1e-10, handover: float = HANDOVER_RADIUS):
        fld = _as_field(sys_or_field)
        self.d = total_degree(fld)
        self.plane = _compile(fld)
        self.chart_u = _compile(poincare_chart_u(fld, self.d))
        self.chart_v = _compile(poincare_chart_v(fld, self.d))
        self.tol = tol
        self.handover = handover
        self.hysteresis = handover * HYSTERESIS_RADIUS / HANDOVER_RADIUS

    @staticmethod
    def plane_to_u(x, y):
        return y / x, 1.0 / x

    @staticmethod
    def u_to_plane(u, v):
        return 1.0 / v, u / v

    @staticmethod
    def plane_to_v(x, y):
        return x / y, 1.0 / y

    @staticmethod
    def v_to_plane(u, v):
        return u / v, 1.0 / v

    def integrate(
        self,
        start: tuple[float, float],
        t_end: float,
        want_sections: int = 0,
        section_direction: int = 0,
        record: bool = True,
        escape_radius: float = 1e9,
    ) -> Trajectory:
        traj = Trajectory([], [])
        chart = "plane"
        state = [float(start[0]), float(start[1])]
        if math.hypot(*state) >= self.handover:
            if abs(state[0]) >= abs(state[1]):
                chart, state = "U", list(self.plane_to_u(*state))
            else:
                chart, state = "V", list(self.plane_to_v(*state))
        t = 0.0
        found = 0
        for _ in range(100000):
            if chart == "plane":
                t, chart, state, hit, status = self._plane_segment(
                    state, t, t_end, want_sections > 0, section_direction, traj if record else None
                )
            else:
                t, chart, state, hit, status = self._chart_segment(
                    chart, state, t, t_end, want_sections > 0, section_direction, traj if record else None
                )
            if hit is not None:
                traj.events.append((hit[0], "section", (hit[1], hit[2])))
                found += 1
                if found >= want_sections:
                    traj.samples.append((hit[0], "plane", hit[1], hit[2]))
                    return traj
            if status == "done":
                traj.samples.append((t, chart, state[0], state[1]))
                return traj
            if status == "escape" or (chart == "plane" and math.hypot(*state) > escape_radius):
                traj.escaped = True
                traj.events.append((t, "escape", tuple(state)))
                return traj
        raise StepUnderflow("segment budget exhausted")

    # -- segments -----------------------------------------------------------

    def _plane_segment(self, state, t0, t_end, want_section, sdir, traj):
        def rhs(t, z):
            return self.plane(z[0], z[1])

        def leave(t, z):
            return z[0] ** 2 + z[1] ** 2 - self.handover**2

        leave.terminal = True
        leave.direction = 1
        events = [leave]
        if want_section:
            def sec(t, z):
                return z[1]

            sec.terminal = True
            sec.direction = sdir
            events.append(sec)
        sol = solve_ivp(rhs, (t0, t_end), state, method="RK45", rtol=self.tol,
                        atol=self.tol * 1e-2, events=events)
        if traj is not None:
            for tt, xx, yy in zip(sol.t[::4], sol.y[0][::4], sol.y[1][::4]):
                traj.samples.append((float(tt), "plane", float(xx), float(yy)))
        if want_section and sol.t_events[1].size:
            z = sol.y_events[1][0]
            tn = float(sol.t_events[1][0])
            return tn, "plane", [float(z[0]), float(z[1])], (tn, float(z[0]), float(z[1])), "continue"
        if sol.t_events[0].size:
            z = sol.y_events[0][0]
            x, y = float(z[0]), float(z[1])
            tn = float(sol.t_events[0][0])
            if abs(x) >= abs(y):
                return tn, "U", list(self.plane_to_u(x, y)), None, "continue"
            return tn, "V", list(self.plane_to_v(x, y)), None, "continue"
        if sol.status != 0 and sol.t[-1] < t_end * (1 - 1e-12):
            raise StepUnderflow(f"integrator stalled at t={sol.t[-1]:.6g}")
        return float(sol.t[-1]), "plane", [float(sol.y[0][-1]), float(sol.y[1][-1])], None, "done"

    def _chart_segment(self, chart, state, t0, t_end, want_section, sdir, traj):
        fld = self.chart_u if chart == "U" else self.chart_v
        d = self.d
        # the chart field carries v^(d-1); on the v < 0 side of an even-degree
        # chart that factor is negative, so flip once per segment (v cannot
        # change sign inside a segment: that would mean crossing the equator)
        sgn = 1.0 if state[1] > 0 or (d - 1) % 2 == 0 else -1.0

        def rhs(tau, z):
            gu, gv = fld(z[0], z[1])
            return sgn * gu, sgn * gv, sgn * z[1] ** (d - 1)

        def reenter(tau, z):
            return 1.0 + z[0] ** 2 - (self.hysteresis * z[1]) ** 2

        reenter.terminal = True
        reenter.direction = -1

        def swap(tau, z):
            return z[0] ** 2 - 4.0

        swap.terminal = True
        swap.direction = 1

        def clock(tau, z):
            return z[2] - t_end

        clock.terminal = True
        events = [reenter, swap, clock]
        # the x-axis section is u = 0 in chart U; chart V never meets it;
        # non-terminal here, segments are bounded by the other events
        if want_section and chart == "U":
            def sec(tau, z):
                return z[0]

            sec.direction = 0
            events.append(sec)
        sol = solve_ivp(rhs, (0.0, 1e9), [state[0], state[1], t0], method="RK45",
                        rtol=self.tol, atol=self.tol * 1e-2, events=events)
        if traj is not None:
            for tt, uu, vv in zip(sol.y[2][::4], sol.y[0][::4], sol.y[1][::4]):
                traj.samples.append((float(tt), chart, float(uu), float(vv)))
        hit = None
        if want_section and chart == "U" and len(sol.t_events) > 3 and sol.t_events[3].size:
            for z in sol.y_events[3]:
                u, v, tn = float(z[0]), float(z[1]), float(z[2])
                if tn <= t0 + 1e-300 or v == 0:
                    continue
                gu, _ = fld(u, v)
                ydot = gu / v**d  # dy/dt in original time at u = 0
                if sdir == 0 or (ydot > 0) == (sdir > 0):
                    x, _ = self.u_to_plane(u, v)
                    hit = (tn, x, 0.0)
                    break
        if sol.t_events[0].size:
            z = sol.y_events[0][0]
            to_plane = self.u_to_plane if chart == "U" else self.v_to_plane
            x, y = to_plane(float(z[0]), float(z[1]))
            return float(z[2]), "plane", [x, y], hit, "continue"
        if sol.t_events[1].size:
            z = sol.y_events[1][0]
            u, v = float(z[0]), float(z[1])
            return float(z[2]), ("V" if chart == "U" else "U"), [1.0 / u, v / u], hit, "continue"
        if sol.t_events[2].size:
            z = sol.y_events[2][0]
            return float(z[2]), chart, [float(z[0]), float(z[1])], hit, "done"
        return float(sol.y[2][-1]), chart, [float(sol.y[0][-1]), float(sol.y[1][-1])], hit, "escape"


def integrate(sys_or_field, start, t_span, tol=1e-10) -> Trajectory:
    """Adaptive charted trajectory from a plane point over an original-time span."""
    return ChartedIntegrator(sys_or_field, tol).integrate(tuple(start), float(t_span))


# -- return maps and periods ---------------------------------------------------


def _rotation_sign(sys: GeneralizedLienardSystem) -> int:
    from .origin import classify_origin, monodromy_origin

    if monodromy_origin(sys) is None:
        raise NotMonodromic("return map needs a monodromic origin")
    oc = classify_origin(sys)
    return 1 if oc.portrait == "fig1-h" else -1


def return_map(sys: GeneralizedLienardSystem, s: float, tol: float = 1e-10):
    """First return P(s) to the positive x-axis; returns (P(s), time).

    The revolution is split at the opposite-direction axis crossing so the
    solver never starts on a zero of its own terminal event."""
    if s == 0:
        return 0.0, 0.0
    rot = _rotation_sign(sys)
    integ = ChartedIntegrator(sys, tol)
    half = integ.integrate(
        (float(s), 0.0), t_end=1e12, want_sections=1, section_direction=-rot, record=False
    )
    hits = [(t, x) for t, kind, (x, _) in half.events if kind == "section"]
    if half.escaped or not hits:
        raise EscapedOrbit(f"orbit from s={s} left before the half turn")
    t_half, x_half = hits[0]
    back = integ.integrate(
        (x_half, 0.0), t_end=1e12, want_sections=1, section_direction=rot, record=False
    )
    hits = [(t, x) for t, kind, (x, _) in back.events if kind == "section"]
    if back.escaped or not hits:
        raise EscapedOrbit(f"orbit from s={s} did not return to the section")
    t_back, x_back = hits[0]
    if x_back <= 0:
        raise EscapedOrbit(f"return crossing landed at x={x_back} <= 0")
    return x_back, t_half + t_back


@dataclass
class ProbeResult:
    verdict: str  # 'center' | 'focus' | 'inconclusive'
    stability: Optional[str]
    displacements: list

    def describe(self) -> dict:
        return {
            "verdict": self.verdict,
            "stability": self.stability,
            "displacements": [(s, d) for s, d in self.displacements],
        }


def center_probe(sys: GeneralizedLienardSystem, amplitudes=(0.05, 0.1, 0.2), tol=1e-10) -> ProbeResult:
    disp = []
    for s in amplitudes:
        p, _ = return_map(sys, s, tol)
        disp.append((s, p - s))
    noise = [10 * tol * max(1.0, abs(s)) for s, _ in disp]
    if all(abs(d) <= 1e-7 * s for s, d in disp):
        return ProbeResult("center", None, disp)
    if all(abs(d) > n for (_, d), n in zip(disp, noise)) and len({d > 0 for _, d in disp}) == 1:
        stability = "unstable" if disp[0][1] > 0 else "stable"
        return ProbeResult("focus", stability, disp)
    return ProbeResult("inconclusive", None, disp)


@dataclass
class PeriodProfile:
    amplitudes: list
    periods: list
    eventually_decreasing: bool
    ratio: float

    def describe(self) -> dict:
        return {
            "amplitudes": self.amplitudes,
            "periods": self.periods,
            "eventually_decreasing": self.eventually_decreasing,
            "max_min_ratio": self.ratio,
        }


def period_profile(sys: GeneralizedLienardSystem, amplitudes, tol=1e-10) -> PeriodProfile:
    """Periods of the closed orbits through (A, 0); orbits must close."""
    periods = []
    for A in amplitudes:
        p, T = return_map(sys, float(A), tol)
        if abs(p - A) > 1e-5 * max(1.0, abs(A)):
            raise NonClosingOrbit(f"orbit from {A} returned to {p}")
        periods.append(T)
    k = max(1, len(periods) // 3)
    tail = periods[k - 1 :]
    decreasing = all(a > b for a, b in zip(tail, tail[1:]))
    ratio = max(periods) / min(periods)
    return PeriodProfile(list(amplitudes), periods, decreasing, ratio)
