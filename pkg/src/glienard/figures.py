"""Encoded portrait classes: the stable vocabulary of classification results.

Each local class is a canonical cyclic sector word (see blowup.canonical_class):
'H' hyperbolic, 'E' elliptic, 'P' a parabolic band between hyperbolic
sectors; ('node',) is the all-parabolic class and ('monodromic',) the empty
one.  The origin classes were derived by hand from the directional blow-up
case analysis; the equator classes are pinned by representative systems and
re-derived mechanically by the oracle (tests enforce cross-row consistency).

Index bookkeeping uses 1 + (e - h)/2 per sector cycle; equator entries carry
the per-point sphere indices used by the Poincare-Hopf gate.
"""

from __future__ import annotations

from fractions import Fraction

#: canonical sector classes at the origin (fig1-h and fig1-i share the
#: monodromic class; they differ by rotation sense in original time)
FIG1_CLASS = {
    "fig1-a": ("H", "H", "H", "H"),
    "fig1-b": ("E", "H"),
    "fig1-c": ("H", "P", "H", "P"),
    "fig1-d": ("H", "H"),
    "fig1-e": ("E", "H", "H", "H"),
    "fig1-f": ("H", "H", "P"),
    "fig1-g": ("node",),
    "fig1-h": ("monodromic",),
    "fig1-i": ("monodromic",),
}

FIG1_INDEX = {
    "fig1-a": Fraction(-1),
    "fig1-b": Fraction(1),
    "fig1-c": Fraction(0),
    "fig1-d": Fraction(0),
    "fig1-e": Fraction(0),
    "fig1-f": Fraction(0),
    "fig1-g": Fraction(1),
    "fig1-h": Fraction(1),
    "fig1-i": Fraction(1),
}

#: which global portrait matches which equator portrait when the origin is
#: the only equilibrium and a center
FIG12_FROM_FIG8 = {
    "fig8-l": "fig12-a",
    "fig8-q": "fig12-b",
    "fig8-u": "fig12-c",
    "fig8-w": "fig12-d",
    "fig8-x": "fig12-e",
}

GLOBAL_CENTER_TAGS = {"fig12-d", "fig12-e"}

# fig8 equator data (canonical structures and per-point sphere indices) is
# loaded from data/fig8.json, which was pinned from representative systems
# via the equator oracle; see infinity.py for the construction and the test
# suite for the cross-row consistency checks that keep it honest.

