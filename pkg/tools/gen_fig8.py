#!/usr/bin/env python3
"""Pin the equator structures per figure tag from representative systems.

Each Table-2 row family contributes at least one representative; every tag
must come out with a consistent canonical structure and index sum across all
of its representatives, otherwise this script refuses to write the data.
"""

import json
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from glienard.infinity import classify_infinity, equator_structure
from glienard.system import build_system

F = Fraction

# (phi, F, g) -> expected tag; phi chosen with a_ell = -1 already
REPS: list[tuple[dict, dict, dict, str]] = [
    # C1 (l = m = n)
    ({3: -1}, {3: 1}, {3: 1}, "fig8-a"),
    ({3: -1}, {3: 4}, {3: -2}, "fig8-b"),      # c_* = 3, c > -c_*
    ({3: -1}, {3: 4}, {3: -3}, "fig8-c"),      # c = -c_* exactly
    ({3: -1}, {3: 4}, {3: -4}, "fig8-x"),      # c < -c_*
    ({2: -1}, {2: 1}, {2: 1}, "fig8-d"),       # S11
    ({2: -1}, {2: -3}, {2: 3}, "fig8-d"),      # S12, c > c_* = 2
    ({2: -1}, {2: -3}, {2: 2}, "fig8-e"),      # S12, c = c_*
    ({2: -1}, {2: -3}, {2: 1}, "fig8-f"),      # S12, c < c_*
    # C2 (n = m > l)
    ({3: -1}, {5: 1}, {5: 1}, "fig8-a"),
    ({3: -1}, {5: 1}, {5: -1}, "fig8-b"),
    ({3: -1}, {4: 1}, {4: 1}, "fig8-g"),
    ({2: -1}, {3: 1}, {3: 1}, "fig8-h"),
    ({2: -1}, {4: 1}, {4: 1}, "fig8-i"),
    ({2: -1}, {4: -1}, {4: 1}, "fig8-e"),
    # C3 (n = l > m)
    ({3: -1}, {2: 1}, {3: 1}, "fig8-a"),
    ({3: -1}, {2: 1}, {3: -1}, "fig8-x"),
    ({3: -1, 5: -1}, {4: 1}, {3: -1, 5: -1}, "fig8-x"),  # realization (e)
    ({2: -1}, {1: 1}, {2: 1}, "fig8-d"),
    # C4, l(n+1) > (l+1)m
    ({3: -1}, {2: 1}, {5: 1}, "fig8-n"),
    ({3: -1}, {2: 1}, {5: -1}, "fig8-w"),
    ({3: -1}, {2: 1}, {4: 1}, "fig8-d"),
    ({2: -1}, {1: 1}, {3: 1}, "fig8-o"),
    ({2: -1}, {1: 1}, {4: 1}, "fig8-d"),
    # C4 equality, k = 2 (m = 2l, n = 2l+1)
    ({3: -1}, {6: 4}, {7: 1}, "fig8-n"),       # S4
    ({3: -1}, {6: 4}, {7: -5}, "fig8-u"),      # S5, c > -c^* = -6
    ({3: -1}, {6: 4}, {7: -6}, "fig8-u"),      # S5, c = -c^*
    ({3: -1}, {6: 4}, {7: -7}, "fig8-w"),      # S5, c < -c^*
    ({2: -1}, {4: 3}, {5: 1}, "fig8-o"),       # S9
    ({2: -1}, {4: -3}, {5: 5}, "fig8-o"),      # S10, c > c^* = 4
    ({2: -1}, {4: -3}, {5: 4}, "fig8-v"),      # S10, c = c^*
    ({2: -1}, {4: -3}, {5: 3}, "fig8-v"),      # S10, c < c^*
    # C4 equality, k >= 3
    ({3: -1}, {9: 4}, {11: 1}, "fig8-n"),      # S1
    ({3: -1}, {9: 4}, {11: -8}, "fig8-c"),     # S2, c > -c^* = -9
    ({3: -1}, {9: 4}, {11: -9}, "fig8-c"),     # S2, c = -c^*
    ({3: -1}, {9: 4}, {11: -10}, "fig8-w"),    # S2, c < -c^*
    ({2: -1}, {6: 1}, {8: 1}, "fig8-d"),       # S11
    ({2: -1}, {6: -1}, {8: 1}, "fig8-d"),      # S12
    ({2: -1}, {8: -3}, {11: 9}, "fig8-o"),     # S10 via merged block, c > c^* = 8
    ({2: -1}, {8: -3}, {11: 7}, "fig8-v"),     # S10, c < c^*
    # C4, ratio < 1
    ({3: -1}, {11: 1}, {13: 1}, "fig8-n"),
    ({3: -1}, {11: 1}, {13: -1}, "fig8-c"),
    ({3: -1}, {5: 1}, {6: 1}, "fig8-d"),       # S3
    ({3: -1}, {10: 1}, {11: 1}, "fig8-n"),     # S4
    ({3: -1}, {10: 1}, {11: -1}, "fig8-u"),    # S5
    ({3: -1}, {10: 1}, {11: -1, 1: -1}, "fig8-u"),  # realization (c) shape
    ({3: -1}, {10: 1}, {12: 1}, "fig8-d"),     # S6
    ({2: -1}, {7: 1}, {9: 1}, "fig8-p"),       # S7
    ({2: -1}, {7: 1}, {8: 1}, "fig8-d"),       # S8
    ({2: -1}, {6: 1}, {7: 1}, "fig8-o"),       # S9
    ({2: -1}, {6: -1}, {7: 1}, "fig8-v"),      # S10
    ({2: -1}, {8: 1}, {10: 1}, "fig8-d"),      # S11
    ({2: -1}, {8: -1}, {10: 1}, "fig8-d"),     # S12
    # C5 (m = l > n)
    ({3: -1}, {3: 1}, {1: 1}, "fig8-a"),
    ({3: -1}, {3: 1}, {1: -1}, "fig8-b"),
    ({3: -1}, {3: 1}, {2: 1}, "fig8-h"),
    ({2: -1}, {2: 1}, {1: 1}, "fig8-d"),
    ({2: -1}, {2: -1}, {1: 1}, "fig8-f"),
    ({2: -1, 4: -1}, {4: 1}, {2: 1}, "fig8-d"),
    ({2: 1, 4: -1}, {4: -1}, {2: 1}, "fig8-j"),
    # C6 (m > max(l, n))
    ({3: -1}, {5: 1}, {3: 1}, "fig8-a"),
    ({3: -1}, {5: 1}, {3: -1}, "fig8-b"),
    ({3: -1}, {5: 1}, {2: 1}, "fig8-h"),
    ({3: -1}, {4: 1}, {3: 1}, "fig8-k"),
    ({3: -1}, {4: 1}, {3: -1}, "fig8-l"),      # realization (a)
    ({3: -1}, {4: 1}, {2: 1}, "fig8-g"),
    ({2: -1}, {3: 1}, {1: 1}, "fig8-h"),
    ({2: -1}, {5: 1}, {4: 1}, "fig8-h"),
    ({2: -1}, {4: 1}, {3: 1}, "fig8-i"),
    ({2: -1}, {4: -1}, {3: 1}, "fig8-m"),
    ({2: -1}, {4: 1}, {2: 1}, "fig8-i"),
    ({2: -1}, {4: -1}, {2: 1}, "fig8-e"),
    # C7, m <= n
    ({5: -1}, {2: 1}, {3: 1}, "fig8-n"),
    ({5: -1}, {2: 1}, {3: -1}, "fig8-w"),
    ({3: -1, 7: -1}, {4: 1}, {3: -1, 5: -1}, "fig8-w"),  # realization (d)
    ({5: -1}, {2: 1}, {4: 1}, "fig8-o"),
    ({4: -1}, {2: 1}, {3: 1}, "fig8-d"),
    ({4: -1}, {1: 1}, {2: 1}, "fig8-d"),
    # C7, m = n+1
    ({5: -1}, {3: 1}, {2: 1}, "fig8-p"),
    ({5: -1}, {4: 1}, {3: 1}, "fig8-n"),
    ({5: -1}, {4: 1}, {3: -1}, "fig8-q"),      # realization (b)
    ({4: -1}, {3: 1}, {2: 1}, "fig8-r"),
    ({6: -1}, {4: 1}, {3: 1}, "fig8-d"),
    ({6: -1}, {4: -1}, {3: 1}, "fig8-s"),
    # C7, m > n+1
    ({7: -1}, {5: 1}, {3: 1}, "fig8-n"),
    ({7: -1}, {5: 1}, {3: -1}, "fig8-c"),
    ({7: -1}, {5: 1}, {2: 1}, "fig8-p"),
    ({7: -1}, {4: 1}, {1: 1}, "fig8-n"),
    ({7: -1}, {4: 1}, {1: -1}, "fig8-q"),
    ({7: -1}, {4: 1}, {2: 1}, "fig8-p"),
    ({6: -1}, {5: 1}, {3: 1}, "fig8-r"),
    ({6: -1}, {5: 1}, {2: 1}, "fig8-r"),
    ({6: -1}, {4: 1}, {1: 1}, "fig8-d"),
    ({6: -1}, {4: -1}, {1: 1}, "fig8-t"),
    ({6: -1}, {4: 1}, {2: 1}, "fig8-d"),
    ({6: -1}, {4: -1}, {2: 1}, "fig8-s"),
]


def serialize(canon):
    def conv(x):
        if isinstance(x, tuple):
            return [conv(v) for v in x]
        return x

    return conv(canon)


def main():
    data = {}
    problems = []
    for phi, Fc, g, tag in REPS:
        sys_ = build_system(phi, Fc, g)
        got = classify_infinity(sys_)
        if got.portrait != tag:
            problems.append(f"classifier: {phi} {Fc} {g}: expected {tag}, got {got.portrait}")
            continue
        es = equator_structure(sys_)
        entry = data.setdefault(
            tag, {"structures": [], "index_sum": str(es.index_sum()), "monodromic": es.monodromic}
        )
        if entry["index_sum"] != str(es.index_sum()) or entry["monodromic"] != es.monodromic:
            problems.append(f"index/monodromy mismatch for {tag} at {phi} {Fc} {g}")
        struct = serialize(es.canonical())
        if struct not in entry["structures"]:
            entry["structures"].append(struct)
    for p in problems:
        print("PROBLEM:", p)
    missing = {f"fig8-{c}" for c in "abcdefghijklmnopqrstuvwx"} - set(data)
    if missing:
        print("MISSING TAGS:", sorted(missing))
    if problems or missing:
        sys.exit(1)
    out = Path(__file__).resolve().parents[1] / "src" / "glienard" / "data" / "fig8.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(dict(sorted(data.items())), indent=1))
    print(f"wrote {out} with {len(data)} tags")
    for tag in sorted(data):
        e = data[tag]
        print(f"  {tag}: sum {e['index_sum']}, {len(e['structures'])} variant(s), monodromic={e['monodromic']}")


if __name__ == "__main__":
    main()
