#!/usr/bin/env python3
# Copyright 2026 The netfix Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the bundled sample topologies as Topology Zoo style GML.

The graphs are synthetic ISP-like backbones: a random geometric core
with a spanning tree to keep them connected and a few long-haul chords.
"""

import math
import random
import sys
from pathlib import Path

SAMPLES = [
    # name, nodes, extra chords, seed
    ("Arcadia", 12, 4, 11),
    ("Borealis", 34, 10, 23),
    ("Cascadia", 63, 18, 37),
    ("Dunmore", 107, 28, 41),
]

# Small graphs for quick end-to-end runs.
SMOKE = [
    ("Ashby", 16, 4, 9),
    ("Bexley", 18, 5, 7),
    ("Corfe", 20, 6, 13),
]


def build(n, chords, seed):
    rng = random.Random(seed)
    pts = [(rng.uniform(30, 60), rng.uniform(-10, 30)) for _ in range(n)]
    edges = set()
    # Prim-style tree over Euclidean distance.
    inside = {0}
    while len(inside) < n:
        best = None
        for a in inside:
            for b in range(n):
                if b in inside:
                    continue
                d = math.dist(pts[a], pts[b])
                if best is None or d < best[0]:
                    best = (d, a, b)
        _, a, b = best
        edges.add((min(a, b), max(a, b)))
        inside.add(b)
    while chords > 0:
        a = rng.randrange(n)
        near = sorted(range(n), key=lambda b: math.dist(pts[a], pts[b]))[1:6]
        b = rng.choice(near)
        e = (min(a, b), max(a, b))
        if e not in edges:
            edges.add(e)
            chords -= 1
    return pts, sorted(edges)


def gml(name, pts, edges):
    out = ["graph [", "  directed 0", f'  label "{name}"', '  Network "%s"' % name]
    for i, (lat, lon) in enumerate(pts):
        out += ["  node [", f"    id {i}", f'    label "{name} PoP {i + 1}"',
                f"    Latitude {lat:.4f}", f"    Longitude {lon:.4f}", "  ]"]
    for a, b in edges:
        out += ["  edge [", f"    source {a}", f"    target {b}", '    LinkLabel "10GE"', "  ]"]
    out.append("]")
    return "\n".join(out) + "\n"


def main():
    base = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent
    for sub, samples in (("topologies", SAMPLES), ("smoke", SMOKE)):
        root = base / sub
        root.mkdir(parents=True, exist_ok=True)
        for name, n, chords, seed in samples:
            pts, edges = build(n, chords, seed)
            (root / f"{name}.gml").write_text(gml(name, pts, edges))


if __name__ == "__main__":
    main()
