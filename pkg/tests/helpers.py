"""Diagram builders and hypothesis strategies shared by the tests."""
from collections import Counter

import numpy as np
from hypothesis import strategies as st

from topoclust.diagram import PersistenceDiagram


def make_diagram(pairs, family="minima", locations=None, name=""):
    """Diagram from (birth, death) pairs; locations default to the origin."""
    pairs = list(pairs)
    n = len(pairs)
    if locations is None:
        bl = dl = np.zeros((n, 3))
    else:
        bl, dl = (np.asarray(x, dtype=float).reshape(n, 3) for x in locations)
    cls = "min_saddle" if family == "minima" else "saddle_max"
    return PersistenceDiagram(
        [p[0] for p in pairs], [p[1] for p in pairs], bl, dl, [cls] * n, family, name
    )


def random_diagram(rng, max_points=6, family="minima", with_locations=False, scale=5.0):
    n = int(rng.integers(0, max_points + 1))
    b = rng.uniform(0, scale, n)
    d = b + rng.uniform(0, scale, n)
    locs = (rng.uniform(0, 10, (n, 3)), rng.uniform(0, 10, (n, 3))) if with_locations else None
    return make_diagram(zip(b, d), family, locs)


finite = st.floats(-50, 50, allow_nan=False, allow_infinity=False)
pair = st.tuples(finite, st.floats(0, 20, allow_nan=False)).map(lambda t: (t[0], t[0] + t[1]))


@st.composite
def diagrams(draw, max_points=6, min_points=0):
    return make_diagram(draw(st.lists(pair, min_size=min_points, max_size=max_points)))


def diagram_counter(diagram):
    """Multiset of (birth, death, birth_xy, death_xy, is_global) for 2D fields."""
    return Counter(
        (
            p.birth,
            p.death,
            tuple(int(c) for c in p.birth_location[:2]),
            tuple(int(c) for c in p.death_location[:2]),
            p.pair_class == "global",
        )
        for p in diagram.points
    )
