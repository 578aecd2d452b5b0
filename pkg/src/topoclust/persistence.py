"""Extremum persistence diagrams of grid scalar fields.

The grid is triangulated with the Freudenthal subdivision: every quad is cut
along its (+1, +1) diagonal and every cube into six tetrahedra sharing the
(+1, +1, +1) diagonal. In 2D this gives each interior vertex 6 neighbours, in
3D 14. Vertex order is the lexicographic order on (value, vertex index), which
acts as a symbolic perturbation and makes every pairing deterministic.
"""
from __future__ import annotations

import numpy as np

from .diagram import FAMILIES, PersistenceDiagram
from .errors import InvalidParameter
from .fields import ScalarField

# half of the Freudenthal stencil; the other half is the negation
_HALF_STENCIL = (
    (1, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
    (1, 1, 0),
    (1, 0, 1),
    (0, 1, 1),
    (1, 1, 1),
)


def freudenthal_offsets(dims) -> list[tuple[int, int, int]]:
    """Neighbour offsets of the Freudenthal triangulation restricted to ``dims``.

    Offsets along axes of extent 1 are dropped, so a (n, 1, 1) grid is a path
    and a (nx, ny, 1) grid uses the 6-neighbourhood.
    """
    offsets = []
    for off in _HALF_STENCIL:
        if any(o and d == 1 for o, d in zip(off, dims)):
            continue
        offsets.append(off)
        offsets.append(tuple(-o for o in off))
    return offsets


def neighbor_table(dims) -> np.ndarray:
    """Array of shape (n_vertices, n_offsets); -1 marks a missing neighbour."""
    nx, ny, nz = dims
    idx = np.arange(nx * ny * nz)
    x, y, z = idx % nx, (idx // nx) % ny, idx // (nx * ny)
    cols = []
    for dx, dy, dz in freudenthal_offsets(dims):
        X, Y, Z = x + dx, y + dy, z + dz
        ok = (X >= 0) & (X < nx) & (Y >= 0) & (Y < ny) & (Z >= 0) & (Z < nz)
        cols.append(np.where(ok, X + nx * (Y + ny * Z), -1))
    return np.stack(cols, axis=1) if cols else np.empty((idx.size, 0), dtype=np.intp)


def sublevel_pairs(values: np.ndarray, neighbors: np.ndarray):
    """Minimum-saddle pairs of the sublevel filtration.

    Returns ``(pairs, global_min, global_max)`` where ``pairs`` is a list of
    ``(minimum_vertex, saddle_vertex)``. When two components meet, the one whose
    minimum comes later in the vertex order dies at the merging vertex.
    """
    n = values.size
    order = np.lexsort((np.arange(n), values))
    rank = np.empty(n, dtype=np.intp)
    rank[order] = np.arange(n)

    parent = np.full(n, -1, dtype=np.intp)
    # the root of every component is its oldest vertex, i.e. its minimum
    parent_l = parent.tolist()
    rank_l = rank.tolist()
    nbrs = neighbors.tolist()

    def find(v):
        root = v
        while parent_l[root] != root:
            root = parent_l[root]
        while parent_l[v] != root:
            parent_l[v], v = root, parent_l[v]
        return root

    pairs = []
    for v in order.tolist():
        rv = rank_l[v]
        roots = set()
        for u in nbrs[v]:
            if u >= 0 and rank_l[u] < rv:
                roots.add(find(u))
        if not roots:
            parent_l[v] = v
            continue
        oldest = min(roots, key=rank_l.__getitem__)
        for r in sorted(roots, key=rank_l.__getitem__):
            if r != oldest:
                pairs.append((r, v))
                parent_l[r] = oldest
        parent_l[v] = oldest
    return pairs, int(order[0]), int(order[-1])


def compute_diagram(field: ScalarField, family: str = "minima") -> PersistenceDiagram:
    """Extremum persistence diagram of ``field``.

    For ``family="minima"`` the points are (f(minimum), f(saddle)) pairs of the
    sublevel filtration plus the global (min, max) pair. For ``"maxima"`` the
    same sweep runs on the negated field and every point is stored as
    (f(saddle), f(maximum)), so death >= birth holds for both families.
    Zero-persistence pairs are not reported.
    """
    if family not in FAMILIES:
        raise InvalidParameter(f"unknown family {family!r}")
    values = field.values if family == "minima" else -field.values
    pairs, gmin, gmax = sublevel_pairs(values, neighbor_table(field.dims))
    coords = field.vertex_coords()

    born = np.array([p[0] for p in pairs] + [gmin], dtype=np.intp)
    died = np.array([p[1] for p in pairs] + [gmax], dtype=np.intp)
    classes = ["min_saddle" if family == "minima" else "saddle_max"] * len(pairs)
    classes.append("global")

    if family == "minima":
        births, deaths = values[born], values[died]
        bloc, dloc = coords[born], coords[died]
    else:
        births, deaths = -values[died], -values[born]
        bloc, dloc = coords[died], coords[born]

    keep = deaths > births
    return PersistenceDiagram(
        births[keep],
        deaths[keep],
        bloc[keep],
        dloc[keep],
        [c for c, k in zip(classes, keep) if k],
        family,
        field.name,
    )
