"""Interruptible Wasserstein barycenters (Frechet means) of persistence diagrams.

Each iteration matches the current centroid against every input diagram and
moves every centroid point to the arithmetic mean of its partners, where a
diagonal partner counts as the point's own diagonal projection. Input points
left unmatched spawn a new centroid point at the mean of themselves and n - 1
copies of their projection. With the matchings frozen this update can only
lower the energy, so the energy trace is non-increasing.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .budget import UNBOUNDED, TimeBudget
from .diagram import PersistenceDiagram
from .errors import EmptyInput, FamilyMismatch
from .metric import DIAGONAL, NO_LIFTING, LiftingParams, cost_matrices, solve_assignment

MAX_ITERATIONS = 100
ENERGY_RTOL = 1e-8


@dataclass
class BarycenterResult:
    centroid: PersistenceDiagram
    frechet_energy: float
    iterations: int
    converged: bool
    elapsed: float
    energy_trace: list = field(default_factory=list)
    distances: np.ndarray | None = None


def check_family(diagrams) -> str:
    if not diagrams:
        raise EmptyInput("no diagrams given")
    family = diagrams[0].family
    for d in diagrams[1:]:
        if d.family != family:
            raise FamilyMismatch("all diagrams must belong to the same family")
    return family


def _canonical_key(d: PersistenceDiagram):
    s = d.sorted()
    return (
        d.total_persistence(),
        len(s),
        s.births.tolist(),
        s.deaths.tolist(),
        s.birth_locations.ravel().tolist(),
        s.death_locations.ravel().tolist(),
    )


def median_diagram_index(diagrams) -> int:
    """Index of the diagram with median total persistence (lower median)."""
    order = sorted(range(len(diagrams)), key=lambda i: (_canonical_key(diagrams[i]), i))
    return order[(len(order) - 1) // 2]


def _match_all(centroid, diagrams, lifting, deadline, allow_abort):
    """Match the centroid against every diagram; ``None`` if the deadline hits."""
    out = []
    for d in diagrams:
        if allow_abort and deadline.expired():
            return None
        out.append(solve_assignment(*cost_matrices(centroid, d, lifting)))
    return out


def _update(centroid: PersistenceDiagram, matchings, diagrams) -> PersistenceDiagram:
    n = len(diagrams)
    m = len(centroid)
    mid = 0.5 * (centroid.births + centroid.deaths)
    sb = np.zeros(m)
    sd = np.zeros(m)
    sbl = np.zeros((m, 3))
    sdl = np.zeros((m, 3))
    new_b, new_d, new_bl, new_dl, new_cls = [], [], [], [], []

    for (pairs, _), d in zip(matchings, diagrams):
        p = np.array(pairs, dtype=np.intp).reshape(-1, 2)
        both = (p[:, 0] != DIAGONAL) & (p[:, 1] != DIAGONAL)
        to_diag = (p[:, 0] != DIAGONAL) & (p[:, 1] == DIAGONAL)
        spawned = p[p[:, 0] == DIAGONAL, 1]

        ci, di = p[both, 0], p[both, 1]
        sb[ci] += d.births[di]
        sd[ci] += d.deaths[di]
        sbl[ci] += d.birth_locations[di]
        sdl[ci] += d.death_locations[di]

        cj = p[to_diag, 0]
        sb[cj] += mid[cj]
        sd[cj] += mid[cj]
        sbl[cj] += centroid.birth_locations[cj]
        sdl[cj] += centroid.death_locations[cj]

        if spawned.size:
            xm = 0.5 * (d.births[spawned] + d.deaths[spawned])
            new_b.append((d.births[spawned] + (n - 1) * xm) / n)
            new_d.append((d.deaths[spawned] + (n - 1) * xm) / n)
            new_bl.append(d.birth_locations[spawned])
            new_dl.append(d.death_locations[spawned])
            new_cls.extend(d.pair_classes[j] for j in spawned)

    births = np.concatenate([sb / n] + new_b)
    deaths = np.concatenate([sd / n] + new_d)
    bl = np.concatenate([sbl / n] + new_bl) if m or new_bl else np.zeros((0, 3))
    dl = np.concatenate([sdl / n] + new_dl) if m or new_dl else np.zeros((0, 3))
    classes = list(centroid.pair_classes) + new_cls
    keep = deaths > births
    return PersistenceDiagram(
        births[keep],
        deaths[keep],
        bl.reshape(-1, 3)[keep],
        dl.reshape(-1, 3)[keep],
        [c for c, k in zip(classes, keep) if k],
        centroid.family,
        "barycenter",
    )


def _same_centroid(a: PersistenceDiagram, b: PersistenceDiagram) -> bool:
    if len(a) != len(b):
        return False
    tol = dict(rtol=1e-12, atol=1e-14)
    return (
        np.allclose(a.births, b.births, **tol)
        and np.allclose(a.deaths, b.deaths, **tol)
        and np.allclose(a.birth_locations, b.birth_locations, **tol)
        and np.allclose(a.death_locations, b.death_locations, **tol)
    )


def frechet_energy(centroid, diagrams, lifting: LiftingParams = NO_LIFTING) -> float:
    return float(sum(solve_assignment(*cost_matrices(centroid, d, lifting))[1] for d in diagrams))


def barycenter(
    diagrams,
    lifting: LiftingParams = NO_LIFTING,
    budget: TimeBudget = UNBOUNDED,
    seed: int = 0,
    init: PersistenceDiagram | None = None,
    max_iterations: int = MAX_ITERATIONS,
) -> BarycenterResult:
    """Frechet mean of ``diagrams`` under W2, returning the best centroid found.

    The centroid starts at ``init`` or, by default, at the input diagram with
    median total persistence. The loop stops at a fixed point, when matchings
    repeat with a relative energy decrease below 1e-8, after
    ``max_iterations`` updates, or when ``budget`` runs out. The first
    matching round always completes so the returned energy is exact.
    ``seed`` is accepted for interface symmetry; the procedure is deterministic.
    """
    family = check_family(diagrams)
    deadline = budget.start()
    # canonical order makes the result independent of input order
    stripped = [d.without_diagonal() for d in diagrams]
    order = sorted(range(len(stripped)), key=lambda i: (_canonical_key(stripped[i]), i))
    diagrams = [stripped[i] for i in order]
    if init is None:
        centroid = diagrams[median_diagram_index(diagrams)]
    else:
        if init.family != family:
            raise FamilyMismatch("initial centroid family differs from the inputs")
        centroid = init.without_diagonal()
    centroid = PersistenceDiagram(
        centroid.births,
        centroid.deaths,
        centroid.birth_locations,
        centroid.death_locations,
        centroid.pair_classes,
        family,
        "barycenter",
    )

    trace = []
    best = None
    iterations = 0
    converged = False
    prev_pairs = None
    while True:
        matchings = _match_all(centroid, diagrams, lifting, deadline, allow_abort=best is not None)
        if matchings is None:
            break
        costs = np.array([c for _, c in matchings])
        energy = float(costs.sum())
        pairs = tuple(p for p, _ in matchings)
        stalled = (
            prev_pairs is not None
            and pairs == prev_pairs
            and trace[-1] - energy <= ENERGY_RTOL * max(trace[-1], 1e-300)
        )
        trace.append(energy)
        best = (centroid, energy, costs)
        if stalled:
            converged = True
            break
        if iterations >= max_iterations or deadline.expired():
            break
        updated = _update(centroid, matchings, diagrams)
        iterations += 1
        if _same_centroid(updated, centroid):
            converged = True
            break
        prev_pairs = pairs
        centroid = updated

    centroid, energy, costs = best
    distances = np.empty(len(order))
    distances[order] = np.sqrt(costs)
    return BarycenterResult(
        centroid=centroid,
        frechet_energy=energy,
        iterations=iterations,
        converged=converged,
        elapsed=deadline.elapsed(),
        energy_trace=trace,
        distances=distances,
    )
