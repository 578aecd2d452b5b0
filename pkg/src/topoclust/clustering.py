"""k-means over persistence diagrams with a wall-clock budget."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .barycenter import MAX_ITERATIONS as BARY_MAX_ITERATIONS
from .barycenter import barycenter, check_family, median_diagram_index
from .budget import UNBOUNDED, TimeBudget
from .diagram import PersistenceDiagram
from .errors import InvalidK
from .metric import NO_LIFTING, LiftingParams, wasserstein

MAX_ITERATIONS = 100
# share of the budget that barycenter updates may consume
UPDATE_SHARE = 0.8


@dataclass
class ClusteringResult:
    k: int
    centroids: list[PersistenceDiagram]
    assignment: np.ndarray
    distances: np.ndarray
    inertia: float
    iterations: int
    converged: bool
    elapsed: float
    inertia_trace: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.assignment)

    def cluster_sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.k)


def _column(diagrams, centroid, lifting, deadline=None):
    out = np.empty(len(diagrams))
    for i, d in enumerate(diagrams):
        if deadline is not None and deadline.expired():
            return None
        out[i] = wasserstein(d, centroid, lifting)
    return out


def _distance_matrix(diagrams, centroids, lifting, deadline):
    cols = []
    for c in centroids:
        col = _column(diagrams, c, lifting, deadline)
        if col is None:
            return None
        cols.append(col)
    return np.stack(cols, axis=1)


def kmeanspp_init(diagrams, k, lifting=NO_LIFTING, seed=0):
    """Pick k input diagrams as seeds; returns (indices, n x k distance matrix).

    The first seed is the median-total-persistence diagram; later seeds are
    drawn with probability proportional to the squared distance to the
    nearest seed chosen so far.
    """
    rng = np.random.default_rng(seed)
    n = len(diagrams)
    chosen = [median_diagram_index(diagrams)]
    cols = [_column(diagrams, diagrams[chosen[0]], lifting)]
    while len(chosen) < k:
        nearest = np.min(np.stack(cols, axis=1), axis=1)
        weights = nearest**2
        weights[chosen] = 0.0
        total = weights.sum()
        if total > 0:
            nxt = int(rng.choice(n, p=weights / total))
        else:
            free = [i for i in range(n) if i not in chosen]
            nxt = int(rng.choice(free))
        chosen.append(nxt)
        cols.append(_column(diagrams, diagrams[nxt], lifting))
    return chosen, np.stack(cols, axis=1)


def _assign(dist: np.ndarray):
    # argmin takes the first minimum, i.e. ties go to the smallest cluster id
    a = np.argmin(dist, axis=1)
    return a, dist[np.arange(len(a)), a]


def _repair_empty(diagrams, centroids, dist, lifting):
    """Re-seed empty clusters with the worst-fitting diagram of a shared cluster."""
    k = len(centroids)
    # a re-seeded diagram sits at distance 0 from its new centroid, so pinning
    # it there only breaks a tie
    pinned = {}
    while True:
        assignment, d = _assign(dist)
        for i, j in pinned.items():
            assignment[i], d[i] = j, dist[i, j]
        sizes = np.bincount(assignment, minlength=k)
        empty = np.flatnonzero(sizes == 0)
        if empty.size == 0:
            return assignment, d
        j = int(empty[0])
        movable = sizes[assignment] > 1
        movable[list(pinned)] = False
        i = int(np.argmax(np.where(movable, d, -np.inf)))
        centroids[j] = diagrams[i]
        dist[:, j] = _column(diagrams, diagrams[i], lifting)
        pinned[i] = j


def cluster(
    diagrams,
    k: int,
    lifting: LiftingParams = NO_LIFTING,
    budget: TimeBudget = UNBOUNDED,
    seed: int = 0,
    max_iterations: int = MAX_ITERATIONS,
) -> ClusteringResult:
    """Cluster ``diagrams`` into ``k`` groups by alternating assignment and update.

    Returns the last state whose assignment round completed, so every
    reported distance is the exact W2 distance to the reported centroid. The
    seeding round always runs to completion, even past the deadline.
    """
    check_family(diagrams)
    n = len(diagrams)
    if not 1 <= k <= n:
        raise InvalidK(f"k must lie in 1..{n}, got {k}")
    deadline = budget.start()
    update_allowance = (
        None if not budget.bounded else UPDATE_SHARE * budget.max_duration
    )
    update_spent = 0.0

    diagrams = [d.without_diagonal() for d in diagrams]
    chosen, dist = kmeanspp_init(diagrams, k, lifting, seed)
    centroids = [diagrams[i] for i in chosen]
    assignment, dists = _repair_empty(diagrams, centroids, dist, lifting)
    trace = [float(np.sum(dists**2))]

    iterations = 0
    converged = False
    while iterations < max_iterations and not deadline.expired():
        # Update
        new_centroids = []
        interrupted = False
        for j in range(k):
            members = [diagrams[i] for i in np.flatnonzero(assignment == j)]
            if update_allowance is None:
                sub = UNBOUNDED
            else:
                share = (update_allowance - update_spent) / (k - j)
                sub = deadline.budget(cap=max(share, 0.0))
            res = barycenter(members, lifting, sub, seed, init=centroids[j])
            update_spent += res.elapsed
            interrupted |= not res.converged and res.iterations < BARY_MAX_ITERATIONS
            new_centroids.append(res.centroid)
        if deadline.expired():
            break

        # Assignment
        new_dist = _distance_matrix(diagrams, new_centroids, lifting, deadline)
        if new_dist is None:
            break
        new_assignment, new_dists = _repair_empty(diagrams, new_centroids, new_dist, lifting)
        iterations += 1
        stable = np.array_equal(new_assignment, assignment)
        centroids, assignment, dists = new_centroids, new_assignment, new_dists
        trace.append(float(np.sum(dists**2)))
        if stable:
            converged = not interrupted
            break

    return ClusteringResult(
        k=k,
        centroids=centroids,
        assignment=assignment.astype(np.intp),
        distances=dists,
        inertia=float(np.sum(dists**2)),
        iterations=iterations,
        converged=converged,
        elapsed=deadline.elapsed(),
        inertia_trace=trace,
    )


def _cluster_task(args):
    return cluster(*args)


def resolve_threads(threads=None) -> int:
    if threads in (None, "auto", "AUTO", 0):
        env = os.environ.get("TOPOCLUST_THREADS")
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(threads))


def sweep(
    diagrams,
    k_min: int,
    k_max: int,
    lifting: LiftingParams = NO_LIFTING,
    budget_per_k: TimeBudget = UNBOUNDED,
    seed: int = 0,
    threads: int | None = 1,
) -> list[ClusteringResult]:
    """One independent clustering per k in ``k_min..k_max``.

    With ``threads > 1`` the values of k run in separate worker processes;
    each run owns its budget, and results come back in k order.
    """
    check_family(diagrams)
    n = len(diagrams)
    if not 1 <= k_min <= k_max <= n:
        raise InvalidK(f"need 1 <= k_min <= k_max <= {n}, got {k_min}..{k_max}")
    tasks = [(diagrams, k, lifting, budget_per_k, seed) for k in range(k_min, k_max + 1)]
    workers = min(resolve_threads(threads), len(tasks))
    if workers == 1:
        return [_cluster_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_cluster_task, tasks))
