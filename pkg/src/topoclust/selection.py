"""Information-criterion scores for choosing the number of clusters.

Clusters are modelled as identical spherical Gaussians in a space of
effective dimension d, with the shared variance estimated from the squared
W2 distances of each diagram to its centroid:

    sigma2 = sum_i dist_i^2 / (d (n - k))
    L      = sum_j n_j log n_j - n log n - (n d / 2) log(2 pi sigma2) - (d / 2)(n - k)
    AIC    = -2 L + 2 k d
    BIC    = -2 L + k d log n
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateVariance, InconsistentInputs, InvalidParameter, KEqualsN

CRITERIA = ("aic", "bic")


def _check_dim(d):
    if not d > 0:
        raise InvalidParameter(f"dimension d must be positive, got {d}")


def log_likelihood(result, d: float) -> tuple[float, float]:
    """Return ``(L, sigma2)`` for a clustering result.

    ``result`` needs ``k``, ``assignment`` and ``distances``; cluster sizes are
    counted from the assignment.
    """
    _check_dim(d)
    k = int(result.k)
    assignment = np.asarray(result.assignment)
    dist = np.asarray(result.distances, dtype=np.float64)
    n = assignment.size
    if n == k:
        raise KEqualsN(f"k = n = {n}: the variance estimate is undefined")
    if n < k:
        raise InvalidParameter(f"k = {k} exceeds n = {n}")
    sigma2 = float(np.sum(dist**2)) / (d * (n - k))
    if sigma2 == 0.0:
        raise DegenerateVariance(f"zero in-cluster variance at k = {k}")
    sizes = np.bincount(assignment, minlength=k)
    sizes = sizes[sizes > 0].astype(np.float64)
    L = (
        float(np.sum(sizes * np.log(sizes)))
        - n * math.log(n)
        - 0.5 * n * d * math.log(2.0 * math.pi * sigma2)
        - 0.5 * d * (n - k)
    )
    return L, sigma2


def penalty(criterion: str, k: int, d: float, n: int) -> float:
    if criterion == "aic":
        return 2.0 * k * d
    if criterion == "bic":
        return k * d * math.log(n)
    raise InvalidParameter(f"unknown criterion {criterion!r}")


def score(result, d: float) -> dict:
    L, _ = log_likelihood(result, d)
    n = len(result.assignment)
    k = int(result.k)
    return {c: -2.0 * L + penalty(c, k, d, n) for c in CRITERIA}


@dataclass
class KScore:
    k: int
    log_likelihood: float
    sigma2: float
    aic: float
    bic: float
    aic_normalized: float | None = None
    bic_normalized: float | None = None


@dataclass
class ScoreReport:
    dim: float
    n: int
    per_k: dict[int, KScore] = field(default_factory=dict)
    selected_k_aic: int = 0
    selected_k_bic: int = 0

    def curve(self, criterion: str, normalized: bool = True) -> list[tuple[int, float]]:
        key = f"{criterion}_normalized" if normalized else criterion
        return [(k, getattr(s, key)) for k, s in sorted(self.per_k.items())]


def _argmin_k(values: dict[int, float]) -> int:
    best = min(values.values())
    return min(k for k, v in values.items() if v == best)


def select_k(results, d: float) -> ScoreReport:
    """Score every clustering and pick the k minimising AIC and BIC.

    Results must cover a consecutive range of k on the same n diagrams. Ties
    go to the smaller k.
    """
    _check_dim(d)
    results = sorted(results, key=lambda r: r.k)
    if not results:
        raise InconsistentInputs("no clustering results to score")
    ns = {len(r.assignment) for r in results}
    if len(ns) != 1:
        raise InconsistentInputs(f"results disagree on n: {sorted(ns)}")
    ks = [int(r.k) for r in results]
    if ks != list(range(ks[0], ks[0] + len(ks))):
        raise InconsistentInputs(f"k values are not a consecutive range: {ks}")
    n = ns.pop()

    report = ScoreReport(dim=float(d), n=n)
    for r in results:
        L, s2 = log_likelihood(r, d)
        sc = score(r, d)
        report.per_k[int(r.k)] = KScore(int(r.k), L, s2, sc["aic"], sc["bic"])
    if 1 in report.per_k:
        base = report.per_k[1]
        for s in report.per_k.values():
            s.aic_normalized = s.aic / base.aic if base.aic != 0 else None
            s.bic_normalized = s.bic / base.bic if base.bic != 0 else None
    report.selected_k_aic = _argmin_k({k: s.aic for k, s in report.per_k.items()})
    report.selected_k_bic = _argmin_k({k: s.bic for k, s in report.per_k.items()})
    return report


# dimension of the birth/death plane hosting every diagram point
PLANE_DIMENSION = 2.0


def points_dimension(diagrams) -> float:
    """Twice the mean number of diagram points, and at least 2."""
    if not diagrams:
        raise InvalidParameter("no diagrams to size the dimension from")
    mean_points = float(np.mean([len(d) for d in diagrams]))
    return max(2.0, 2.0 * mean_points)


def resolve_dimension(mode, diagrams=None) -> float:
    """Effective dimension from a number or a named rule.

    ``"auto"``/``"plane"`` gives 2, the default; ``"points"`` gives
    :func:`points_dimension`. Large d makes the log-likelihood reward every
    extra cluster faster than the 2kd AIC penalty grows, so the plane default
    keeps both criteria conservative.
    """
    if mode is None:
        return PLANE_DIMENSION
    if isinstance(mode, str):
        m = mode.strip().lower()
        if m in ("auto", "plane"):
            return PLANE_DIMENSION
        if m == "points":
            return points_dimension(diagrams or [])
        try:
            mode = float(m)
        except ValueError:
            raise InvalidParameter(f"unknown dimension rule {mode!r}") from None
    _check_dim(mode)
    return float(mode)
