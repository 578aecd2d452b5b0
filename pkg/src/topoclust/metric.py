"""Wasserstein distance between persistence diagrams.

Points are compared with the Euclidean distance in the birth/death plane,
optionally blended with the distance between critical point positions
("geometric lifting"). Matching a point to the diagonal costs its distance to
its orthogonal projection; the geometric part of that cost is zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .diagram import DiagramPoint, PersistenceDiagram
from .errors import FamilyMismatch, InvalidParameter

DIAGONAL = -1

# finite stand-in for forbidden pairs; scipy rejects infeasible inf matrices
_FORBIDDEN = 1e300


@dataclass(frozen=True)
class LiftingParams:
    alpha: float = 0.0
    lambda_min: float = 0.0
    lambda_max: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "lambda_min", "lambda_max"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InvalidParameter(f"{name} must lie in [0, 1], got {v}")

    def lam(self, family: str) -> float:
        return self.lambda_max if family == "maxima" else self.lambda_min


NO_LIFTING = LiftingParams()


@dataclass(frozen=True)
class DiagramAssignment:
    """Optimal matching; ``pairs`` hold indices into A and B or ``DIAGONAL``."""

    pairs: tuple[tuple[int, int], ...]
    cost: float

    def partner_of_a(self, n_a: int) -> np.ndarray:
        out = np.full(n_a, DIAGONAL, dtype=np.intp)
        for i, j in self.pairs:
            if i != DIAGONAL:
                out[i] = j
        return out

    def partner_of_b(self, n_b: int) -> np.ndarray:
        out = np.full(n_b, DIAGONAL, dtype=np.intp)
        for i, j in self.pairs:
            if j != DIAGONAL:
                out[j] = i
        return out


def diagonal_projection(a: DiagramPoint) -> DiagramPoint:
    m = 0.5 * (a.birth + a.death)
    return a._replace(birth=m, death=m)


def critical_position(point: DiagramPoint, lam: float) -> np.ndarray:
    return lam * np.asarray(point.death_location) + (1.0 - lam) * np.asarray(point.birth_location)


def pointwise_distance(
    a: DiagramPoint, b: DiagramPoint, lifting: LiftingParams = NO_LIFTING, family="minima"
) -> float:
    if a.on_diagonal() and b.on_diagonal():
        return 0.0
    plane = (a.birth - b.birth) ** 2 + (a.death - b.death) ** 2
    if lifting.alpha == 0.0:
        return math.sqrt(plane)
    lam = lifting.lam(family)
    geo = float(np.sum((critical_position(a, lam) - critical_position(b, lam)) ** 2))
    return math.sqrt((1.0 - lifting.alpha) * plane + lifting.alpha * geo)


def positions(diagram: PersistenceDiagram, lifting: LiftingParams) -> np.ndarray:
    lam = lifting.lam(diagram.family)
    return lam * diagram.death_locations + (1.0 - lam) * diagram.birth_locations


def cost_matrices(A: PersistenceDiagram, B: PersistenceDiagram, lifting: LiftingParams = NO_LIFTING):
    """Squared costs: (point-to-point n_A x n_B, A-to-diagonal, B-to-diagonal)."""
    w = 1.0 - lifting.alpha
    pp = w * (
        (A.births[:, None] - B.births[None, :]) ** 2
        + (A.deaths[:, None] - B.deaths[None, :]) ** 2
    )
    if lifting.alpha > 0.0:
        diff = positions(A, lifting)[:, None, :] - positions(B, lifting)[None, :, :]
        pp = pp + lifting.alpha * np.sum(diff**2, axis=2)
    both_diag = (A.births == A.deaths)[:, None] & (B.births == B.deaths)[None, :]
    pp[both_diag] = 0.0
    a_diag = w * 0.5 * (A.deaths - A.births) ** 2
    b_diag = w * 0.5 * (B.deaths - B.births) ** 2
    return pp, a_diag, b_diag


def solve_assignment(pp: np.ndarray, a_diag: np.ndarray, b_diag: np.ndarray):
    """Minimum-cost augmented matching from precomputed squared costs.

    The (n_A + n_B) square problem has A and the diagonal slots of B as rows,
    B and the diagonal slots of A as columns; slot-to-slot pairs are free.
    Returns ``(pairs, total squared cost)``.
    """
    na, nb = pp.shape
    if na == 0 and nb == 0:
        return (), 0.0
    size = na + nb
    big = np.zeros((size, size))
    big[:na, :nb] = pp
    big[:na, nb:] = _FORBIDDEN
    big[:na, nb:][np.diag_indices(na)] = a_diag
    big[na:, :nb] = _FORBIDDEN
    big[na:, :nb][np.diag_indices(nb)] = b_diag
    rows, cols = linear_sum_assignment(big)

    pairs = []
    total = 0.0
    for r, c in zip(rows.tolist(), cols.tolist()):
        if r < na and c < nb:
            pairs.append((r, c))
            total += pp[r, c]
        elif r < na:
            pairs.append((r, DIAGONAL))
            total += a_diag[r]
        elif c < nb:
            pairs.append((DIAGONAL, c))
            total += b_diag[c]
    pairs.sort(key=lambda p: (p[0] == DIAGONAL, p[0], p[1]))
    return tuple(pairs), float(total)


def wasserstein_distance(
    A: PersistenceDiagram, B: PersistenceDiagram, lifting: LiftingParams = NO_LIFTING
) -> tuple[float, DiagramAssignment]:
    """W2 distance between two diagrams of the same family, with its matching."""
    if A.family != B.family:
        raise FamilyMismatch(f"cannot compare {A.family} and {B.family} diagrams")
    pairs, total = solve_assignment(*cost_matrices(A, B, lifting))
    dist = math.sqrt(total)
    return dist, DiagramAssignment(pairs, dist)


def wasserstein(A, B, lifting: LiftingParams = NO_LIFTING) -> float:
    return wasserstein_distance(A, B, lifting)[0]


def assignment_cost(A, B, assignment: DiagramAssignment, lifting=NO_LIFTING) -> float:
    """Recompute the cost of ``assignment`` point by point."""
    total = 0.0
    for i, j in assignment.pairs:
        if i == DIAGONAL:
            b = B[j]
            total += pointwise_distance(b, diagonal_projection(b), lifting, B.family) ** 2
        elif j == DIAGONAL:
            a = A[i]
            total += pointwise_distance(a, diagonal_projection(a), lifting, A.family) ** 2
        else:
            total += pointwise_distance(A[i], B[j], lifting, A.family) ** 2
    return math.sqrt(total)


def distance_matrix(diagrams, lifting: LiftingParams = NO_LIFTING) -> np.ndarray:
    n = len(diagrams)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = wasserstein(diagrams[i], diagrams[j], lifting)
    return out
