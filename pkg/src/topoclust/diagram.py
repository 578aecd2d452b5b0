"""Persistence diagram containers.

A diagram is stored column-wise (births, deaths, locations, pair classes) so
that cost matrices in :mod:`topoclust.metric` can be built with numpy
broadcasting. :class:`DiagramPoint` is the row view used by the scalar API.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import InvalidParameter

FAMILIES = ("minima", "maxima")
PAIR_CLASSES = ("min_saddle", "saddle_max", "global")


class DiagramPoint(NamedTuple):
    birth: float
    death: float
    birth_location: tuple = (0.0, 0.0, 0.0)
    death_location: tuple = (0.0, 0.0, 0.0)
    pair_class: str = "min_saddle"

    def persistence(self) -> float:
        return self.death - self.birth

    def on_diagonal(self) -> bool:
        return self.birth == self.death


def _frozen(a):
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class PersistenceDiagram:
    births: np.ndarray
    deaths: np.ndarray
    birth_locations: np.ndarray
    death_locations: np.ndarray
    pair_classes: tuple[str, ...]
    family: str = "minima"
    source_name: str = ""

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParameter(f"unknown diagram family {self.family!r}")
        b = np.array(self.births, dtype=np.float64).reshape(-1)
        d = np.array(self.deaths, dtype=np.float64).reshape(-1)
        n = b.size
        bl = np.array(self.birth_locations, dtype=np.float64).reshape(n, 3)
        dl = np.array(self.death_locations, dtype=np.float64).reshape(n, 3)
        pc = tuple(str(c) for c in self.pair_classes)
        if d.size != n or len(pc) != n:
            raise InvalidParameter("diagram columns have different lengths")
        if np.any(d < b):
            raise InvalidParameter("diagram points must satisfy death >= birth")
        unknown = set(pc) - set(PAIR_CLASSES)
        if unknown:
            raise InvalidParameter(f"unknown pair class {sorted(unknown)[0]!r}")
        object.__setattr__(self, "births", _frozen(b))
        object.__setattr__(self, "deaths", _frozen(d))
        object.__setattr__(self, "birth_locations", _frozen(bl))
        object.__setattr__(self, "death_locations", _frozen(dl))
        object.__setattr__(self, "pair_classes", pc)

    @classmethod
    def from_points(cls, points: Iterable, family="minima", source_name=""):
        pts = [p if isinstance(p, DiagramPoint) else DiagramPoint(*p) for p in points]
        return cls(
            [p.birth for p in pts],
            [p.death for p in pts],
            np.array([p.birth_location for p in pts], dtype=np.float64).reshape(-1, 3),
            np.array([p.death_location for p in pts], dtype=np.float64).reshape(-1, 3),
            [p.pair_class for p in pts],
            family,
            source_name,
        )

    @classmethod
    def empty(cls, family="minima", source_name=""):
        return cls.from_points([], family, source_name)

    def __len__(self):
        return self.births.size

    def __getitem__(self, i) -> DiagramPoint:
        return DiagramPoint(
            float(self.births[i]),
            float(self.deaths[i]),
            tuple(float(x) for x in self.birth_locations[i]),
            tuple(float(x) for x in self.death_locations[i]),
            self.pair_classes[i],
        )

    @property
    def points(self) -> list[DiagramPoint]:
        return [self[i] for i in range(len(self))]

    def persistence(self) -> np.ndarray:
        return self.deaths - self.births

    def total_persistence(self) -> float:
        return float(np.sum(self.persistence()))

    def subset(self, mask) -> PersistenceDiagram:
        """Points selected by a boolean mask or an index array, in that order."""
        idx = np.asarray(mask)
        if idx.dtype == bool:
            idx = np.flatnonzero(idx)
        idx = idx.astype(np.intp)
        return PersistenceDiagram(
            self.births[idx],
            self.deaths[idx],
            self.birth_locations[idx],
            self.death_locations[idx],
            [self.pair_classes[i] for i in idx],
            self.family,
            self.source_name,
        )

    def without_diagonal(self) -> PersistenceDiagram:
        keep = self.deaths > self.births
        return self if keep.all() else self.subset(keep)

    def without_global(self) -> PersistenceDiagram:
        return self.subset(np.array([c != "global" for c in self.pair_classes], dtype=bool))

    def sorted(self) -> PersistenceDiagram:
        """Canonical point order, used for multiset comparisons."""
        order = np.lexsort(
            tuple(self.death_locations.T[::-1])
            + tuple(self.birth_locations.T[::-1])
            + (self.deaths, self.births)
        )
        return self.subset(order)

    def same_points(self, other: PersistenceDiagram) -> bool:
        """Multiset equality of points, ignoring family and name."""
        a, b = self.sorted(), other.sorted()
        return (
            len(a) == len(b)
            and np.array_equal(a.births, b.births)
            and np.array_equal(a.deaths, b.deaths)
            and np.array_equal(a.birth_locations, b.birth_locations)
            and np.array_equal(a.death_locations, b.death_locations)
            and a.pair_classes == b.pair_classes
        )

    def __eq__(self, other):
        if not isinstance(other, PersistenceDiagram):
            return NotImplemented
        return (
            self.family == other.family
            and self.source_name == other.source_name
            and len(self) == len(other)
            and np.array_equal(self.births, other.births)
            and np.array_equal(self.deaths, other.deaths)
            and np.array_equal(self.birth_locations, other.birth_locations)
            and np.array_equal(self.death_locations, other.death_locations)
            and self.pair_classes == other.pair_classes
        )

    def __repr__(self):
        return (
            f"PersistenceDiagram(family={self.family!r}, n={len(self)}, "
            f"source={self.source_name!r})"
        )


def prune_by_persistence(diagram: PersistenceDiagram, threshold: float) -> PersistenceDiagram:
    """Keep points with persistence strictly above ``threshold`` plus the global pair."""
    if threshold < 0:
        raise InvalidParameter("threshold must be non-negative")
    is_global = np.array([c == "global" for c in diagram.pair_classes], dtype=bool)
    return diagram.subset((diagram.persistence() > threshold) | is_global)
