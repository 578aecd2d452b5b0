"""Scalar fields on regular grids and ensembles of them."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidParameter, NonFiniteValue


def _triple(values, name, cast):
    out = tuple(cast(v) for v in values)
    if len(out) != 3:
        raise InvalidParameter(f"{name} needs 3 components, got {len(out)}")
    return out


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Piecewise-linear scalar field sampled on a regular grid.

    ``values`` is stored flat in row-major order with x varying fastest, so the
    vertex with grid coordinates (i, j, k) lives at ``i + nx * (j + ny * k)``.
    """

    dims: tuple[int, int, int]
    values: np.ndarray
    spacing: tuple[float, float, float] = (1.0, 1.0, 1.0)
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0)
    name: str = ""

    def __post_init__(self):
        dims = _triple(self.dims, "dims", int)
        if min(dims) < 1 or max(dims) < 2:
            raise InvalidParameter(f"invalid grid dims {dims}")
        spacing = _triple(self.spacing, "spacing", float)
        if min(spacing) <= 0:
            raise InvalidParameter(f"spacing must be positive, got {spacing}")
        origin = _triple(self.origin, "origin", float)
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        if values.size != dims[0] * dims[1] * dims[2]:
            raise DimensionMismatch(
                self.name or "<field>",
                f"{values.size} values for dims {dims}",
            )
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            raise NonFiniteValue(self.name or "<field>", int(bad[0]))
        values.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_array(cls, array, spacing=(1.0, 1.0, 1.0), origin=(0.0, 0.0, 0.0), name=""):
        """Build a field from a 1-, 2- or 3-d array indexed ``[x, y, z]``."""
        a = np.asarray(array, dtype=np.float64)
        if a.ndim > 3:
            raise InvalidParameter("at most 3 dimensions are supported")
        shape = a.shape + (1,) * (3 - a.ndim)
        # x fastest means Fortran order for an [x, y, z] array
        return cls(shape, a.reshape(-1, order="F"), spacing, origin, name)

    @property
    def n_vertices(self) -> int:
        return self.values.size

    def as_array(self) -> np.ndarray:
        """Values as an ``[x, y, z]`` indexed array."""
        return self.values.reshape(self.dims, order="F")

    def vertex_coords(self) -> np.ndarray:
        """World coordinates of every vertex, shape (n_vertices, 3)."""
        nx, ny, nz = self.dims
        idx = np.arange(self.n_vertices)
        grid = np.stack([idx % nx, (idx // nx) % ny, idx // (nx * ny)], axis=1)
        return np.asarray(self.origin) + grid * np.asarray(self.spacing)

    def same_grid(self, other: ScalarField) -> bool:
        return (
            self.dims == other.dims
            and self.spacing == other.spacing
            and self.origin == other.origin
        )

    def __eq__(self, other):
        if not isinstance(other, ScalarField):
            return NotImplemented
        return (
            self.same_grid(other)
            and self.name == other.name
            and np.array_equal(self.values, other.values)
        )


@dataclass(frozen=True, eq=False)
class Ensemble:
    members: tuple[ScalarField, ...]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise InvalidParameter("an ensemble needs at least one member")
        for m in members[1:]:
            if not m.same_grid(members[0]):
                raise DimensionMismatch(m.name or "<field>")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "metadata", dict(self.metadata))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def __eq__(self, other):
        if not isinstance(other, Ensemble):
            return NotImplemented
        return self.members == other.members and self.metadata == other.metadata
