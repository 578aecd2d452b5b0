"""Synthetic ensembles of noisy Gaussian mixtures."""
from __future__ import annotations

import numpy as np

from .errors import InvalidParameter
from .fields import Ensemble, ScalarField

# (center_x, center_y, amplitude, width) in unit-square coordinates.
# Patterns 0-2 differ by bump count; 3-4 reuse counts with other heights/layouts.
# Heights are large against the default noise so that the default 1% pruning
# keeps a few dozen noise pairs per member rather than hundreds.
GAUSSIAN_PATTERNS = (
    ((0.25, 0.30, 4.0, 0.10), (0.72, 0.70, 2.2, 0.10)),
    ((0.20, 0.75, 4.0, 0.09), (0.50, 0.25, 3.0, 0.09), (0.80, 0.70, 1.8, 0.09)),
    (
        (0.22, 0.22, 4.0, 0.08),
        (0.78, 0.22, 3.2, 0.08),
        (0.22, 0.78, 2.4, 0.08),
        (0.78, 0.78, 1.4, 0.08),
    ),
    ((0.50, 0.20, 1.6, 0.12), (0.50, 0.80, 3.6, 0.07)),
    ((0.15, 0.50, 2.6, 0.08), (0.50, 0.50, 1.2, 0.08), (0.85, 0.50, 3.8, 0.08)),
)


def gaussian_pattern(index: int, grid) -> np.ndarray:
    """Noise-free pattern ``index`` evaluated on an ``[x, y]`` grid of shape ``grid``."""
    nx, ny = grid
    x = np.linspace(0.0, 1.0, nx)[:, None]
    y = np.linspace(0.0, 1.0, ny)[None, :]
    out = np.zeros((nx, ny))
    for cx, cy, amp, width in GAUSSIAN_PATTERNS[index]:
        out += amp * np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (2.0 * width**2))
    return out


def generate_gaussians_ensemble(
    n_members: int,
    n_patterns: int = 3,
    grid=(64, 64),
    noise_sigma: float = 0.05,
    seed: int = 0,
) -> Ensemble:
    """Ensemble of 2D Gaussian mixtures with uniform noise.

    Member ``i`` uses pattern ``i % n_patterns``. Noise is drawn i.i.d. from
    U(-noise_sigma, noise_sigma) per vertex, in member order, from a single
    generator seeded with ``seed``.
    """
    if not 1 <= n_patterns <= len(GAUSSIAN_PATTERNS):
        raise InvalidParameter(f"n_patterns must be in 1..{len(GAUSSIAN_PATTERNS)}")
    if n_members < n_patterns:
        raise InvalidParameter("n_members must be at least n_patterns")
    if noise_sigma < 0:
        raise InvalidParameter("noise_sigma must be non-negative")
    grid = tuple(int(g) for g in grid)
    if len(grid) == 3:
        if grid[2] != 1:
            raise InvalidParameter("the Gaussians generator is 2D only")
        grid = grid[:2]
    if len(grid) != 2 or min(grid) < 2:
        raise InvalidParameter(f"invalid grid {grid}")

    rng = np.random.default_rng(seed)
    bases = [gaussian_pattern(p, grid) for p in range(n_patterns)]
    width = len(str(n_members - 1))
    members = []
    for i in range(n_members):
        values = bases[i % n_patterns]
        if noise_sigma > 0:
            values = values + rng.uniform(-noise_sigma, noise_sigma, size=grid)
        members.append(ScalarField.from_array(values, name=f"member_{i:0{width}d}"))
    meta = {
        "generator": "gaussians",
        "n_members": str(n_members),
        "n_patterns": str(n_patterns),
        "grid": "x".join(map(str, grid)),
        "noise_sigma": repr(float(noise_sigma)),
        "seed": str(seed),
    }
    return Ensemble(members, meta)


def pattern_labels(n_members: int, n_patterns: int) -> list[int]:
    return [i % n_patterns for i in range(n_members)]
