"""Deterministic random point sets on spheres and balls.

All verification suites draw their probe points through these helpers with an
explicit seed so that reports are reproducible bit for bit.
"""

from __future__ import annotations

import numpy as np


def sphere_points(ambient_dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points on the unit sphere in R^ambient_dim, shape (count, ambient_dim)."""
    pts = rng.standard_normal((count, ambient_dim))
    norms = np.linalg.norm(pts, axis=1, keepdims=True)
    # Resample the (measure-zero) degenerate draws rather than dividing by ~0.
    bad = norms[:, 0] < 1e-12
    while np.any(bad):
        pts[bad] = rng.standard_normal((int(bad.sum()), ambient_dim))
        norms = np.linalg.norm(pts, axis=1, keepdims=True)
        bad = norms[:, 0] < 1e-12
    return pts / norms


def ball_points(
    dim: int, count: int, rng: np.random.Generator, max_norm: float = 1.0
) -> np.ndarray:
    """Uniform points in the ball of radius ``max_norm``, shape (count, dim)."""
    directions = sphere_points(dim, count, rng)
    radii = max_norm * rng.random(count) ** (1.0 / dim)
    return directions * radii[:, None]
