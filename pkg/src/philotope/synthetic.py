"""Synthetic point clouds for validating the persistence engine.

Three shapes: a unit circle, a noisy unit circle, and two unit circles
with centers three radii apart.  Seeded, hence reproducible.
"""

from __future__ import annotations

import numpy as np

from .embedding import PointCloud

SHAPES = ("circle", "noisy-circle", "two-circles")


def synthetic_cloud(shape: str, n: int, noise: float = 0.1,
                    seed: int = 0) -> PointCloud:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)

    def circle(m: int, center=(0.0, 0.0), sigma: float = 0.0) -> np.ndarray:
        angles = rng.uniform(0.0, 2.0 * np.pi, size=m)
        pts = np.column_stack([np.cos(angles), np.sin(angles)])
        if sigma > 0.0:
            pts = pts + rng.normal(0.0, sigma, size=pts.shape)
        return pts + np.asarray(center)

    if shape == "circle":
        pts = circle(n)
    elif shape == "noisy-circle":
        pts = circle(n, sigma=noise)
    elif shape == "two-circles":
        half = n // 2
        pts = np.vstack([circle(n - half), circle(half, center=(3.0, 0.0))])
    else:
        raise ValueError(f"unknown shape {shape!r}; choose from {SHAPES}")
    labels = [f"p{i:04d}" for i in range(len(pts))]
    return PointCloud(points=pts, labels=labels)
