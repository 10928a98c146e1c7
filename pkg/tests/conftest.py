"""Shared generators for randomized geometry tests."""

from __future__ import annotations

import numpy as np
import pytest

from curvebound import PolygonalCurve, SpaceForm, simple_mask_euclidean


def random_unit(rng, n: int, dim: int) -> np.ndarray:
    v = rng.standard_normal((n, dim))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def random_simple_polygons(rng, count: int, k: int = 5, dim: int = 3,
                           scale: float = 1.0) -> np.ndarray:
    """Batch of (count, k, dim) vertex arrays that pass the chord simplicity test."""
    out = []
    need = count
    while need > 0:
        batch = rng.standard_normal((max(2 * need, 64), k, dim)) * scale
        mask = simple_mask_euclidean(batch, closed=True)
        good = batch[mask]
        out.append(good[:need])
        need -= len(good[:need])
    return np.concatenate(out, axis=0)


def euclidean_curve(vertices, closed=True) -> PolygonalCurve:
    vertices = np.asarray(vertices, dtype=float)
    space = SpaceForm.euclidean(vertices.shape[-1])
    return PolygonalCurve(space, vertices, closed=closed)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
