"""Seedable sampling of random diagrams via the two-column insertion.

Randomness comes from counter-based Philox streams: stream ``(seed, index)``
is derived through ``SeedSequence((seed, index))``, so replicates can be drawn
in any order (or in parallel) with bit-identical results.
"""

from __future__ import annotations

import numpy as np

from . import backend
from .errors import ConsistencyError, ResourceLimitError
from .measure import Shape, normalize_shape
from .params import EnsembleParams

SAMPLE_GUARD = 5 * 10**9  # n*k*num_samples guard for a single batch call


def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Philox generator for sub-stream ``index`` of ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, index))))


def _packed_bits(rng: np.random.Generator, num: int, n: int, k: int) -> np.ndarray:
    words = (n * 2 * k + 63) // 64
    return rng.integers(0, 2**64, size=(num, words), dtype=np.uint64)


def sample_shapes_array(
    params: EnsembleParams, num_samples: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw ``num_samples`` diagrams; returns an (num_samples, n) array of row lengths."""
    params.require_symmetric("sampling")
    n, k = params.n, params.k
    if n * k * num_samples > SAMPLE_GUARD:
        raise ResourceLimitError("sample batch exceeds the n*k*num_samples guard")
    bits = _packed_bits(rng, num_samples, n, k)
    out = np.zeros((num_samples, n), dtype=np.int32)
    backend.sample_shapes_batch(n, k, bits, out)
    return out


def sample_diagram(params: EnsembleParams, seed: int) -> Shape:
    """One random diagram, deterministic in ``seed``."""
    shapes = sample_shapes_array(params, 1, stream(seed))
    return normalize_shape(tuple(int(v) for v in shapes[0]))


def indicator_matrix(shapes: np.ndarray, params: EnsembleParams) -> np.ndarray:
    """Particle indicators on the positive lattice 1..n+k, one row per sample.

    Column a-1 holds the indicator of a particle at coordinate a, where
    a_i = lambda_i + n - i + 1.
    """
    n, L = params.n, params.lattice_max
    coords = shapes + (np.arange(n, 0, -1, dtype=shapes.dtype))[None, :]
    ind = np.zeros((shapes.shape[0], L + 1), dtype=np.uint8)
    ind[np.arange(shapes.shape[0])[:, None], coords] = 1
    ind = ind[:, 1:]
    sums = ind.sum(axis=1)
    if not np.all(sums == n):
        raise ConsistencyError("a sample lost a particle")
    return ind
