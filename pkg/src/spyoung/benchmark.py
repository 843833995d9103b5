"""Sampler benchmark: compiled extension vs pure-Python fallback."""

from __future__ import annotations

import time

import numpy as np

from . import _fallback, backend
from .params import EnsembleParams
from .sampling import _packed_bits, stream


def _time_backend(fn, n: int, k: int, bits: np.ndarray, repeat: int) -> tuple[float, np.ndarray]:
    out = np.zeros((bits.shape[0], n), dtype=np.int32)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(n, k, bits, out)
        best = min(best, time.perf_counter() - t0)
    return best, out


def run_benchmark(
    params: EnsembleParams, num_samples: int, seed: int = 0, repeat: int = 3
) -> dict:
    """Time both sampling cores on identical bits and verify they agree."""
    n, k = params.n, params.k
    bits = _packed_bits(stream(seed), num_samples, n, k)
    report: dict = {
        "n": n,
        "k": k,
        "num_samples": num_samples,
        "active_backend": backend.BACKEND,
    }
    t_py, out_py = _time_backend(_fallback.sample_shapes, n, k, bits, repeat)
    report["python_seconds"] = t_py
    report["python_samples_per_second"] = num_samples / t_py
    if backend.BACKEND == "cython":
        t_cy, out_cy = _time_backend(backend.sample_shapes_batch, n, k, bits, repeat)
        report["cython_seconds"] = t_cy
        report["cython_samples_per_second"] = num_samples / t_cy
        report["speedup"] = t_py / t_cy
        report["outputs_identical"] = bool(np.array_equal(out_py, out_cy))
    return report
