"""Pure-Python batch sampler, API-compatible with the compiled core."""

from __future__ import annotations

import numpy as np

from .tableaux import _insert


def sample_shapes(n: int, k: int, bits: np.ndarray, out: np.ndarray) -> None:
    """Decode packed bit rows and record the P shapes (see ``_insertion.pyx``)."""
    nbits = n * 2 * k
    for s in range(bits.shape[0]):
        flat = np.unpackbits(bits[s].view(np.uint8), bitorder="little")[:nbits]
        m = flat.reshape(n, 2 * k)
        rows: list[list[int]] = []
        for step in range(k):
            b0 = m[:, 2 * step]
            b1 = m[:, 2 * step + 1]
            for i in range(n - 1, -1, -1):
                if b0[i]:
                    _insert(rows, 2 * i + 2)
                    if not b1[i]:
                        _insert(rows, 2 * i + 1)
                elif not b1[i]:
                    _insert(rows, 2 * i + 1)
        out[s, :] = 0
        for i, row in enumerate(rows):
            out[s, i] = len(row)
