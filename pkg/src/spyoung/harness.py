"""Monte-Carlo estimation of the kernel and the comparison pipeline.

Replicated sampling feeds per-replicate one- and two-point counts; the
determinantal relation rho2(i,j) = rho(i) rho(j) - K(i,j)^2 turns them into
squared kernel estimates, and box-and-whisker summaries across replicates are
compared against the exact Christoffel-Darboux ratio and the discrete sine
kernel with the limiting density.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import __version__, backend
from .asymptotics import limit_density, sine_kernel
from .errors import DomainError, ResourceLimitError
from .kernel import _context
from .params import EnsembleParams
from .sampling import SAMPLE_GUARD, indicator_matrix, sample_shapes_array, stream

THREADS_ENV = "SPYOUNG_THREADS"


def default_workers() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class SampleBatch:
    """Per-replicate sufficient statistics of a replicated sampling run.

    ``counts1[r, a-1]`` counts samples of replicate r with a particle at a;
    ``counts2[r, a-1, b-1]`` counts samples with particles at both a and b.
    """

    params: EnsembleParams
    seed: int
    num_samples: int
    num_replicates: int
    counts1: np.ndarray
    counts2: np.ndarray
    backend_name: str = ""

    @property
    def rho1(self) -> np.ndarray:
        return self.counts1 / self.num_samples

    def digest(self) -> str:
        import hashlib

        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.counts1).tobytes())
        h.update(np.ascontiguousarray(self.counts2).tobytes())
        return h.hexdigest()[:16]


def _replicate_counts(
    params: EnsembleParams, num_samples: int, seed: int, rep: int
) -> tuple[np.ndarray, np.ndarray]:
    shapes = sample_shapes_array(params, num_samples, stream(seed, rep))
    ind = indicator_matrix(shapes, params)
    c1 = ind.sum(axis=0, dtype=np.int64)
    f = ind.astype(np.float32)
    c2 = np.rint(f.T @ f).astype(np.int64)
    return c1, c2


def _worker(args) -> tuple[int, np.ndarray, np.ndarray]:
    params, num_samples, seed, rep = args
    c1, c2 = _replicate_counts(params, num_samples, seed, rep)
    return rep, c1, c2


def run_sampling(
    params: EnsembleParams,
    num_samples: int,
    num_replicates: int,
    seed: int,
    workers: int | None = None,
) -> SampleBatch:
    """Replicated Proctor sampling; deterministic in (seed, params).

    Replicate r draws from the Philox stream (seed, r), so the result is
    independent of the worker pool layout.
    """
    params.require_symmetric("run_sampling")
    if params.n * params.k * num_samples * num_replicates > SAMPLE_GUARD:
        raise ResourceLimitError("requested batch exceeds the sampling guard")
    L = params.lattice_max
    counts1 = np.zeros((num_replicates, L), dtype=np.int64)
    counts2 = np.zeros((num_replicates, L, L), dtype=np.int64)
    workers = workers if workers is not None else default_workers()
    jobs = [(params, num_samples, seed, r) for r in range(num_replicates)]
    if workers <= 1 or num_replicates == 1:
        for job in jobs:
            rep, c1, c2 = _worker(job)
            counts1[rep], counts2[rep] = c1, c2
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for rep, c1, c2 in pool.map(_worker, jobs, chunksize=4):
                counts1[rep], counts2[rep] = c1, c2
    return SampleBatch(
        params, seed, num_samples, num_replicates, counts1, counts2, backend.BACKEND
    )


@dataclass(frozen=True)
class EmpiricalStats:
    """Replicate-level kernel-ratio estimates around one anchor."""

    anchor: int
    j: np.ndarray
    ratios: np.ndarray  # (replicates, len(j)), theory-signed
    ksq: np.ndarray  # (replicates, len(j)), raw squared-kernel estimates
    rho_anchor: np.ndarray  # (replicates,)
    q1: np.ndarray
    median: np.ndarray
    q3: np.ndarray
    whisker_lo: np.ndarray
    whisker_hi: np.ndarray
    stderr: np.ndarray
    clamped: int


def empirical_kernel_ratio(
    batch: SampleBatch, anchor: int, j_range: Sequence[int]
) -> EmpiricalStats:
    """Signed ratio estimates K(anchor, j)/K(anchor, anchor) per replicate.

    Sampling determines only the squared kernel; the sign is taken from the
    exact kernel, and the raw squared estimates are reported alongside.
    Negative squared estimates are clamped to zero (counted in ``clamped``).
    """
    params = batch.params
    L = params.lattice_max
    if not 1 <= anchor <= L:
        raise DomainError(f"anchor must lie in 1..{L}")
    j = np.asarray(list(j_range), dtype=int)
    if np.any((j < 1) | (j > L)):
        raise DomainError(f"j range must lie in 1..{L}")
    S = batch.num_samples
    rho_a = batch.counts1[:, anchor - 1] / S
    rho_j = batch.counts1[:, j - 1] / S
    rho2 = batch.counts2[:, anchor - 1, :][:, j - 1] / S
    at_anchor = j == anchor
    ksq_raw = rho_a[:, None] * rho_j - rho2
    ksq_raw = np.where(at_anchor[None, :], rho_a[:, None] ** 2, ksq_raw)
    clamped = int(np.sum(ksq_raw[:, ~at_anchor] < 0))
    ksq = np.maximum(ksq_raw, 0.0)
    ctx = _context(params)
    half = params.K // 2
    sign = np.array(
        [
            1.0 if jj == anchor else np.sign(ctx.pair_value(anchor + half, jj + half))
            for jj in j
        ]
    )
    with np.errstate(invalid="ignore", divide="ignore"):
        ratios = sign[None, :] * np.sqrt(ksq) / rho_a[:, None]
    ratios = np.nan_to_num(ratios, nan=0.0, posinf=0.0, neginf=0.0)
    ratios[:, at_anchor] = 1.0
    q1, med, q3 = np.percentile(ratios, [25.0, 50.0, 75.0], axis=0)
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    whisker_lo = np.array(
        [ratios[:, c][ratios[:, c] >= lo_fence[c]].min() for c in range(j.size)]
    )
    whisker_hi = np.array(
        [ratios[:, c][ratios[:, c] <= hi_fence[c]].max() for c in range(j.size)]
    )
    stderr = ratios.std(axis=0, ddof=1) / np.sqrt(batch.num_replicates)
    return EmpiricalStats(
        anchor, j, ratios, ksq_raw, rho_a, q1, med, q3, whisker_lo, whisker_hi, stderr, clamped
    )


@dataclass(frozen=True)
class ComparisonTable:
    """Rows of the empirical/CD/sine comparison plus run metadata."""

    columns: dict[str, np.ndarray]
    metadata: dict = field(default_factory=dict)

    COLUMN_ORDER = (
        "j",
        "delta",
        "q1",
        "median",
        "q3",
        "whisker_lo",
        "whisker_hi",
        "cd_ratio",
        "sine_ratio",
    )

    @property
    def sup_cd_sine(self) -> float:
        return float(np.max(np.abs(self.columns["cd_ratio"] - self.columns["sine_ratio"])))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.COLUMN_ORDER)
        for row in zip(*(self.columns[c] for c in self.COLUMN_ORDER)):
            writer.writerow(
                [int(v) if float(v).is_integer() and c in ("j", "delta") else repr(float(v))
                 for c, v in zip(self.COLUMN_ORDER, row)]
            )
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "metadata": self.metadata,
            "columns": {c: np.asarray(self.columns[c]).tolist() for c in self.COLUMN_ORDER},
        }
        return json.dumps(payload, indent=2)


def parse_csv(text: str) -> dict[str, np.ndarray]:
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    cols = {h: [] for h in header}
    for row in body:
        for h, v in zip(header, row):
            cols[h].append(float(v))
    return {
        h: np.array(vs, dtype=int if h in ("j", "delta") else float)
        for h, vs in cols.items()
    }


def anchor_position(anchor: int, params: EnsembleParams) -> float:
    """Macroscopic bulk coordinate of a positive lattice anchor: x = a/K."""
    return anchor / params.K


def compare_curves(
    batch: SampleBatch, anchor: int, j_range: Sequence[int]
) -> ComparisonTable:
    """Empirical quartiles vs the exact CD ratio vs the sine-kernel ratio.

    The sine curve uses the limiting density at the anchor's macroscopic
    position x = anchor/K; the exact ratio comes from the CD kernel.
    """
    params = batch.params
    stats = empirical_kernel_ratio(batch, anchor, j_range)
    ctx = _context(params)
    half = params.K // 2
    denom = ctx.pair_value(anchor + half, anchor + half)
    cd = np.array([ctx.pair_value(anchor + half, jj + half) / denom for jj in stats.j])
    x = anchor_position(anchor, params)
    rho = limit_density(x, float(params.H))
    sine = np.array([sine_kernel(int(jj - anchor), rho) for jj in stats.j])
    columns = {
        "j": stats.j,
        "delta": stats.j - anchor,
        "q1": stats.q1,
        "median": stats.median,
        "q3": stats.q3,
        "whisker_lo": stats.whisker_lo,
        "whisker_hi": stats.whisker_hi,
        "cd_ratio": cd,
        "sine_ratio": sine,
    }
    meta = {
        "n": params.n,
        "k": params.k,
        "seed": batch.seed,
        "num_samples": batch.num_samples,
        "num_replicates": batch.num_replicates,
        "anchor": anchor,
        "anchor_x": x,
        "rho": rho,
        "anchor_map": "x = anchor/K",
        "backend": batch.backend_name,
        "version": __version__,
        "clamped_negative_ksq": stats.clamped,
    }
    table = ComparisonTable(columns, meta)
    table.metadata["sup_cd_sine"] = table.sup_cd_sine
    return table
