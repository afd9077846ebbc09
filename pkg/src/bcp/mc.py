"""Monte Carlo engine: node sampling, kernel averaging, bracketed estimates.

Paths are generated in chunks; chunk k draws from a Philox stream keyed
by (seed, k), so results are reproducible bit-for-bit regardless of how
many worker lanes evaluate the chunks.  Bracketed estimates evaluate the
inner and outer envelope bands on the same node samples (common random
numbers), which makes the bracket ordering hold path by path.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .boundary import (
    GeneralBoundary,
    Partition,
    PiecewiseLinearBand,
    PiecewiseLinearBoundary,
    envelopes,
)
from .errors import StartOutsideBandError
from .kernels import SeriesConfig, band_kernel


@dataclass(frozen=True)
class McConfig:
    paths: int = 1_000_000
    seed: int = 0
    chunk_size: int = 4_096
    series: SeriesConfig = field(default_factory=SeriesConfig)
    antithetic: bool = False

    def __post_init__(self):
        if self.paths < 1:
            raise ValueError("paths must be >= 1")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")


@dataclass(frozen=True)
class BcpEstimate:
    mean: float
    std_error: float
    paths: int
    bracket: tuple[float, float] | None = None
    series_cap_hit: bool = False

    def __post_init__(self):
        if not 0.0 <= self.mean <= 1.0:
            raise ValueError("mean must be a probability")
        if self.std_error < 0:
            raise ValueError("std_error must be >= 0")
        if self.bracket is not None and self.bracket[0] > self.bracket[1]:
            raise ValueError("bracket lower bound exceeds upper bound")

    @property
    def bracket_width(self) -> float | None:
        if self.bracket is None:
            return None
        return self.bracket[1] - self.bracket[0]


def _chunk_stream(seed: int, chunk_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), chunk_index]))


def sample_nodes(p: Partition, stream: np.random.Generator) -> np.ndarray:
    """One Brownian node vector x_1..x_n with the exact joint law."""
    z = stream.standard_normal(p.n)
    return np.cumsum(z * np.sqrt(p.dt))


def _worker_lanes(threads: int | None, n_chunks: int) -> int:
    if threads is None:
        threads = int(os.environ.get("BCP_THREADS", "0") or 0)
    if threads <= 0:
        threads = os.cpu_count() or 1
    return max(1, min(threads, n_chunks))


def _evaluate_bands(
    bands: list[PiecewiseLinearBand],
    cfg: McConfig,
    threads: int | None = None,
) -> tuple[list[tuple[float, float]], bool]:
    """Accumulate (sum g, sum g^2) per band over all chunks, in chunk order."""
    p = bands[0].partition
    sqrt_dt = np.sqrt(p.dt)
    n_chunks = -(-cfg.paths // cfg.chunk_size)

    def run_chunk(k: int):
        count = min(cfg.chunk_size, cfg.paths - k * cfg.chunk_size)
        z = _chunk_stream(cfg.seed, k).standard_normal((count, p.n))
        x = np.cumsum(np.multiply(z, sqrt_dt, out=z), axis=1)
        stats = []
        cap = False
        for band in bands:
            g, c = band_kernel(band, x, cfg.series)
            if cfg.antithetic:
                g2, c2 = band_kernel(band, -x, cfg.series)
                g = 0.5 * (g + g2)
                c = c or c2
            cap = cap or c
            stats.append((float(np.sum(g)), float(np.sum(g * g))))
        return stats, cap

    lanes = _worker_lanes(threads, n_chunks)
    if lanes == 1:
        results = [run_chunk(k) for k in range(n_chunks)]
    else:
        with ThreadPoolExecutor(max_workers=lanes) as pool:
            results = list(pool.map(run_chunk, range(n_chunks)))

    cap_hit = any(cap for _, cap in results)
    totals = []
    for b in range(len(bands)):
        s1 = math.fsum(stats[b][0] for stats, _ in results)
        s2 = math.fsum(stats[b][1] for stats, _ in results)
        totals.append((s1, s2))
    return totals, cap_hit


def _mean_se(s1: float, s2: float, paths: int) -> tuple[float, float]:
    mean = s1 / paths
    if paths > 1:
        var = max(0.0, (s2 - s1 * s1 / paths) / (paths - 1))
        se = math.sqrt(var / paths)
    else:
        se = 0.0
    return mean, se


def _check_start(band: PiecewiseLinearBand) -> None:
    lo = band.lower.right[0]
    hi = band.upper.right[0]
    if not lo < 0 < hi:
        raise StartOutsideBandError(
            f"start point 0 not strictly inside ({lo}, {hi}) at t=0"
        )


def estimate_bcp(
    band: PiecewiseLinearBand, cfg: McConfig, threads: int | None = None
) -> BcpEstimate:
    """Plain Monte Carlo average of the kernel over cfg.paths samples."""
    _check_start(band)
    totals, cap_hit = _evaluate_bands([band], cfg, threads)
    mean, se = _mean_se(*totals[0], cfg.paths)
    return BcpEstimate(mean=mean, std_error=se, paths=cfg.paths, series_cap_hit=cap_hit)


def _envelope_pair(
    gb: GeneralBoundary | None, p: Partition, m: int, side: str
) -> tuple[PiecewiseLinearBoundary, PiecewiseLinearBoundary]:
    if gb is None or not gb.finite:
        b = PiecewiseLinearBoundary.infinite(p, side)
        return b, b
    return envelopes(gb, p, m)


def estimate_bcp_bracketed(
    gb_lower: GeneralBoundary | None,
    gb_upper: GeneralBoundary | None,
    p: Partition,
    m: int,
    cfg: McConfig,
    threads: int | None = None,
) -> BcpEstimate:
    """Bracketed estimate via inner/outer envelopes on shared samples.

    Returns bracket = (mean over the narrowing band, mean over the
    widening band) and the midpoint as the point estimate; the reported
    standard error is that of the outer (widening) band's kernel.
    """
    lo_in, lo_out = _envelope_pair(gb_lower, p, m, "lower")
    hi_in, hi_out = _envelope_pair(gb_upper, p, m, "upper")
    inner = PiecewiseLinearBand(lo_in, hi_in)
    outer = PiecewiseLinearBand(lo_out, hi_out)
    _check_start(inner)
    totals, cap_hit = _evaluate_bands([inner, outer], cfg, threads)
    mean_in, _ = _mean_se(*totals[0], cfg.paths)
    mean_out, se_out = _mean_se(*totals[1], cfg.paths)
    return BcpEstimate(
        mean=0.5 * (mean_in + mean_out),
        std_error=se_out,
        paths=cfg.paths,
        bracket=(mean_in, mean_out),
        series_cap_hit=cap_hit,
    )
