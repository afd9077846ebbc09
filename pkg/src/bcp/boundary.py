"""Partitions, piecewise-linear boundary bands and bracketing envelopes.

A piecewise-linear boundary is linear on each open subinterval of its
partition and may jump at interior nodes, but only outward: an upper
boundary may jump up, a lower boundary may jump down.  Node values are
therefore kept per side (left limit / right limit).  All types here are
immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .errors import EvaluationError, InvalidBoundariesError

Side = Literal["lower", "upper"]


def _frozen_array(values) -> np.ndarray:
    a = np.asarray(values, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Partition:
    """Strictly increasing time nodes t_0 = 0 < t_1 < ... < t_n = T."""

    nodes: np.ndarray

    def __post_init__(self):
        nodes = _frozen_array(self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if nodes.ndim != 1 or nodes.size < 2:
            raise ValueError("partition needs at least two nodes")
        if nodes[0] != 0.0:
            raise ValueError("partition must start at t=0")
        if not np.all(np.diff(nodes) > 0):
            raise ValueError("partition nodes must be strictly increasing")

    @property
    def n(self) -> int:
        return self.nodes.size - 1

    @property
    def T(self) -> float:
        return float(self.nodes[-1])

    @property
    def dt(self) -> np.ndarray:
        return np.diff(self.nodes)


def uniform_partition(T: float, n: int) -> Partition:
    """Equally spaced partition of [0, T] with n subintervals."""
    if not T > 0:
        raise ValueError(f"horizon must be positive, got {T}")
    if not n >= 1:
        raise ValueError(f"need at least one subinterval, got {n}")
    return Partition(np.linspace(0.0, T, n + 1))


@dataclass(frozen=True)
class PiecewiseLinearBoundary:
    """One boundary side, linear between nodes, with outward jumps only.

    `right[i]` is the value at t_i+ (used by subinterval i+1) and
    `left[i]` the value at t_i-; both arrays have length n+1 with
    `left[0] == right[0]` and `left[n] == right[n]` by convention.
    """

    partition: Partition
    side: Side
    right: np.ndarray
    left: np.ndarray

    def __post_init__(self):
        right = _frozen_array(self.right)
        left = _frozen_array(self.left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "left", left)
        n = self.partition.n
        if right.shape != (n + 1,) or left.shape != (n + 1,):
            raise ValueError("boundary value arrays must have length n+1")
        if left[0] != right[0] or left[n] != right[n]:
            raise ValueError("endpoint nodes cannot carry jumps")
        if self.side not in ("lower", "upper"):
            raise ValueError(f"side must be 'lower' or 'upper', got {self.side!r}")
        inf = -math.inf if self.side == "lower" else math.inf
        infinite = np.isinf(right) | np.isinf(left)
        if infinite.any():
            if not (np.all(right == inf) and np.all(left == inf)):
                raise InvalidBoundariesError(
                    "finite and infinite segments cannot mix in one boundary"
                )
            return
        if np.isnan(right).any() or np.isnan(left).any():
            raise EvaluationError("boundary values contain NaN")
        interior = slice(1, n)
        if self.side == "upper":
            if not np.all(left[interior] <= right[interior]):
                raise InvalidBoundariesError("upper boundary may only jump upward")
        else:
            if not np.all(left[interior] >= right[interior]):
                raise InvalidBoundariesError("lower boundary may only jump downward")

    @classmethod
    def from_values(cls, partition: Partition, side: Side, values) -> "PiecewiseLinearBoundary":
        """Continuous boundary through the given node values."""
        v = np.asarray(values, dtype=np.float64)
        return cls(partition, side, v, v.copy())

    @classmethod
    def infinite(cls, partition: Partition, side: Side) -> "PiecewiseLinearBoundary":
        inf = -math.inf if side == "lower" else math.inf
        v = np.full(partition.n + 1, inf)
        return cls(partition, side, v, v.copy())

    @property
    def is_infinite(self) -> bool:
        return bool(np.isinf(self.right[0]))

    def validate(self) -> None:
        """Re-run construction invariants (no-op if still consistent)."""
        self.__post_init__()

    def __call__(self, t) -> np.ndarray:
        """Evaluate on the closed intervals, using right limits at nodes."""
        t = np.asarray(t, dtype=np.float64)
        nodes = self.partition.nodes
        if self.is_infinite:
            return np.full(t.shape, self.right[0])
        idx = np.clip(np.searchsorted(nodes, t, side="right"), 1, self.partition.n)
        t0 = nodes[idx - 1]
        t1 = nodes[idx]
        w = (t - t0) / (t1 - t0)
        vals = (1 - w) * self.right[idx - 1] + w * self.left[idx]
        at_node = t == t0
        vals = np.where(at_node, self.right[idx - 1], vals)
        return vals


@dataclass(frozen=True)
class PiecewiseLinearBand:
    """Lower/upper boundary pair over a shared partition."""

    lower: PiecewiseLinearBoundary
    upper: PiecewiseLinearBoundary

    def __post_init__(self):
        if self.lower.side != "lower" or self.upper.side != "upper":
            raise ValueError("band needs a lower and an upper boundary, in that order")
        if not np.array_equal(self.lower.partition.nodes, self.upper.partition.nodes):
            raise ValueError("both boundaries must share one partition")
        if self.lower.is_infinite or self.upper.is_infinite:
            return
        ok = np.all(self.lower.right[1:] < self.upper.right[1:]) and np.all(
            self.lower.left[1:] < self.upper.left[1:]
        )
        if not ok or not self.lower.right[0] < self.upper.right[0]:
            raise InvalidBoundariesError("lower boundary must stay strictly below upper")

    @property
    def partition(self) -> Partition:
        return self.lower.partition


def band_values(band: PiecewiseLinearBand, i: int, side: Literal["left", "right"]):
    """Return (alpha, beta, delta) at node i on the requested side."""
    n = band.partition.n
    if not 0 <= i <= n:
        raise ValueError(f"node index {i} out of range 0..{n}")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    lo = band.lower.left[i] if side == "left" else band.lower.right[i]
    hi = band.upper.left[i] if side == "left" else band.upper.right[i]
    return float(lo), float(hi), float(hi - lo)


@dataclass(frozen=True)
class GeneralBoundary:
    """Arbitrary boundary function with side tag and finiteness metadata."""

    evaluator: Callable[[float], float]
    side: Side
    horizon: float
    finite: bool = True

    def __call__(self, t) -> float:
        return float(self.evaluator(t))

    @classmethod
    def constant(cls, value: float, side: Side, horizon: float) -> "GeneralBoundary":
        return cls(lambda t: value, side, horizon, finite=math.isfinite(value))

    @classmethod
    def infinite(cls, side: Side, horizon: float) -> "GeneralBoundary":
        value = -math.inf if side == "lower" else math.inf
        return cls(lambda t: value, side, horizon, finite=False)


def _node_values(gb: GeneralBoundary, p: Partition) -> np.ndarray:
    vals = np.empty(p.n + 1)
    for k, t in enumerate(p.nodes):
        v = gb(float(t))
        if math.isnan(v):
            raise EvaluationError(f"boundary evaluated to NaN at t={t}", t=float(t))
        vals[k] = v
    return vals


def chord_boundary(gb: GeneralBoundary, p: Partition) -> PiecewiseLinearBoundary:
    """Continuous piecewise-linear interpolant through gb at the nodes."""
    if abs(p.T - gb.horizon) > 1e-12 * max(1.0, gb.horizon):
        raise ValueError("partition horizon does not match boundary horizon")
    return PiecewiseLinearBoundary.from_values(p, gb.side, _node_values(gb, p))


def envelopes(
    gb: GeneralBoundary, p: Partition, m: int = 50
) -> tuple[PiecewiseLinearBoundary, PiecewiseLinearBoundary]:
    """Bracket gb between two continuous piecewise-linear boundaries.

    For an upper boundary the result satisfies inner <= gb <= outer at
    all sampled times; for a lower boundary inner >= gb >= outer (inner
    is always the band-narrowing side).  Per subinterval the chord is
    shifted by the largest sampled chord-vs-boundary excess; node values
    take the larger of the two adjacent shifts so no jumps appear.
    """
    if m < 2:
        raise ValueError(f"need at least 2 samples per interval, got {m}")
    if not gb.finite:
        raise InvalidBoundariesError("cannot build envelopes for an infinite boundary")
    sign = 1.0 if gb.side == "upper" else -1.0
    nodes = p.nodes
    node_vals = _node_values(gb, p)
    u_nodes = sign * node_vals

    n = p.n
    shift_in = np.zeros(n)  # chord sits above the boundary by this much
    shift_out = np.zeros(n)  # boundary sits above the chord by this much
    for i in range(n):
        ts = np.linspace(nodes[i], nodes[i + 1], m)
        w = (ts - nodes[i]) / (nodes[i + 1] - nodes[i])
        chord = (1 - w) * u_nodes[i] + w * u_nodes[i + 1]
        us = np.empty(m)
        for k, t in enumerate(ts):
            v = gb(float(t))
            if math.isnan(v):
                raise EvaluationError(f"boundary evaluated to NaN at t={t}", t=float(t))
            us[k] = sign * v
        # The sampled max can miss the true extremum by ~|gap''| d^2 / 8
        # (d = sample spacing); pad both shifts by that second-difference
        # estimate so the envelopes stay on the correct side between samples.
        pad = float(np.max(np.abs(np.diff(us, n=2)))) / 8.0 if m > 2 else 0.0
        shift_in[i] = max(0.0, float(np.max(chord - us))) + pad
        shift_out[i] = max(0.0, float(np.max(us - chord))) + pad

    # Node k borders intervals k-1 and k; use the more conservative shift.
    down = np.maximum(np.concatenate([[shift_in[0]], shift_in]),
                      np.concatenate([shift_in, [shift_in[-1]]]))
    up = np.maximum(np.concatenate([[shift_out[0]], shift_out]),
                    np.concatenate([shift_out, [shift_out[-1]]]))
    inner = PiecewiseLinearBoundary.from_values(p, gb.side, sign * (u_nodes - down))
    outer = PiecewiseLinearBoundary.from_values(p, gb.side, sign * (u_nodes + up))
    return inner, outer
