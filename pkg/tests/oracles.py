"""Independent oracles used to freeze expected values.

Everything here is deliberately written without touching the library's
production code paths: composite Simpson instead of adaptive quadrature,
the method-of-images barrier series, and a plain Euler-Maruyama
simulator for the original (untransformed) diffusions.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad
from scipy.stats import norm


def simpson_fixed(f, a: float, b: float, n: int = 2048) -> float:
    """Composite Simpson rule with n (even) panels."""
    if n % 2:
        n += 1
    xs = np.linspace(a, b, n + 1)
    ys = np.array([f(x) for x in xs])
    h = (b - a) / n
    return float(h / 3.0 * (ys[0] + ys[-1] + 4 * ys[1:-1:2].sum() + 2 * ys[2:-1:2].sum()))


def reflection_one_sided(c: float, T: float) -> float:
    """P(W_t < c for all t <= T) for a constant boundary, c > 0."""
    return float(2.0 * norm.cdf(c / math.sqrt(T)) - 1.0)


def two_barrier_survival(a: float, b: float, T: float, kmax: int = 50) -> float:
    """Method-of-images series for BM started at 0 inside (a, b)."""
    assert a < 0 < b
    delta = b - a
    x = -a  # distance from the lower barrier
    rt = math.sqrt(T)
    total = 0.0
    for k in range(-kmax, kmax + 1):
        shift = 2.0 * k * delta
        total += (
            norm.cdf((delta - x - shift) / rt)
            - norm.cdf((-x - shift) / rt)
            - norm.cdf((delta + x - shift) / rt)
            + norm.cdf((x - shift) / rt)
        )
    return float(total)


def bridge_abs_max_survival(half_width: float, dt: float, kmax: int = 50) -> float:
    """P(max |bridge| < half_width) for a 0->0 Brownian bridge over dt."""
    total = 0.0
    for k in range(1, kmax + 1):
        total += (-1) ** (k + 1) * math.exp(-2.0 * k * k * half_width**2 / dt)
    return 1.0 - 2.0 * total


def quad_one_sided_n1(beta0: float, beta1: float, t1: float) -> float:
    """Gaussian quadrature of the one-sided kernel at a single node."""

    def integrand(x):
        return norm.pdf(x, scale=math.sqrt(t1)) * (
            1.0 - math.exp(-2.0 * beta0 * (beta1 - x) / t1)
        )

    val, _ = quad(integrand, -np.inf, beta1, epsabs=1e-12, epsrel=1e-12, limit=400)
    return float(val)


def quad_of_kernel_n1(kernel, alpha: float, beta: float, t1: float) -> float:
    """Gaussian quadrature of a single-node kernel x -> g([x])."""

    def integrand(x):
        return norm.pdf(x, scale=math.sqrt(t1)) * kernel(x)

    val, _ = quad(integrand, alpha, beta, epsabs=1e-12, epsrel=1e-12, limit=400)
    return float(val)


def euler_maruyama_survival(
    drift,
    diffusion,
    x0: float,
    lower,
    upper,
    T: float,
    steps: int,
    paths: int,
    seed: int,
    chunk: int = 50_000,
):
    """Crossing-free probability of the original SDE on a fine grid.

    `drift` and `diffusion` take (t, X) with X a numpy array; `lower`
    and `upper` map t to a boundary value (None means unbounded).
    Returns (estimate, standard_error).
    """
    dt = T / steps
    sq = math.sqrt(dt)
    rng = np.random.Generator(np.random.Philox(key=[seed, 0]))
    lo_vals = np.array([lower(k * dt) if lower else -np.inf for k in range(1, steps + 1)])
    up_vals = np.array([upper(k * dt) if upper else np.inf for k in range(1, steps + 1)])
    survived = 0
    done = 0
    while done < paths:
        count = min(chunk, paths - done)
        x = np.full(count, float(x0))
        alive = np.ones(count, dtype=bool)
        for k in range(steps):
            t = k * dt
            z = rng.standard_normal(count)
            x += drift(t, x) * dt + diffusion(t, x) * (sq * z)
            alive &= (x > lo_vals[k]) & (x < up_vals[k])
        survived += int(alive.sum())
        done += count
    p = survived / paths
    se = math.sqrt(max(p * (1 - p), 1e-12) / paths)
    return p, se
