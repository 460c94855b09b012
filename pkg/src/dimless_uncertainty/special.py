"""Small special-function helpers computed in log-Gamma space."""

from __future__ import annotations

import math

import numpy as np


def log_beta(p: float, q: float) -> float:
    return math.lgamma(p) + math.lgamma(q) - math.lgamma(p + q)


def beta(p: float, q: float) -> float:
    return math.exp(log_beta(p, q))


def beta_ratio(p1: float, q1: float, p2: float, q2: float) -> float:
    """B(p1, q1) / B(p2, q2) without forming either Beta value."""
    return math.exp(log_beta(p1, q1) - log_beta(p2, q2))


def central_binomial_ratio(n: int) -> float:
    """(2n)! / (2**(2n) (n!)**2), stable for large n."""
    return math.exp(math.lgamma(2 * n + 1) - 2 * math.lgamma(n + 1) - 2 * n * math.log(2.0))


def hermite(n: int, x):
    """Physicists' Hermite polynomial H_n(x) by the three-term recurrence."""
    if n < 0:
        raise ValueError("order must be non-negative")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for m in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * m * h_prev
    return h if h.ndim else float(h)


def hermite_coefficients(n: int) -> list[int]:
    """Exact integer power-basis coefficients of H_n, lowest degree first."""
    prev, cur = [1], [0, 2]
    if n == 0:
        return prev
    for m in range(1, n):
        nxt = [0] * (m + 2)
        for i, c in enumerate(cur):
            nxt[i + 1] += 2 * c
        for i, c in enumerate(prev):
            nxt[i] -= 2 * m * c
        prev, cur = cur, nxt
    return cur
