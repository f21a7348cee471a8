"""Gauss-Legendre panel rules and an adaptive doubling driver."""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

NODES_PER_OSCILLATION = 10


class QuadratureError(RuntimeError):
    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


@lru_cache(maxsize=64)
def _leggauss(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_count(lo: float, hi: float, bandwidth: float, order: int) -> int:
    """Panels so that a mode e^{i*bandwidth*s} gets at least 10 nodes per period."""
    periods = abs(bandwidth) * (hi - lo) / (2 * math.pi)
    return max(1, math.ceil(NODES_PER_OSCILLATION * periods / order))


def gauss_legendre(lo: float, hi: float, n_panels: int = 1, order: int = 16):
    """Composite Gauss-Legendre nodes and weights on [lo, hi]."""
    x, w = _leggauss(order)
    edges = np.linspace(lo, hi, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def integrate(f, lo, hi, *, bandwidth=0.0, tol=1e-10, order=16, max_panels=1 << 14):
    """Integrate a vectorized f over [lo, hi], doubling panels until two rules agree to ``tol``."""
    if hi <= lo:
        return 0j
    n = panel_count(lo, hi, bandwidth, order)
    s, w = gauss_legendre(lo, hi, n, order)
    prev = np.sum(w * f(s))
    while True:
        n *= 2
        s, w = gauss_legendre(lo, hi, n, order)
        cur = np.sum(w * f(s))
        err = abs(cur - prev)
        if err <= tol:
            return complex(cur)
        if n >= max_panels:
            raise QuadratureError(
                f"no convergence on [{lo}, {hi}] with {n} panels",
                estimate=complex(cur),
                error=float(err),
            )
        prev = cur
