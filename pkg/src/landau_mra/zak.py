"""Zak (kq) transform on the cell D = [0, a) x [0, 2*pi/a).

Convention: k is the position-like coordinate in [0, a), q the quasi-momentum
in [0, 2*pi/a), and

    (Z h)(k, q) = sqrt(a / 2pi) * sum_n exp(-i q n a) h(k - n a),

which is unitary from L2(R) onto L2(D).  Under Z the translation h(s - a)
becomes multiplication by exp(i q a) and exp(2*pi*i*s/a) h(s) becomes
multiplication by exp(2*pi*i*k/a), so the orthonormality condition turns
into the pointwise flatness of J_d.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .filters import FilterBank
from .generator import GeneratorFunction
from .lattice import LatticeSpec


class ZakConvergenceError(RuntimeError):
    def __init__(self, message, partial_sum=None):
        super().__init__(message)
        self.partial_sum = partial_sum


@dataclass(frozen=True)
class ZakFunction:
    func: Callable[[np.ndarray, np.ndarray], np.ndarray]
    a: float
    n_terms: int | None = None

    def __call__(self, k, q):
        k, q = np.broadcast_arrays(np.asarray(k, float), np.asarray(q, float))
        return np.asarray(self.func(k, q), dtype=complex)

    @property
    def k_period(self) -> float:
        return self.a

    @property
    def q_period(self) -> float:
        return 2 * math.pi / self.a


def _term_range(h, a, k, n_max):
    if isinstance(h, GeneratorFunction) and h.support is not None:
        lo, hi = h.support
        kmin, kmax = float(np.min(k)), float(np.max(k))
        # h(k - n a) != 0 needs lo <= k - n a < hi
        return range(math.floor((kmin - hi) / a), math.ceil((kmax - lo) / a) + 1), False
    return range(-n_max, n_max + 1), True


def zak_transform(h, a: float, k, q, *, n_max: int = 64, tail_tol: float = 1e-12):
    """Evaluate (Z h)(k, q); exact finite sum for compactly supported generators."""
    k, q = np.broadcast_arrays(np.asarray(k, float), np.asarray(q, float))
    terms, check_tail = _term_range(h, a, k, n_max)
    total = np.zeros(k.shape, dtype=complex)
    edge = 0.0
    for n in terms:
        term = np.exp(-1j * q * n * a) * np.asarray(h(k - n * a), dtype=complex)
        total += term
        if check_tail and abs(n) == n_max:
            edge = max(edge, float(np.max(np.abs(term), initial=0.0)))
    total *= math.sqrt(a / (2 * math.pi))
    if check_tail and edge > tail_tol:
        raise ZakConvergenceError(
            f"Zak series tail term {edge:.2e} exceeds {tail_tol:.1e} at |n| = {n_max}", partial_sum=total
        )
    return total


def zak_of(h, a: float, n_max: int = 64) -> ZakFunction:
    return ZakFunction(lambda k, q: zak_transform(h, a, k, q, n_max=n_max), a, n_max)


def inverse_zak(z: ZakFunction, s, n_nodes: int = 64):
    """h(s) from its Zak transform.

    With s = k + j a, k in [0, a):  h(s) = sqrt(a/2pi) int_0^{2pi/a} dq exp(-i q j a) z(k, q).
    The q-integrand is periodic, so the equispaced rule is spectrally accurate
    (exact for trigonometric polynomials of degree < n_nodes - |j|).
    """
    s = np.asarray(s, dtype=float)
    a = z.a
    j = np.floor(s / a)
    k = s - j * a
    n_nodes = max(n_nodes, 2 * int(np.max(np.abs(j), initial=0)) + 8)
    qs = np.arange(n_nodes) * (2 * math.pi / a) / n_nodes
    vals = z(k[..., None], np.broadcast_to(qs, k.shape + qs.shape))
    phase = np.exp(-1j * qs * (j[..., None] * a))
    integral = np.sum(phase * vals, axis=-1) * (2 * math.pi / a) / n_nodes
    return math.sqrt(a / (2 * math.pi)) * integral


def t_d_zak(f: FilterBank, lat: LatticeSpec, k, q=0.0):
    """(1/sqrt(2pi)) sum_n h_n exp(2*pi*i*k*n/a); independent of q."""
    k, q = np.broadcast_arrays(np.asarray(k, float), np.asarray(q, float))
    total = np.zeros(k.shape, dtype=complex)
    for n, c in f.coeffs.items():
        total += c * np.exp(2j * math.pi * k * n / lat.a)
    return total / math.sqrt(2 * math.pi)


def t_d_zak_function(f: FilterBank, lat: LatticeSpec) -> ZakFunction:
    return ZakFunction(lambda k, q: t_d_zak(f, lat, k, q), lat.a)


def j_d(z: ZakFunction, d: int, k, q):
    """J_d(k, q) = sum_{l<d} |z((k + l a)/d, q)|^2."""
    k, q = np.broadcast_arrays(np.asarray(k, float), np.asarray(q, float))
    total = np.zeros(k.shape)
    for l in range(d):
        total += np.abs(z((k + l * z.a) / d, q)) ** 2
    return total


@dataclass(frozen=True)
class FlatnessReport:
    d: int
    target: float
    k: np.ndarray
    q: np.ndarray
    values: np.ndarray
    max_deviation: float

    def passed(self, tol: float = 1e-10) -> bool:
        return self.max_deviation < tol


def j_d_flatness(z: ZakFunction, d: int, grid_n: int = 64) -> FlatnessReport:
    """Max |J_d - d/2pi| over a grid_n x grid_n grid on D."""
    k = np.arange(grid_n) * z.a / grid_n
    q = np.arange(grid_n) * (2 * math.pi / z.a) / grid_n
    K, Q = np.meshgrid(k, q, indexing="ij")
    vals = j_d(z, d, K, Q)
    target = d / (2 * math.pi)
    return FlatnessReport(d, target, k, q, vals, float(np.max(np.abs(vals - target))))
