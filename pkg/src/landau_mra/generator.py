"""Generator functions on the line and the orthonormality condition in s-space.

A generator h(s) is mapped to an LLL wavefunction by the kernel integral in
:mod:`landau_mra.landau`.  Magnetic translations act on it as

    T_1: h(s) -> h(s - a),        T_2: h(s) -> exp(2*pi*i*s/a) h(s),

so <psi, T_1^n T_2^m psi> reduces to a one-dimensional integral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .filters import FilterBank, lag_residuals
from .lattice import LatticeSpec
from .quadrature import integrate


@dataclass(frozen=True)
class GeneratorFunction:
    """A square-integrable function of one real variable.

    ``support`` is a half-open interval outside of which the function is zero.
    Functions without compact support need a truncation ``window`` for any
    integral taken over them.
    """

    func: Callable[[np.ndarray], np.ndarray]
    a: float
    support: tuple[float, float] | None = None
    window: tuple[float, float] | None = None
    bandwidth: float = 0.0
    filter: FilterBank | None = field(default=None, compare=False)
    label: str = "external"

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        v = np.asarray(self.func(s), dtype=complex)
        if self.support is not None:
            lo, hi = self.support
            v = np.where((s >= lo) & (s < hi), v, 0j)
        return v

    @property
    def domain(self) -> tuple[float, float]:
        if self.support is not None:
            return self.support
        if self.window is not None:
            return self.window
        raise ValueError(f"generator {self.label!r} has no compact support and no truncation window")

    def norm2(self) -> float:
        if self.filter is not None:
            return self.filter.norm2()
        lo, hi = self.domain
        return integrate(lambda s: np.abs(self(s)) ** 2, lo, hi, bandwidth=2 * self.bandwidth).real

    def scaled(self, alpha: complex) -> "GeneratorFunction":
        return GeneratorFunction(
            lambda s: alpha * self.func(s), self.a, self.support, self.window, self.bandwidth, None,
            f"{alpha}*{self.label}",
        )


def t_d_eval(f: FilterBank, lat: LatticeSpec, s):
    """(1/sqrt(a)) sum_l h_l exp(2*pi*i*l*s/a) on [0, a), zero elsewhere."""
    s = np.asarray(s, dtype=float)
    k = 2 * math.pi / lat.a
    total = np.zeros(s.shape, dtype=complex)
    for l, c in f.coeffs.items():
        total += c * np.exp(1j * l * k * s)
    inside = (s >= 0) & (s < lat.a)
    return np.where(inside, total / math.sqrt(lat.a), 0j)


def from_filter(f: FilterBank, lat: LatticeSpec) -> GeneratorFunction:
    top = max(abs(n) for n in f.coeffs)
    return GeneratorFunction(
        lambda s: t_d_eval(f, lat, s),
        lat.a,
        support=(0.0, lat.a),
        bandwidth=top * 2 * math.pi / lat.a,
        filter=f,
        label=f"T_{f.d}[{f.name or 'filter'}]",
    )


def overlap_s(h: GeneratorFunction, lat: LatticeSpec, n: int, m: int, tol: float = 1e-10) -> complex:
    """int ds exp(2*pi*i*m*s/a) conj(h(s)) h(s - n a): the overlap <psi, T_1^n T_2^m psi>."""
    lo, hi = h.domain
    shift = n * lat.a
    lo_o, hi_o = max(lo, lo + shift), min(hi, hi + shift)
    if hi_o <= lo_o:
        # disjoint supports: exactly zero, no integration
        return 0j
    k = m * 2 * math.pi / lat.a

    def integrand(s):
        return np.exp(1j * k * s) * np.conj(h(s)) * h(s - shift)

    return integrate(integrand, lo_o, hi_o, bandwidth=2 * h.bandwidth + abs(k), tol=tol)


def onc_entry(h: GeneratorFunction, lat: LatticeSpec, n: int, m: int, d: int | None = None) -> complex:
    """S between psi and its (n, m)-th sublattice translate; (n, d*m) for the default pattern."""
    if d is not None and d != lat.d:
        lat = LatticeSpec(lat.shape, lat.a, lat.a1, lat.a2, d, lat.pattern)
    nn, mm = lat.sublattice_step(n, m)
    return overlap_s(h, lat, nn, mm)


def onc_matrix(h: GeneratorFunction, lat: LatticeSpec, n_max: int, m_max: int) -> np.ndarray:
    """Matrix S[n + n_max, m + m_max] for |n| <= n_max, |m| <= m_max."""
    out = np.empty((2 * n_max + 1, 2 * m_max + 1), dtype=complex)
    for i, n in enumerate(range(-n_max, n_max + 1)):
        for j, m in enumerate(range(-m_max, m_max + 1)):
            out[i, j] = onc_entry(h, lat, n, m)
    return out


def max_identity_deviation(mat: np.ndarray) -> float:
    ident = np.zeros_like(mat)
    ident[mat.shape[0] // 2, mat.shape[1] // 2] = 1.0
    return float(np.max(np.abs(mat - ident)))


@dataclass(frozen=True)
class RecoveredCoefficients:
    coeffs: dict[int, complex]
    window: tuple[float, float]
    truncated: bool

    def residuals(self, d: int) -> dict[int, complex]:
        return lag_residuals(self.coeffs, d)

    def to_filter(self, d: int, cutoff: float = 1e-13) -> FilterBank:
        kept = {n: c for n, c in self.coeffs.items() if abs(c) > cutoff}
        return FilterBank(d, kept, name="recovered")


def coefficients_from_function(
    K: GeneratorFunction, lat: LatticeSpec, n_range: Iterable[int], tol: float = 1e-12
) -> RecoveredCoefficients:
    """H_n = (1/sqrt(a)) int K(s) exp(-2*pi*i*n*s/a) ds over K's support or truncation window."""
    lo, hi = K.domain
    k = 2 * math.pi / lat.a
    out = {}
    for n in n_range:
        val = integrate(
            lambda s: K(s) * np.exp(-1j * n * k * s), lo, hi, bandwidth=K.bandwidth + abs(n) * k, tol=tol
        )
        out[int(n)] = val / math.sqrt(lat.a)
    return RecoveredCoefficients(out, (lo, hi), K.support is None)
