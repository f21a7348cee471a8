"""Landau-level wavefunctions built from generator functions.

Coordinates: for the triangular lattice the kernel localizes in
u = x - y/sqrt(3); for the square lattice u = x.  Every kernel factorizes as

    K_l(r, s) = exp(i y u / 2) exp(i y s) F_l(u + s) / (2 pi),
    F_l(w)    = int dP f_l(P) exp(i P w - i c P^2),

with f_l the l-th Hermite function and c = 1/(2 sqrt(3)) (triangular) or 0
(square).  Level 0 has the closed form used by :func:`kernel_eval`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .filters import FilterBank
from .generator import GeneratorFunction, from_filter
from .lattice import SQUARE, TRIANGULAR, LatticeSpec, SiteIndex, make_lattice, site_position
from .quadrature import QuadratureError, gauss_legendre, panel_count
from .special import erf_window

SQRT3 = math.sqrt(3.0)
BETA_TRIANGULAR = 3.0 / 8.0 * (1 - 1j / SQRT3)
MAX_LEVEL = 10


@dataclass(frozen=True)
class KernelSpec:
    shape: str = TRIANGULAR
    level: int = 0

    def __post_init__(self):
        if self.shape not in (TRIANGULAR, SQUARE):
            raise ValueError(f"unsupported lattice shape {self.shape!r}")
        if not 0 <= self.level <= MAX_LEVEL:
            raise ValueError(f"Landau level must be in [0, {MAX_LEVEL}], got {self.level}")

    @property
    def shear(self) -> float:
        return 1.0 / SQRT3 if self.shape == TRIANGULAR else 0.0

    @property
    def chirp(self) -> float:
        return 1.0 / (2 * SQRT3) if self.shape == TRIANGULAR else 0.0

    @property
    def beta(self) -> complex:
        return BETA_TRIANGULAR if self.shape == TRIANGULAR else 0.5 + 0j

    @property
    def prefactor(self) -> complex:
        if self.shape == TRIANGULAR:
            return 1.0 / (math.pi ** 0.75 * np.sqrt(2 * (1 + 1j / SQRT3)))
        return 1.0 / (math.sqrt(2) * math.pi ** 0.75) + 0j

    def u(self, x, y):
        return np.asarray(x, float) - self.shear * np.asarray(y, float)


# ---------------------------------------------------------------- kernels

def kernel_eval(ks: KernelSpec, x, y, s):
    """K(r, s); closed form at level 0, Gauss-Hermite quadrature above."""
    if ks.level > 0:
        return kernel_level(ks.level, x, y, s, ks.shape)
    x, y, s = np.broadcast_arrays(*(np.asarray(v, float) for v in (x, y, s)))
    u = ks.u(x, y)
    return ks.prefactor * np.exp(0.5j * y * u + 1j * y * s - ks.beta * (u + s) ** 2)


def hermite_function(l: int, p):
    """Normalized oscillator eigenstate f_l(p) by the stable three-term recurrence."""
    p = np.asarray(p, dtype=float)
    return _hermite_poly(l, p) * np.exp(-0.5 * p * p)


def _hermite_poly(l, p):
    # f_l(p) * exp(p^2/2)
    prev = np.zeros_like(p)
    cur = np.full_like(p, math.pi ** -0.25)
    for n in range(l):
        prev, cur = cur, math.sqrt(2.0 / (n + 1)) * p * cur - math.sqrt(n / (n + 1)) * prev
    return cur


# beyond this |w| every F_l is below 1e-70 for l <= MAX_LEVEL
PROFILE_CUTOFF = 22.0


def hermite_nodes(level: int, reach: float) -> int:
    """Gauss-Hermite order resolving exp(i P w) for |w| <= reach at the given level."""
    return int(min(480, max(60, math.ceil(40 + 0.75 * reach * reach + 4 * level))))


@lru_cache(maxsize=32)
def _profile_rule(level: int, chirp: float, order: int):
    t, wt = np.polynomial.hermite.hermgauss(order)
    p = math.sqrt(2.0) * t
    # weight exp(-t^2) is exactly the Gaussian of f_l(p) with p = sqrt(2) t
    c = math.sqrt(2.0) * wt * _hermite_poly(level, p) * np.exp(-1j * chirp * p * p)
    return p, c


def kernel_profile(level: int, w, shape: str = TRIANGULAR, order: int | None = None):
    """F_l(w) = int dP f_l(P) exp(i P w - i c P^2) by Gauss-Hermite quadrature."""
    ks = KernelSpec(shape, level)
    w = np.asarray(w, dtype=float)
    live = np.abs(w) <= PROFILE_CUTOFF
    reach = float(np.max(np.abs(w[live]), initial=0.0))
    p, c = _profile_rule(level, ks.chirp, order or hermite_nodes(level, reach))
    out = np.zeros(w.shape, dtype=complex)
    if np.any(live):
        out[live] = np.exp(1j * w[live][..., None] * p) @ c
    return out


def kernel_level(l: int, x, y, s, shape: str = TRIANGULAR):
    """K_l(r, s): the level-0 construction with f_0 replaced by f_l, P' integral by quadrature."""
    ks = KernelSpec(shape, l)
    x, y, s = np.broadcast_arrays(*(np.asarray(v, float) for v in (x, y, s)))
    u = ks.u(x, y)
    return np.exp(0.5j * y * u + 1j * y * s) * kernel_profile(l, u + s, shape) / (2 * math.pi)


# ---------------------------------------------------------------- synthesis

def generator_transform(h: GeneratorFunction, omega):
    """H(omega) = int h(s) exp(i omega s) ds; analytic for filter generators."""
    omega = np.asarray(omega, dtype=float)
    if h.filter is not None:
        a = h.a
        total = np.zeros(omega.shape, dtype=complex)
        for l, c in h.filter.coeffs.items():
            om = omega + 2 * math.pi * l / a
            total += c * a * np.exp(0.5j * om * a) * np.sinc(om * a / (2 * math.pi))
        return total / math.sqrt(a)
    lo, hi = h.domain
    top = float(np.max(np.abs(omega), initial=0.0)) + h.bandwidth
    s, w = gauss_legendre(lo, hi, panel_count(lo, hi, top, 24) + 1, 24)
    hs = w * h(s)
    flat = omega.ravel()
    out = np.empty(flat.shape, dtype=complex)
    for i in range(0, flat.size, 512):
        out[i:i + 512] = np.exp(1j * flat[i:i + 512, None] * s) @ hs
    return out.reshape(omega.shape)


def synthesize(ks: KernelSpec, h: GeneratorFunction, x, y, tol: float = 1e-9, order: int = 24):
    """psi(r) = int K(r, s) h(s) ds over the support (or window) of h.

    Level 0 integrates the closed-form kernel with Gauss-Legendre panels,
    doubling until the pointwise change is below ``tol``.  Higher levels swap
    the s and P' integrals and use Gauss-Hermite in P'.
    """
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    if ks.level > 0:
        return _synthesize_swapped(ks, h, x, y)
    lo, hi = h.domain
    flat_x, flat_y = x.ravel(), y.ravel()
    top = float(np.max(np.abs(flat_y), initial=0.0)) + h.bandwidth + 2.0
    n = panel_count(lo, hi, top, order) + 1

    def rule(n_panels):
        s, w = gauss_legendre(lo, hi, n_panels, order)
        hw = w * h(s)
        out = np.empty(flat_x.shape, dtype=complex)
        for i in range(0, flat_x.size, 2048):
            xs, ys = flat_x[i:i + 2048, None], flat_y[i:i + 2048, None]
            out[i:i + 2048] = kernel_eval(ks, xs, ys, s[None, :]) @ hw
        return out

    prev = rule(n)
    for _ in range(12):
        n *= 2
        cur = rule(n)
        err = float(np.max(np.abs(cur - prev), initial=0.0))
        if err <= tol:
            return cur.reshape(x.shape)
        prev = cur
    raise QuadratureError(f"synthesis did not reach {tol:.1e}", estimate=cur.reshape(x.shape), error=err)


def _swapped_rule(ks: KernelSpec, h: GeneratorFunction, u_reach: float):
    lo, hi = h.domain
    reach = u_reach + max(abs(lo), abs(hi))
    return _profile_rule(ks.level, ks.chirp, hermite_nodes(ks.level, reach))


def _synthesize_swapped(ks, h, x, y):
    u = ks.u(x, y)
    p, c = _swapped_rule(ks, h, float(np.max(np.abs(u), initial=0.0)))
    out = np.empty(u.size, dtype=complex)
    fu, fy = u.ravel(), y.ravel()
    for i in range(0, fu.size, 1024):
        uu, yy = fu[i:i + 1024, None], fy[i:i + 1024, None]
        terms = c * np.exp(1j * p * uu) * generator_transform(h, yy + p)
        out[i:i + 1024] = np.exp(0.5j * fy[i:i + 1024] * fu[i:i + 1024]) * terms.sum(axis=1) / (2 * math.pi)
    return out.reshape(u.shape)


def synthesize_sheared_grid(ks: KernelSpec, h: GeneratorFunction, u, y, chunk: int = 4096):
    """psi on the tensor grid (u_i, y_j), returned with shape (len(u), len(y)).

    Uses psi(u, y) = exp(iyu/2)/(2pi) int dP f_l(P) exp(iPu - icP^2) H(y + P),
    which separates into one matrix product per chunk of y.
    """
    u = np.asarray(u, dtype=float)
    y = np.asarray(y, dtype=float)
    p, c = _swapped_rule(ks, h, float(np.max(np.abs(u), initial=0.0)))
    left = np.exp(1j * u[:, None] * p[None, :]) * c[None, :]
    out = np.empty((u.size, y.size), dtype=complex)
    for j in range(0, y.size, chunk):
        yy = y[j:j + chunk]
        right = generator_transform(h, p[:, None] + yy[None, :])
        out[:, j:j + chunk] = left @ right
    out *= np.exp(0.5j * u[:, None] * y[None, :]) / (2 * math.pi)
    return out


# ---------------------------------------------------------------- closed forms

def filter_closed_form(f: FilterBank, lat: LatticeSpec, x, y):
    """Level-0 wavefunction of the filter generator T_d in terms of erf, any finite filter."""
    ks = KernelSpec(lat.shape, 0)
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    u = ks.u(x, y)
    beta = ks.beta
    scale = math.sqrt(math.pi) / (2 * np.sqrt(beta) * math.sqrt(lat.a))
    total = np.zeros(u.shape, dtype=complex)
    for l, c in f.coeffs.items():
        alpha = y + 2 * math.pi * l / lat.a
        total += c * np.exp(-1j * alpha * u) * erf_window(alpha, beta, u, u + lat.a)
    return ks.prefactor * scale * np.exp(0.5j * y * u) * total


def _g_haar3(x, y, alpha, a):
    u = x - y / SQRT3
    return np.exp(-1j * alpha * u) * erf_window(alpha, BETA_TRIANGULAR, u, u + a)


def haar3_closed_form(x, y):
    """psi_3 for the Haar 3-MRA on the triangular lattice, as a sum of three erf windows."""
    a = make_lattice(TRIANGULAR).a
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    beta = BETA_TRIANGULAR
    # sqrt(beta (1 + i/sqrt3)) = 1/sqrt2 exactly
    norm = np.sqrt(6 * a * beta * (1 + 1j / SQRT3)) * 2 * math.pi ** 0.25
    phase = np.exp(0.5j * (x * y - y * y / SQRT3))
    g = sum(_g_haar3(x, y, y + 2 * math.pi * j / a, a) for j in range(3))
    return phase * g / norm


def haar3_asymptotic(x, y):
    """Large-|r| form of psi_3 from the erf asymptotics.

    Valid where every erf argument is large.  Measured relative error: below
    0.3% for |y| >= 10a at any u; below 2% for |y| >= 5a with |u| >= 2; up to
    ~20% for |y| ~ 5a, |u| ~ 1.  Finite on x = y/sqrt3 only for y != 0.
    """
    a = make_lattice(TRIANGULAR).a
    beta = BETA_TRIANGULAR
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    u = x - y / SQRT3
    pre = np.sqrt(beta) * np.exp(0.5j * y * u) / (math.sqrt(3 * a) * math.pi ** 0.75) * np.exp(-beta * u * u)
    shifts = [2 * math.pi * j / a for j in range(3)]
    near = sum(1 / (2 * beta * u - 1j * (y + t)) for t in shifts)
    far = sum(1 / (2 * beta * u - 1j * (y + t) + 2 * a * beta) for t in shifts)
    return pre * (near - np.exp(-beta * a * a - a * (2 * beta * u - 1j * y)) * far)


def _haar2_shift(mirrored: bool) -> int:
    return -1 if mirrored else 1


def haar2_square_closed_form(x, y, mirrored: bool = False):
    """Haar 2-MRA wavefunction on the square lattice (a^2 = 2 pi).

    ``mirrored=False`` uses h_0 = h_1 = 1/sqrt2 (the builtin haar2).  The
    mirrored filter h_0 = h_{-1} = 1/sqrt2 gives the companion written as
    sqrt(a) e^{-ixy/2 - y^2/2}/(4 pi^{3/4}) [erf((x+a-iy)/sqrt2) - erf((x-iy)/sqrt2)
    + e^{-a^2/2 + ay + ixa} (erf((x+a-i(y-a))/sqrt2) - erf((x-i(y-a))/sqrt2))].
    """
    a = make_lattice(SQUARE).a
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    pre = math.sqrt(a) / (4 * math.pi ** 0.75)
    total = np.zeros(x.shape, dtype=complex)
    for alpha in (y, y + _haar2_shift(mirrored) * a):
        total += np.exp(-1j * alpha * x) * erf_window(alpha, 0.5, x, x + a)
    return pre * np.exp(0.5j * x * y) * total


def haar2_square_asymptotic(x, y, mirrored: bool = False):
    """Large-|r| companion of :func:`haar2_square_closed_form`.

    Gaussian decay in x, 1/|y| decay along the line x = 0.
    """
    a = make_lattice(SQUARE).a
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    pre = math.sqrt(2 * a) / (4 * math.pi ** 1.25) * np.exp(0.5j * x * y - 0.5 * x * x)
    b = y + _haar2_shift(mirrored) * a
    near = 1 / (x - 1j * y) + 1 / (x - 1j * b)
    far = 1 / (x + a - 1j * y) + 1 / (x + a - 1j * b)
    return pre * (near - np.exp(-math.pi - a * (x - 1j * y)) * far)


# ---------------------------------------------------------------- translations

def magnetic_translate(psi, lat: LatticeSpec, n: int = 0, m: int = 0):
    """T_1^n T_2^m psi, localized around site_position(n, m) when psi is around the origin.

    (T_1^n T_2^m f)(x, y) = (-1)^{nm} exp(i (Y x - X y)/2) f(x - X, y - Y).
    """
    X, Y = site_position(lat, SiteIndex(n, m))
    sign = -1.0 if (n * m) % 2 else 1.0

    def translated(x, y):
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        return sign * np.exp(0.5j * (Y * x - X * y)) * psi(x - X, y - Y)

    return translated


@dataclass(frozen=True)
class LLLState:
    """T_1^n T_2^m applied to the wavefunction of a generator in a given Landau level.

    Calls evaluate pointwise (erf closed form for level-0 filter generators);
    :meth:`on_sheared_grid` is the fast path for 2-D quadrature.
    """

    kernel: KernelSpec
    generator: GeneratorFunction
    lattice: LatticeSpec
    n: int = 0
    m: int = 0

    @classmethod
    def from_filter(cls, f: FilterBank, lat: LatticeSpec, level: int = 0):
        return cls(KernelSpec(lat.shape, level), from_filter(f, lat), lat)

    def translated(self, n: int, m: int) -> "LLLState":
        return replace(self, n=self.n + n, m=self.m + m)

    def _base(self, x, y):
        g = self.generator
        if self.kernel.level == 0 and g.filter is not None:
            return filter_closed_form(g.filter, self.lattice, x, y)
        return synthesize(self.kernel, g, x, y)

    def center_shift(self) -> np.ndarray:
        return site_position(self.lattice, SiteIndex(self.n, self.m))

    def __call__(self, x, y):
        if self.n == 0 and self.m == 0:
            return self._base(x, y)
        return magnetic_translate(self._base, self.lattice, self.n, self.m)(x, y)

    def on_sheared_grid(self, u, y):
        u = np.asarray(u, float)
        y = np.asarray(y, float)
        X, Y = self.center_shift()
        t = self.kernel.shear
        base = synthesize_sheared_grid(self.kernel, self.generator, u - (X - t * Y), y - Y)
        if self.n == 0 and self.m == 0:
            return base
        sign = -1.0 if (self.n * self.m) % 2 else 1.0
        x = u[:, None] + t * y[None, :]
        return sign * np.exp(0.5j * (Y * x - X * y[None, :])) * base


# ---------------------------------------------------------------- 2-D quadrature

@dataclass(frozen=True)
class ShearedWindow:
    """Parallelogram {x = u + shear*y : u in u_range, y in y_range} with tensor Gauss-Legendre.

    Aligning u with the kernel's Gaussian direction lets the slowly decaying
    1/|y| tail of LLL states be truncated far out at modest cost.
    """

    shear: float
    u_range: tuple[float, float]
    y_range: tuple[float, float]
    u_panel: float = 1.0
    y_panel: float = 2.0
    u_order: int = 16
    y_order: int = 20

    def u_nodes(self):
        lo, hi = self.u_range
        return gauss_legendre(lo, hi, max(1, math.ceil((hi - lo) / self.u_panel)), self.u_order)

    def y_nodes(self):
        lo, hi = self.y_range
        return gauss_legendre(lo, hi, max(1, math.ceil((hi - lo) / self.y_panel)), self.y_order)

    def as_dict(self) -> dict:
        return {"shear": self.shear, "u_range": list(self.u_range), "y_range": list(self.y_range)}


def default_window(lat: LatticeSpec, y_half: float = 1000.0, u_pad: float = 10.0, extra=()):
    """Window for states generated on [0, a), enlarged to contain the given translates."""
    t = lat.shear
    du = [0.0] + [float(X - t * Y) for X, Y in (site_position(lat, SiteIndex(*nm)) for nm in extra)]
    dy = [0.0] + [float(site_position(lat, SiteIndex(*nm))[1]) for nm in extra]
    return ShearedWindow(
        t,
        (min(du) - lat.a - u_pad, max(du) + u_pad),
        (min(dy) - y_half, max(dy) + y_half),
    )


def _values(f, u, y, shear):
    if hasattr(f, "on_sheared_grid") and getattr(getattr(f, "kernel", None), "shear", None) == shear:
        return f.on_sheared_grid(u, y)
    U, Y = np.meshgrid(u, y, indexing="ij")
    return np.asarray(f(U + shear * Y, Y), dtype=complex)


def inner_product(f, g, window: ShearedWindow, chunk: int = 2048) -> complex:
    """<f, g> = int conj(f) g dx dy over the window (the map (u, y) -> (x, y) has unit Jacobian)."""
    u, wu = window.u_nodes()
    y, wy = window.y_nodes()
    total = 0j
    for j in range(0, y.size, chunk):
        yy, ww = y[j:j + chunk], wy[j:j + chunk]
        fv = _values(f, u, yy, window.shear)
        gv = fv if g is f else _values(g, u, yy, window.shear)
        total += wu @ (np.conj(fv) * gv) @ ww
    return complex(total)


def norm2(f, window: ShearedWindow) -> float:
    return inner_product(f, f, window).real


def tail_mass_estimate(window: ShearedWindow, coefficient: float = 0.71) -> float:
    """Norm outside |y| <= Y for psi_3-like states, whose density decays as ~0.36/y^2 per side."""
    lo, hi = window.y_range
    return coefficient / min(-lo, hi)


# ---------------------------------------------------------------- sampled fields

@dataclass
class WaveField:
    x: np.ndarray
    y: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def norm_estimate(self) -> float:
        dx = self.x[1] - self.x[0] if self.x.size > 1 else 1.0
        dy = self.y[1] - self.y[0] if self.y.size > 1 else 1.0
        return float(np.sum(np.abs(self.values) ** 2) * dx * dy)

    def rows(self):
        for i, xv in enumerate(self.x):
            for j, yv in enumerate(self.y):
                v = self.values[i, j]
                yield xv, yv, v.real, v.imag, abs(v)


def sample_field(psi, x, y, metadata=None) -> WaveField:
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    X, Y = np.meshgrid(x, y, indexing="ij")
    vals = np.asarray(psi(X, Y), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("non-finite wavefunction samples")
    return WaveField(x, y, vals, dict(metadata or {}))
