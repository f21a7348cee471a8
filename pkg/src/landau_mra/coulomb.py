"""Coulomb energetics of a lattice of LLL electrons.

Units: magnetic length 1, energies in e^2/(eps l).  The kinetic term is the
constant 1/2 and is reported separately from the Coulomb pieces.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import erfc

from .lattice import LatticeSpec, SiteIndex, make_lattice, site_position, sublattice_sites
from .montecarlo import CHUNK_SIZE, Estimate, run_chunks, summarize
from .quadrature import gauss_legendre

KINETIC = 0.5
WIGNER_COEFFICIENT_REF = -0.7821
DELTA_E_REF = 0.3184
# earlier gaussian-based construction; a different wavefunction, stored for comparison only
GAUSSIAN_DELTA_E_REF = 0.0657
NORM_WARNING = 0.99


class EwaldError(RuntimeError):
    pass


# ---------------------------------------------------------------- Ewald

def _shell(b1, b2, cutoff):
    """Nonzero lattice vectors n b1 + m b2 with norm <= cutoff."""
    area = abs(b1[0] * b2[1] - b1[1] * b2[0])
    reach = int(math.ceil(cutoff * max(np.hypot(*b1), np.hypot(*b2)) / area)) + 1
    n = np.arange(-reach, reach + 1)
    N, M = (g.ravel() for g in np.meshgrid(n, n))
    keep = (N != 0) | (M != 0)
    r = np.hypot(N[keep] * b1[0] + M[keep] * b2[0], N[keep] * b1[1] + M[keep] * b2[1])
    return r[r <= cutoff]


def madelung_energy(a1, a2, kappa: float | None = None, tol: float = 1e-15) -> float:
    """Per-particle Coulomb energy of a 2-D Bravais lattice of unit charges in a uniform background.

    E = 1/2 [sum_R erfc(kR)/R + (2 pi/A) sum_G erfc(G/2k)/G - 2k/sqrt(pi) - 2 sqrt(pi)/(k A)].
    """
    a1 = np.asarray(a1, float)
    a2 = np.asarray(a2, float)
    area = abs(a1[0] * a2[1] - a1[1] * a2[0])
    if area <= 0:
        raise EwaldError("degenerate lattice")
    if kappa is None:
        kappa = math.sqrt(math.pi / area)
    if not kappa > 0:
        raise EwaldError(f"splitting parameter must be positive, got {kappa}")
    # erfc(t) < tol beyond t ~ sqrt(-log tol) + margin
    t = math.sqrt(-math.log(tol)) + 1.0
    b1 = 2 * math.pi * np.array([a2[1], -a2[0]]) / area
    b2 = 2 * math.pi * np.array([-a1[1], a1[0]]) / area
    r_cut, g_cut = t / kappa, 2 * kappa * t
    # ~ pi cutoff^2 / cell area vectors per sum
    if max(math.pi * r_cut**2 / area, math.pi * g_cut**2 * area / (2 * math.pi) ** 2) > 5e6:
        raise EwaldError(f"splitting parameter {kappa} needs too many lattice vectors")
    r = _shell(a1, a2, r_cut)
    g = _shell(b1, b2, g_cut)
    real = np.sum(erfc(kappa * r) / r)
    recip = 2 * math.pi / area * np.sum(erfc(g / (2 * kappa)) / g)
    return 0.5 * (real + recip - 2 * kappa / math.sqrt(math.pi) - 2 * math.sqrt(math.pi) / (kappa * area))


def wigner_energy(nu: float = 1.0, kappa: float | None = None) -> float:
    """Classical triangular Wigner crystal at filling nu (area 2 pi / nu per electron)."""
    if not 0 < nu <= 1:
        raise ValueError(f"filling factor must be in (0, 1], got {nu}")
    area = 2 * math.pi / nu
    a = math.sqrt(2 * area / math.sqrt(3))
    return madelung_energy((a, 0.0), (a / 2, a * math.sqrt(3) / 2), kappa)


# ---------------------------------------------------------------- Monte Carlo setup

SAMPLERS = ("gaussian", "uniform")


@dataclass(frozen=True)
class MonteCarloConfig:
    """Everything that determines an MC estimate.  ``threads`` only changes wall time.

    Region: for each electron a square box of half-width ``half_width``
    (default 6a) around its density centroid.  ``renormalize`` divides by the
    in-box norms so the truncated densities carry unit charge.

    With the gaussian sampler a fraction ``singular_fraction`` of second
    points is drawn at displacement t from the first with density
    1/(2 pi rho |t|) on |t| < rho; that cancels the 1/|r1 - r2| singularity,
    whose variance is otherwise log-divergent in 2-D.
    """

    seed: int = 42
    n_points: int = 250_000
    half_width: float | None = None
    sampler: str = "gaussian"
    gaussian_fraction: float = 0.8
    singular_fraction: float = 0.2
    singular_radius: float = 2.0
    chunk_size: int = CHUNK_SIZE
    n_batches: int = 256
    renormalize: bool = True
    threads: int = 1

    def __post_init__(self):
        if self.n_points < 1:
            raise ValueError("n_points must be >= 1")
        if self.sampler not in SAMPLERS:
            raise ValueError(f"sampler must be one of {SAMPLERS}")
        if self.half_width is not None and not self.half_width > 0:
            raise ValueError("region must have positive volume")
        if not 0 <= self.gaussian_fraction < 1:
            raise ValueError("gaussian_fraction must be in [0, 1)")
        if not 0 <= self.singular_fraction < 1 or not self.singular_radius > 0:
            raise ValueError("singular_fraction must be in [0, 1) and singular_radius > 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("threads")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "MonteCarloConfig":
        return cls(**d)


@dataclass(frozen=True)
class DensityModel:
    """|psi|^2 restricted to a box, with its in-box norm and moments (by quadrature)."""

    psi: object
    center: np.ndarray
    cov: np.ndarray
    half_width: float
    norm: float

    def density(self, x, y):
        return np.abs(self.psi(x, y)) ** 2

    def provenance(self) -> dict:
        return {
            "center": [float(c) for c in self.center],
            "cov": [[float(c) for c in row] for row in self.cov],
            "half_width": self.half_width,
            "in_box_norm": self.norm,
        }


def density_model(psi, half_width: float, center=(0.0, 0.0), iterations: int = 3,
                  panel: float = 1.0, order: int = 16) -> DensityModel:
    """Box quadrature of |psi|^2, re-centering the box on the in-box centroid."""
    c = np.asarray(center, float)
    n_panels = max(1, math.ceil(2 * half_width / panel))
    for _ in range(iterations):
        x, wx = gauss_legendre(c[0] - half_width, c[0] + half_width, n_panels, order)
        y, wy = gauss_legendre(c[1] - half_width, c[1] + half_width, n_panels, order)
        X, Y = np.meshgrid(x, y, indexing="ij")
        rho = np.abs(psi(X, Y)) ** 2 * np.outer(wx, wy)
        norm = float(rho.sum())
        if not norm > 0:
            raise ValueError("wavefunction vanishes on the sampling box")
        mean = np.array([(rho * X).sum(), (rho * Y).sum()]) / norm
        dx, dy = X - mean[0], Y - mean[1]
        cov = np.array([[(rho * dx * dx).sum(), (rho * dx * dy).sum()],
                        [(rho * dx * dy).sum(), (rho * dy * dy).sum()]]) / norm
        c = mean
    return DensityModel(psi, c, cov, float(half_width), norm)


class _Proposal:
    """Mixture of gaussians (one per center) and a uniform over the bounding box."""

    def __init__(self, centers, cov, lo, hi, gaussian_fraction):
        self.centers = np.atleast_2d(np.asarray(centers, float))
        self.lo = np.asarray(lo, float)
        self.hi = np.asarray(hi, float)
        self.frac = gaussian_fraction
        self.chol = np.linalg.cholesky(cov)
        self.prec = np.linalg.inv(cov)
        self.gauss_norm = 1.0 / (2 * math.pi * math.sqrt(np.linalg.det(cov)))
        self.volume = float(np.prod(self.hi - self.lo))

    def sample(self, rng, size):
        k = len(self.centers)
        choice = rng.random(size)
        which = rng.integers(0, k, size)
        g = self.centers[which] + rng.standard_normal((size, 2)) @ self.chol.T
        un = self.lo + (self.hi - self.lo) * rng.random((size, 2))
        return np.where((choice < self.frac)[:, None], g, un)

    def pdf(self, r):
        total = np.zeros(len(r))
        for c in self.centers:
            d = r - c
            total += np.exp(-0.5 * np.einsum("ni,ij,nj->n", d, self.prec, d))
        inside = self.contains(r)
        return self.frac * self.gauss_norm * total / len(self.centers) + np.where(inside, (1 - self.frac) / self.volume, 0.0)

    def contains(self, r):
        return np.all((r >= self.lo) & (r <= self.hi), axis=1)


class _PairProposal:
    """(r1, r2) with r1 ~ p and r2 ~ (1 - eps) p + eps k(r1 + shift - r2), k(t) = 1/(2 pi rho |t|) on |t| < rho."""

    def __init__(self, prop: _Proposal, shift, eps: float, rho: float):
        self.prop = prop
        self.shift = np.asarray(shift, float)
        self.eps = eps
        self.rho = rho

    def sample(self, rng, size):
        r1 = self.prop.sample(rng, size)
        r2 = self.prop.sample(rng, size)
        pick = rng.random(size) < self.eps
        radius = self.rho * rng.random(size)
        angle = 2 * math.pi * rng.random(size)
        t = radius[:, None] * np.column_stack([np.cos(angle), np.sin(angle)])
        r2 = np.where(pick[:, None], r1 + self.shift - t, r2)
        return r1, r2

    def pdf(self, r1, r2):
        t = np.hypot(*(r1 + self.shift - r2).T)
        with np.errstate(divide="ignore"):
            k = np.where(t < self.rho, 1 / (2 * math.pi * self.rho * t), 0.0)
        return self.prop.pdf(r1) * ((1 - self.eps) * self.prop.pdf(r2) + self.eps * k)


def _pair_proposal(model: DensityModel, mc: MonteCarloConfig, shifts, singular_shift):
    prop = _proposal(model, mc, shifts)
    eps = mc.singular_fraction if mc.sampler == "gaussian" else 0.0
    return _PairProposal(prop, singular_shift, eps, mc.singular_radius)


def _proposal(model: DensityModel, mc: MonteCarloConfig, shifts):
    h = model.half_width
    centers = [model.center + s for s in shifts]
    lo = np.min(centers, axis=0) - h
    hi = np.max(centers, axis=0) + h
    frac = mc.gaussian_fraction if mc.sampler == "gaussian" else 0.0
    return _Proposal(centers, model.cov, lo, hi, frac)


def _region_model(psi, lat: LatticeSpec, mc: MonteCarloConfig, model):
    if model is not None:
        return model
    h = mc.half_width if mc.half_width is not None else 6 * lat.a
    return density_model(psi, h, center=(-lat.a / 2, 0.0))


# ---------------------------------------------------------------- two-body integrals

def _translate(psi, lat, site):
    from .landau import magnetic_translate

    if hasattr(psi, "translated"):
        return psi.translated(site.n, site.m)
    return magnetic_translate(psi, lat, site.n, site.m)


def direct_energy(psi, site: SiteIndex, lat: LatticeSpec, mc: MonteCarloConfig,
                  model: DensityModel | None = None, key: tuple[int, ...] = (0,)) -> Estimate:
    """int int |psi_site(r1)|^2 |psi(r2)|^2 / |r1 - r2| over the two boxes, by importance sampling.

    |psi_site(r)|^2 = |psi(r - R)|^2, so r1 is drawn around the base centroid and shifted by R.
    """
    model = _region_model(psi, lat, mc, model)
    R = site_position(lat, site)
    pair = _pair_proposal(model, mc, [np.zeros(2)], R)
    box = pair.prop
    scale = model.norm ** 2 if mc.renormalize else 1.0

    def work(rng, size):
        s1, s2 = pair.sample(rng, size)
        ok = box.contains(s1) & box.contains(s2)
        rho = model.density(s1[:, 0], s1[:, 1]) * model.density(s2[:, 0], s2[:, 1])
        dist = np.hypot(*(s1 + R - s2).T)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.where(ok, rho / (pair.pdf(s1, s2) * dist), 0.0)
        return val / scale

    return summarize(run_chunks(work, mc.seed, key, mc.n_points, mc.chunk_size, mc.threads), mc.n_batches)


def exchange_energy(psi, site: SiteIndex, lat: LatticeSpec, mc: MonteCarloConfig,
                    model: DensityModel | None = None, key: tuple[int, ...] = (1,)) -> Estimate:
    """int int conj(psi_R(r1)) conj(psi(r2)) psi(r1) psi_R(r2) / |r1 - r2|.

    Both coordinates range over the bounding box of the two regions; the
    imaginary part is reported and should vanish within its stderr.
    """
    model = _region_model(psi, lat, mc, model)
    R = site_position(lat, site)
    pair = _pair_proposal(model, mc, [np.zeros(2), R], np.zeros(2))
    box = pair.prop
    psi_r = _translate(psi, lat, site)
    scale = model.norm ** 2 if mc.renormalize else 1.0

    def work(rng, size):
        r1, r2 = pair.sample(rng, size)
        ok = box.contains(r1) & box.contains(r2)
        a = np.conj(psi_r(*r1.T)) * psi(*r1.T)
        b = np.conj(psi(*r2.T)) * psi_r(*r2.T)
        dist = np.hypot(*(r1 - r2).T)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.where(ok, a * b / (pair.pdf(r1, r2) * dist), 0.0)
        return val / scale

    return summarize(run_chunks(work, mc.seed, key, mc.n_points, mc.chunk_size, mc.threads), mc.n_batches)


# ---------------------------------------------------------------- delta E

@dataclass(frozen=True)
class PairTerm:
    site: SiteIndex
    distance: float
    direct: Estimate
    exchange: Estimate | None
    classical: float

    @property
    def value(self) -> float:
        ex = self.exchange.value if self.exchange is not None else 0.0
        return self.direct.value - ex - self.classical

    @property
    def variance(self) -> float:
        ex = self.exchange.stderr if self.exchange is not None else 0.0
        return self.direct.stderr ** 2 + ex ** 2

    def as_dict(self) -> dict:
        return {
            "site": [self.site.n, self.site.m],
            "distance": self.distance,
            "direct": self.direct.as_dict(),
            "exchange": None if self.exchange is None else self.exchange.as_dict(),
            "classical": self.classical,
            "term": self.value,
        }


@dataclass
class EnergyReport:
    e_wigner: float
    pairs: list[PairTerm]
    delta_e: float
    delta_e_stderr: float
    kinetic: float = KINETIC
    provenance: dict = field(default_factory=dict)

    @property
    def total(self) -> float:
        return self.kinetic + self.e_wigner + self.delta_e

    def as_dict(self) -> dict:
        return {
            "E_W": self.e_wigner,
            "delta_E": self.delta_e,
            "delta_E_stderr": self.delta_e_stderr,
            "kinetic": self.kinetic,
            "total": self.total,
            "pairs": [p.as_dict() for p in self.pairs],
            "provenance": self.provenance,
        }


def delta_e(psi, lat: LatticeSpec, d: int, truncation_radius: float, mc: MonteCarloConfig,
            include_exchange: bool = False, model: DensityModel | None = None,
            progress=None) -> EnergyReport:
    """(1/2) sum over occupied sites within the radius of [E_d - E_ex - 1/|R|].

    Pair i uses stream keys (i, 0) for the direct and (i, 1) for the exchange integral.
    """
    if lat.d != d:
        lat = make_lattice(lat.shape, d, lat.pattern)
    model = _region_model(psi, lat, mc, model)
    notes = []
    if model.norm < NORM_WARNING:
        notes.append(f"in-box norm {model.norm:.4f} < {NORM_WARNING}; tails outside the region are dropped")
        warnings.warn(notes[-1], RuntimeWarning, stacklevel=2)
    pairs = []
    for i, site in enumerate(sublattice_sites(lat, truncation_radius)):
        dist = float(np.hypot(*site_position(lat, site)))
        ed = direct_energy(psi, site, lat, mc, model, key=(i, 0))
        ex = exchange_energy(psi, site, lat, mc, model, key=(i, 1)) if include_exchange else None
        pairs.append(PairTerm(site, dist, ed, ex, 1.0 / dist))
        if progress is not None:
            progress(pairs[-1])
    total = 0.5 * sum(p.value for p in pairs)
    err = 0.5 * math.sqrt(sum(p.variance for p in pairs))
    prov = {
        "mc": mc.as_dict(),
        "truncation_radius": truncation_radius,
        "n_pairs": len(pairs),
        "lattice": lat.as_dict(),
        "include_exchange": include_exchange,
        "density": model.provenance(),
        "quadrupole_tail_estimate": quadrupole_tail(model, d, truncation_radius),
        "warnings": notes,
    }
    return EnergyReport(wigner_energy(1.0 / d), pairs, total, err, KINETIC, prov)


def quadrupole_tail(model: DensityModel, d: int, radius: float) -> float:
    """Continuum estimate of the pair terms beyond ``radius`` (not included in delta E).

    For identical densities E_d - 1/R ~ <t^2>/(4 R^3) after angular averaging,
    with <t^2> = 2 tr(cov); one electron per area 2 pi d.
    """
    return float(np.trace(model.cov)) / (4 * d * radius)


@dataclass(frozen=True)
class ConvergenceCheck:
    base: EnergyReport
    doubled: EnergyReport

    @property
    def shift(self) -> float:
        return self.doubled.delta_e - self.base.delta_e

    @property
    def combined_stderr(self) -> float:
        return math.hypot(self.base.delta_e_stderr, self.doubled.delta_e_stderr)

    @property
    def converged(self) -> bool:
        return abs(self.shift) < self.combined_stderr


def doubling_check(psi, lat, d, truncation_radius, mc: MonteCarloConfig, **kw) -> ConvergenceCheck:
    """Rerun with twice the points and twice the radius (fresh seed offset for independence)."""
    base = delta_e(psi, lat, d, truncation_radius, mc, **kw)
    mc2 = MonteCarloConfig(**{**mc.as_dict(), "n_points": 2 * mc.n_points, "seed": mc.seed + 1}, threads=mc.threads)
    return ConvergenceCheck(base, delta_e(psi, lat, d, 2 * truncation_radius, mc2, **kw))
