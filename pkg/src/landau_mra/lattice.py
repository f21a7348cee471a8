"""Magnetic lattices obeying the rationality condition (unit cell area 2*pi)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TRIANGULAR = "triangular"
SQUARE = "square"
SHAPES = (TRIANGULAR, SQUARE)

ALONG_A2 = "along_a2"
ALONG_A1 = "along_a1"
PATTERNS = (ALONG_A2, ALONG_A1)


@dataclass(frozen=True, order=True)
class SiteIndex:
    """Powers (n, m) of the magnetic translations T_1^n T_2^m."""

    n: int
    m: int

    def __neg__(self):
        return SiteIndex(-self.n, -self.m)


@dataclass(frozen=True)
class LatticeSpec:
    shape: str
    a: float
    a1: tuple[float, float]
    a2: tuple[float, float]
    d: int = 1
    pattern: str = ALONG_A2

    @property
    def cell_area(self) -> float:
        return self.a1[0] * self.a2[1] - self.a1[1] * self.a2[0]

    @property
    def shear(self) -> float:
        """Slope t in u = x - t*y, the coordinate the LLL kernel localizes in."""
        return 1.0 / math.sqrt(3.0) if self.shape == TRIANGULAR else 0.0

    @property
    def dual_spacing(self) -> float:
        return 2.0 * math.pi / self.a

    def sublattice_step(self, n: int, m: int) -> tuple[int, int]:
        """Translation powers of the (n, m)-th occupied site relative to the origin."""
        if self.pattern == ALONG_A2:
            return n, self.d * m
        return self.d * n, m

    def position(self, n, m):
        return site_position(self, SiteIndex(n, m))

    def as_dict(self) -> dict:
        return {"shape": self.shape, "a": self.a, "d": self.d, "pattern": self.pattern}


def make_lattice(shape: str = TRIANGULAR, d: int = 1, pattern: str = ALONG_A2) -> LatticeSpec:
    if d < 1:
        raise ValueError(f"sublattice period must be >= 1, got {d}")
    if pattern not in PATTERNS:
        raise ValueError(f"unknown decimation pattern {pattern!r}")
    if shape == TRIANGULAR:
        a = math.sqrt(4.0 * math.pi / math.sqrt(3.0))
        a1, a2 = (a, 0.0), (a / 2.0, 2.0 * math.pi / a)
    elif shape == SQUARE:
        a = math.sqrt(2.0 * math.pi)
        a1, a2 = (a, 0.0), (0.0, a)
    else:
        raise ValueError(f"unsupported lattice shape {shape!r}")
    return LatticeSpec(shape, a, a1, a2, int(d), pattern)


def site_position(lat: LatticeSpec, s: SiteIndex) -> np.ndarray:
    """Localization center (X_nm, Y_nm) of T_1^n T_2^m psi for psi centered at the origin."""
    if lat.shape == TRIANGULAR:
        return np.array([-lat.a * (s.n + s.m / 2.0), -s.m * 2.0 * math.pi / lat.a])
    return np.array([-lat.a * s.n, -lat.a * s.m])


def sublattice_sites(lat: LatticeSpec, radius: float) -> list[SiteIndex]:
    """Occupied sites within ``radius`` of the origin, origin excluded.

    Sorted by distance, ties broken lexicographically on (n, m).
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    # |n|, |m| <= radius / (cell height) bounds the index box for both shapes
    height = abs(lat.cell_area) / max(math.hypot(*lat.a1), math.hypot(*lat.a2))
    reach = int(math.ceil(2.0 * radius / height)) + 2
    out = []
    for i in range(-reach, reach + 1):
        for j in range(-reach, reach + 1):
            n, m = lat.sublattice_step(i, j)
            if n == 0 and m == 0:
                continue
            r = float(np.hypot(*site_position(lat, SiteIndex(n, m))))
            if r <= radius * (1 + 1e-12):
                out.append((round(r, 9), n, m))
    out.sort()
    return [SiteIndex(n, m) for _, n, m in out]
