"""d-MRA filter coefficients: storage, file format and orthonormality checks."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

DEFAULT_TOL = 1e-12


class InvalidFilterError(ValueError):
    pass


class FilterParseError(ValueError):
    pass


@dataclass(frozen=True)
class FilterBank:
    """Dilation ``d`` and a finitely supported set of complex coefficients.

    Indices missing from ``coeffs`` are zero; negative indices are allowed.
    """

    d: int
    coeffs: Mapping[int, complex]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise InvalidFilterError(f"dilation must be an integer >= 2, got {self.d}")
        if not self.coeffs:
            raise InvalidFilterError("empty coefficient set")
        clean = {int(n): complex(c) for n, c in sorted(self.coeffs.items())}
        if all(c == 0 for c in clean.values()):
            raise InvalidFilterError("all coefficients vanish")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "coeffs", MappingProxyType(clean))

    def __getitem__(self, n: int) -> complex:
        return self.coeffs.get(n, 0j)

    @property
    def indices(self) -> list[int]:
        return list(self.coeffs)

    @property
    def support(self) -> tuple[int, int]:
        idx = self.indices
        return idx[0], idx[-1]

    def norm2(self) -> float:
        return sum(abs(c) ** 2 for c in self.coeffs.values())


@dataclass(frozen=True)
class ValidationReport:
    residuals: dict[int, complex]
    max_residual: float
    tol: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "residuals": {str(l): [r.real, r.imag] for l, r in self.residuals.items()},
            "max_residual": self.max_residual,
            "tol": self.tol,
            "passed": self.passed,
        }


def autocorrelation(f: FilterBank, lag: int) -> complex:
    """sum_n h_n conj(h_{n+lag})."""
    return sum((c * f[n + lag].conjugate() for n, c in f.coeffs.items()), 0j)


def lag_residuals(coeffs: Mapping[int, complex], d: int) -> dict[int, complex]:
    """r_l = sum_n c_n conj(c_{n+dl}) - delta_{l0} for every lag with overlapping support.

    Works on any finite coefficient map, including all-zero ones.
    """
    idx = sorted(coeffs)
    reach = (idx[-1] - idx[0]) // d if idx else 0
    out = {}
    for l in range(-reach, reach + 1):
        acc = sum((c * complex(coeffs.get(n + d * l, 0)).conjugate() for n, c in coeffs.items()), 0j)
        out[l] = acc - (1.0 if l == 0 else 0.0)
    return out


def validate_orthonormality(f: FilterBank, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Residuals r_l = sum_n h_n conj(h_{n+dl}) - delta_{l0} at every overlapping lag."""
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    residuals = lag_residuals(f.coeffs, f.d)
    worst = max(abs(r) for r in residuals.values())
    return ValidationReport(residuals, worst, tol, worst <= tol)


def validate_sum_rule(f: FilterBank) -> float:
    """|sum_n h_n - sqrt(d)|. Advisory: orthonormality does not need it."""
    return abs(sum(f.coeffs.values()) - math.sqrt(f.d))


def validated(f: FilterBank, tol: float = DEFAULT_TOL) -> FilterBank:
    report = validate_orthonormality(f, tol)
    if not report.passed:
        raise InvalidFilterError(
            f"filter fails orthonormality: max residual {report.max_residual:.3e} > {tol:.1e}"
        )
    return f


def haar(d: int) -> FilterBank:
    c = 1.0 / math.sqrt(d)
    return FilterBank(d, {n: c for n in range(d)}, name=f"haar{d}")


def builtin(name: str, d: int | None = None) -> FilterBank:
    """Named filters: ``haar2``, ``haar3``, ``haar<d>`` or ``haar_d`` with explicit ``d``."""
    key = name.strip().lower()
    if key == "haar_d":
        if d is None:
            raise ValueError("builtin 'haar_d' needs the dilation d")
        return haar(d)
    m = re.fullmatch(r"haar(\d+)", key)
    if m:
        return haar(int(m.group(1)))
    raise KeyError(f"unknown builtin filter {name!r}")


def parse_filter(text: str, name: str | None = None) -> FilterBank:
    d = None
    coeffs: dict[int, complex] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if d is None:
            m = re.fullmatch(r"d\s*=\s*([+-]?\d+)", line)
            if not m:
                raise FilterParseError(f"line {lineno}: expected 'd=<int>', got {raw!r}")
            d = int(m.group(1))
            if d < 2:
                raise InvalidFilterError(f"line {lineno}: dilation must be >= 2, got {d}")
            continue
        parts = line.split()
        if len(parts) != 3:
            raise FilterParseError(f"line {lineno}: expected '<index> <re> <im>', got {raw!r}")
        try:
            n = int(parts[0])
            c = complex(float(parts[1]), float(parts[2]))
        except ValueError as exc:
            raise FilterParseError(f"line {lineno}: {exc}") from None
        if n in coeffs:
            raise FilterParseError(f"line {lineno}: duplicate index {n}")
        coeffs[n] = c
    if d is None:
        raise FilterParseError("missing 'd=<int>' header")
    return FilterBank(d, coeffs, name=name)


def load_filter(source: str | Path) -> FilterBank:
    path = Path(source)
    return parse_filter(path.read_text(encoding="utf-8"), name=path.stem)


def format_filter(f: FilterBank) -> str:
    lines = [f"d={f.d}"]
    lines += [f"{n} {c.real!r} {c.imag!r}" for n, c in f.coeffs.items()]
    return "\n".join(lines) + "\n"
