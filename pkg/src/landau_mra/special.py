"""Error function of complex argument via the Faddeeva function w(z) = exp(-z^2) erfc(-iz)."""
from __future__ import annotations

import numpy as np
from scipy.special import wofz

# |exp(-z^2)| <= exp(|z|^2) stays below the double overflow threshold (~exp(709))
SAFE_RADIUS = 26.0


def complex_erf(z):
    """erf(z) for complex z, relative accuracy ~1e-13 for |z| <= 8.

    Uses erf(z) = 1 - exp(-z^2) w(iz) for Re z >= 0 and odd symmetry otherwise,
    so the Faddeeva factor is always evaluated in the closed upper half plane.
    Raises OverflowError where erf itself is not representable.
    """
    z = np.asarray(z, dtype=complex)
    sign = np.where(z.real >= 0, 1.0, -1.0)
    zz = sign * z
    with np.errstate(over="ignore", invalid="ignore"):
        out = sign * (1.0 - np.exp(-zz * zz) * wofz(1j * zz))
    small = np.abs(z) < 0.1
    if np.any(small):
        # 1 - erfc(z) cancels near the origin; use the Maclaurin series there
        out = np.array(out)
        out[small] = _erf_series(z[small])
    if not np.all(np.isfinite(out)):
        bad = z[~np.isfinite(out)].ravel()[0]
        raise OverflowError(f"erf({bad}) overflows double precision")
    return out[()] if out.ndim == 0 else out


def _erf_series(z, terms=10):
    z2 = z * z
    term = z.copy()
    total = z.copy()
    for n in range(1, terms):
        term = -term * z2 / n
        total = total + term / (2 * n + 1)
    return 2 / np.sqrt(np.pi) * total


def erf_window(alpha, beta: complex, v0, v1):
    """exp(-alpha^2/(4 beta)) * [erf(z(v1)) - erf(z(v0))] with z(v) = sqrt(beta) v - i alpha/(2 sqrt(beta)).

    This is (2 sqrt(beta)/sqrt(pi)) * int_{v0}^{v1} exp(i alpha t - beta t^2) dt.  The
    product overflows/cancels when evaluated literally for large |alpha|, so it is
    rewritten through w(z), keeping the unit parts of erf separate.
    """
    alpha = np.asarray(alpha, dtype=float)
    sb = np.sqrt(beta)
    with np.errstate(under="ignore"):
        gauss = np.exp(-alpha ** 2 / (4 * beta))

    def piece(v):
        z = sb * v - 1j * alpha / (2 * sb)
        sig = np.where(z.real >= 0, 1.0, -1.0)
        with np.errstate(under="ignore"):
            return sig, sig * np.exp(-beta * v * v + 1j * alpha * v) * wofz(sig * 1j * z)

    s1, p1 = piece(np.asarray(v1, float))
    s0, p0 = piece(np.asarray(v0, float))
    return (s1 - s0) * gauss - (p1 - p0)
