import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from landau_mra.filters import (
    FilterBank,
    FilterParseError,
    InvalidFilterError,
    autocorrelation,
    builtin,
    format_filter,
    haar,
    lag_residuals,
    load_filter,
    parse_filter,
    validate_orthonormality,
    validate_sum_rule,
    validated,
)


def brute_residuals(coeffs, d):
    # double loop straight from the definition sum_n h_n conj(h_{n+dl}) - delta_l0
    idx = sorted(coeffs)
    span = idx[-1] - idx[0]
    out = {}
    for l in range(-(span // d) - 1, span // d + 2):
        s = 0j
        for n in idx:
            s += coeffs[n] * np.conj(coeffs.get(n + d * l, 0))
        out[l] = s - (1 if l == 0 else 0)
    return out


@pytest.mark.parametrize("d", range(2, 17))
def test_haar_passes(d):
    rep = validate_orthonormality(haar(d), tol=1e-14)
    assert rep.passed and rep.max_residual < 1e-14


def test_invalid_filter_fails_at_lag_zero():
    rep = validate_orthonormality(FilterBank(2, {0: 1, 1: 1}))
    assert not rep.passed
    assert rep.residuals[0] == pytest.approx(1.0)
    assert rep.max_residual == pytest.approx(1.0)


def test_sum_rule():
    assert validate_sum_rule(builtin("haar3")) < 1e-15
    assert validate_sum_rule(builtin("haar2")) < 1e-15
    assert validate_sum_rule(FilterBank(2, {0: 1})) == pytest.approx(math.sqrt(2) - 1)


def test_builtin_names():
    assert builtin("haar2") == haar(2)
    assert builtin("HAAR5") == haar(5)
    assert builtin("haar_d", d=7) == haar(7)
    with pytest.raises(ValueError):
        builtin("haar_d")
    with pytest.raises(KeyError):
        builtin("daub4")


def test_daubechies4_passes():
    s3 = math.sqrt(3)
    c = [(1 + s3) / (4 * math.sqrt(2)), (3 + s3) / (4 * math.sqrt(2)), (3 - s3) / (4 * math.sqrt(2)), (1 - s3) / (4 * math.sqrt(2))]
    f = FilterBank(2, dict(enumerate(c)))
    assert validate_orthonormality(f, tol=1e-14).passed
    assert validate_sum_rule(f) < 1e-15


def test_validated_raises():
    with pytest.raises(InvalidFilterError):
        validated(FilterBank(2, {0: 1, 1: 1}))
    assert validated(haar(3)) == haar(3)


def test_bad_constructions():
    with pytest.raises(InvalidFilterError):
        FilterBank(1, {0: 1})
    with pytest.raises(InvalidFilterError):
        FilterBank(2, {})
    with pytest.raises(InvalidFilterError):
        FilterBank(2, {0: 0, 3: 0})


def test_parse_roundtrip(tmp_path):
    text = "# a comment\nd=3\n0 0.5 0.25  # trailing\n-2 1e-3 -4\n\n"
    f = parse_filter(text)
    assert f.d == 3 and f.indices == [-2, 0]
    assert f[0] == 0.5 + 0.25j and f[7] == 0
    assert parse_filter(format_filter(f)) == f
    p = tmp_path / "x.flt"
    p.write_text(text)
    assert load_filter(p) == f and load_filter(p).name == "x"


@pytest.mark.parametrize(
    "text, exc",
    [
        ("0 1 0\n", FilterParseError),
        ("d=2\n0 1\n", FilterParseError),
        ("d=2\n0 1 0\n0 1 0\n", FilterParseError),
        ("d=2\nx 1 0\n", FilterParseError),
        ("", FilterParseError),
        ("d=1\n0 1 0\n", InvalidFilterError),
    ],
)
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_filter(text)


coeff_maps = st.dictionaries(
    st.integers(-6, 6),
    st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
    min_size=1,
    max_size=8,
).filter(lambda c: any(v != 0 for v in c.values()))


@given(coeff_maps, st.integers(2, 5))
def test_residuals_match_brute_force(coeffs, d):
    fast = lag_residuals(coeffs, d)
    slow = brute_residuals(coeffs, d)
    for l in set(fast) | set(slow):
        assert abs(fast.get(l, 0) - slow.get(l, 0)) < 1e-12


@given(coeff_maps, st.integers(-4, 4))
def test_autocorrelation_hermitian(coeffs, lag):
    f = FilterBank(2, coeffs)
    assert abs(autocorrelation(f, lag) - np.conj(autocorrelation(f, -lag))) < 1e-12


@given(st.integers(2, 16), st.floats(0, 2 * math.pi), st.integers(-5, 5))
def test_orthonormality_invariant_under_phase_and_shift(d, theta, shift):
    # multiplying by a unimodular constant or shifting indices keeps the ONC
    f = haar(d)
    g = FilterBank(d, {n + shift: c * complex(math.cos(theta), math.sin(theta)) for n, c in f.coeffs.items()})
    assert validate_orthonormality(g, tol=1e-14).passed
