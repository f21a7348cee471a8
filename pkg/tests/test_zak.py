import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from landau_mra.filters import FilterBank, builtin, haar
from landau_mra.generator import GeneratorFunction, from_filter, t_d_eval
from landau_mra.lattice import SQUARE, TRIANGULAR, make_lattice
from landau_mra.zak import (
    ZakConvergenceError,
    ZakFunction,
    inverse_zak,
    j_d,
    j_d_flatness,
    t_d_zak,
    t_d_zak_function,
    zak_of,
    zak_transform,
)


def brute_zak(h, a, k, q, reach=6):
    return math.sqrt(a / (2 * math.pi)) * sum(np.exp(-1j * q * n * a) * h(k - n * a) for n in range(-reach, reach + 1))


def test_compact_support_single_term(tri):
    h = from_filter(builtin("haar3"), tri)
    rng = np.random.default_rng(0)
    k = rng.uniform(0, tri.a, 50)
    q = rng.uniform(0, 2 * math.pi / tri.a, 50)
    z = zak_transform(h, tri.a, k, q)
    assert np.allclose(z, math.sqrt(tri.a / (2 * math.pi)) * h(k), atol=1e-15)
    assert np.allclose(z, brute_zak(h, tri.a, k, q), atol=1e-15)


def test_indicator_is_constant(tri):
    a = tri.a
    h = GeneratorFunction(lambda s: np.full(np.shape(s), 1 / math.sqrt(a), dtype=complex), a, (0.0, a))
    z = zak_transform(h, a, np.linspace(0, a, 7, endpoint=False), 0.3)
    assert np.allclose(z, 1 / math.sqrt(2 * math.pi))
    assert np.all(zak_transform(lambda s: 0 * s, a, 0.2, 0.1, n_max=4) == 0)


def test_quasi_periodicity(tri):
    a = tri.a
    g = lambda s: np.exp(-s * s / 3) * (1 + 0.5j * s)
    k, q = 0.7, 0.4
    z0 = zak_transform(g, a, k, q, n_max=20)
    assert abs(zak_transform(g, a, k + a, q, n_max=20) - np.exp(-1j * q * a) * z0) < 1e-12
    # translating h by a multiplies by e^{iqa}
    zs = zak_transform(lambda s: g(s - a), a, k, q, n_max=20)
    assert abs(zs - np.exp(1j * q * a) * z0) < 1e-12
    assert abs(zak_transform(g, a, k, q + 2 * math.pi / a, n_max=20) - z0) < 1e-12


def test_slow_tail_raises(tri):
    with pytest.raises(ZakConvergenceError) as info:
        zak_transform(lambda s: 1 / (1 + np.abs(s)), tri.a, 0.1, 0.2, n_max=8)
    assert info.value.partial_sum is not None


def test_unitarity_gaussian(tri):
    # ||Z g||_{L2(D)} = ||g||_{L2(R)}
    a = tri.a
    g = lambda s: np.exp(-0.5 * (s - 0.3) ** 2) * np.exp(0.8j * s)
    n = 96
    k = (np.arange(n) + 0.5) * a / n
    q = np.arange(n) * (2 * math.pi / a) / n
    K, Q = np.meshgrid(k, q, indexing="ij")
    zz = zak_transform(g, a, K, Q, n_max=20)
    norm_d = np.sum(np.abs(zz) ** 2) * (a / n) * (2 * math.pi / a / n)
    assert norm_d == pytest.approx(math.sqrt(math.pi), rel=1e-10)


def test_t_d_zak_values(tri):
    a = tri.a
    f = builtin("haar3")
    assert t_d_zak(f, tri, 0.0) == pytest.approx(math.sqrt(3) / math.sqrt(2 * math.pi))
    assert abs(t_d_zak(f, tri, a / 3)) < 1e-15
    assert t_d_zak(f, tri, 0.4, 0.1) == t_d_zak(f, tri, 0.4, 2.0)


@pytest.mark.parametrize("name", ["haar2", "haar3"])
def test_t_d_zak_is_zak_of_t_d(name, tri):
    f = builtin(name)
    k = np.linspace(0, tri.a, 11, endpoint=False)
    z = zak_transform(from_filter(f, tri), tri.a, k, 0.3)
    assert np.allclose(z, t_d_zak(f, tri, k, 0.3), atol=1e-15)


def test_j_d_values(tri):
    z = t_d_zak_function(builtin("haar3"), tri)
    assert j_d(z, 3, 0.0, 0.0) == pytest.approx(3 / (2 * math.pi))
    zero = ZakFunction(lambda k, q: np.zeros(np.shape(k), complex), tri.a)
    assert j_d(zero, 3, 0.5, 0.5) == 0


@pytest.mark.parametrize("shape", [TRIANGULAR, SQUARE])
@pytest.mark.parametrize("d", [2, 3, 7])
def test_flatness_haar(shape, d):
    lat = make_lattice(shape, d)
    rep = j_d_flatness(t_d_zak_function(haar(d), lat), d, 64)
    assert rep.passed(1e-10)
    assert rep.target == pytest.approx(d / (2 * math.pi))


def test_flatness_of_zak_of_t2(sq):
    # the generic transform of the s-space generator, not the closed form
    lat = make_lattice(SQUARE, 2)
    f = builtin("haar2")
    h = from_filter(f, lat)
    rep = j_d_flatness(zak_of(h, lat.a), 2, 32)
    assert rep.max_deviation < 1e-10


def test_invalid_filter_not_flat(sq):
    rep = j_d_flatness(t_d_zak_function(FilterBank(2, {0: 1, 1: 1}), sq), 2, 16)
    assert rep.max_deviation == pytest.approx(1 / math.pi)
    assert not rep.passed()


@pytest.mark.parametrize("name", ["haar2", "haar3"])
def test_inverse_round_trip(name, tri):
    f = builtin(name)
    s = np.linspace(-2 * tri.a, 3 * tri.a, 101)
    back = inverse_zak(zak_of(from_filter(f, tri), tri.a), s)
    assert np.max(np.abs(back - t_d_eval(f, tri, s))) < 1e-8
    t_back = inverse_zak(t_d_zak_function(f, tri), s[(s >= 0) & (s < tri.a)])
    assert np.max(np.abs(t_back - t_d_eval(f, tri, s[(s >= 0) & (s < tri.a)]))) < 1e-8
    assert np.all(inverse_zak(ZakFunction(lambda k, q: 0 * k + 0j, tri.a), s) == 0)


@given(
    st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False), min_size=1, max_size=5),
    st.integers(-2, 2),
)
def test_inverse_round_trip_property(cs, shift):
    lat = make_lattice(TRIANGULAR)
    if all(abs(c) < 1e-6 for c in cs):
        cs = [1.0]
    f = FilterBank(2, {i + shift: c for i, c in enumerate(cs)})
    s = np.linspace(-lat.a, 2 * lat.a, 37)
    back = inverse_zak(zak_of(from_filter(f, lat), lat.a), s)
    assert np.max(np.abs(back - t_d_eval(f, lat, s))) < 1e-8 * max(1, f.norm2())

