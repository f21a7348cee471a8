import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from landau_mra.montecarlo import batch_stderr, chunk_sizes, run_chunks, stream, summarize


def test_streams_are_keyed():
    a = stream(1, 0, 0).random(4)
    assert np.array_equal(a, stream(1, 0, 0).random(4))
    assert not np.array_equal(a, stream(1, 0, 1).random(4))
    assert not np.array_equal(a, stream(2, 0, 0).random(4))


@given(st.integers(1, 100_000), st.integers(1, 5000))
def test_chunk_partition(n, size):
    parts = chunk_sizes(n, size)
    assert sum(parts) == n and all(0 < p <= size for p in parts)


def test_chunk_partition_rejects_empty():
    with pytest.raises(ValueError):
        chunk_sizes(0)


@pytest.mark.parametrize("threads", [2, 3, 8])
def test_worker_count_does_not_change_samples(threads):
    work = lambda rng, size: rng.standard_normal(size)
    one = run_chunks(work, 9, (4,), 50_001, 1000, threads=1)
    many = run_chunks(work, 9, (4,), 50_001, 1000, threads=threads)
    assert one.tobytes() == many.tobytes()


def test_batch_stderr_matches_iid_formula():
    x = stream(3).standard_normal(1 << 16)
    assert batch_stderr(x, 64) == pytest.approx(x.std() / np.sqrt(x.size), rel=0.25)


def test_summarize_complex():
    x = stream(5).standard_normal(4096) + 1j * stream(6).standard_normal(4096)
    e = summarize(x)
    assert e.n_points == 4096 and e.imag != 0 and e.imag_stderr > 0
    assert set(e.as_dict()) == {"value", "stderr", "n_points", "imag", "imag_stderr"}
