import pytest
from numpy.testing import assert_equal, assert_raises

from fermi_forge.parallel import THREADS_ENV_VAR, n_jobs, parallel_map


def _square(x):
    return x * x


def test_n_jobs_defaults_to_one(monkeypatch):
    monkeypatch.delenv(THREADS_ENV_VAR, raising=False)
    assert_equal(n_jobs(), 1)


@pytest.mark.parametrize("value, expected", [("4", 4), ("0", 1), ("-2", 1)])
def test_n_jobs_reads_environment(monkeypatch, value: str, expected: int):
    monkeypatch.setenv(THREADS_ENV_VAR, value)
    assert_equal(n_jobs(), expected)


def test_n_jobs_raises_for_non_integer(monkeypatch):
    monkeypatch.setenv(THREADS_ENV_VAR, "many")

    with assert_raises(ValueError):
        n_jobs()


@pytest.mark.parametrize("threads", ["1", "2"])
def test_parallel_map_keeps_input_order(monkeypatch, threads: str):
    monkeypatch.setenv(THREADS_ENV_VAR, threads)

    result = parallel_map(_square, range(7), prefer="threads")
    assert_equal(result, [x * x for x in range(7)])


def test_parallel_map_empty(monkeypatch):
    monkeypatch.setenv(THREADS_ENV_VAR, "3")
    assert_equal(parallel_map(_square, []), [])
