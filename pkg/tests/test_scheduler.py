import pytest

from mtcf.system.scheduler import TaskScheduler, parallel_map


def square(x):
    return x * x


def fail_on_three(x):
    if x == 3:
        raise ArithmeticError("three")
    return x


def test_inline_and_pool_agree():
    """Results come back in input order for any worker count."""
    items = list(range(12))
    expected = [x * x for x in items]
    assert parallel_map(square, items, 1) == expected
    assert parallel_map(square, items, 3) == expected
    assert TaskScheduler(2).run(square, iter(items), label="square") == expected


def test_empty_input():
    assert parallel_map(square, [], 4) == []


def test_jobs_must_be_positive():
    with pytest.raises(ValueError, match="at least 1"):
        TaskScheduler(0)
    assert parallel_map(square, [2], 0) == [4]


@pytest.mark.parametrize("jobs", [1, 2])
def test_exceptions_propagate(jobs):
    with pytest.raises(ArithmeticError, match="three"):
        parallel_map(fail_on_three, range(5), jobs)
