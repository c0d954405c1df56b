import pytest

from pbcode.golden import CHECKS, run_golden


@pytest.mark.parametrize("check", CHECKS, ids=lambda c: c.__name__)
def test_golden(check):
    res = check()
    assert res.passed, f"{res.name}: {res.detail}"


def test_run_golden_covers_all():
    assert len(run_golden()) == len(CHECKS) == 6
