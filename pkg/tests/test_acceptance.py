"""Every acceptance criterion at full size, one pass/fail line each.

Run with ``pytest -s tests/test_acceptance.py`` to see the table; the same
lines are printed by ``translucent verify-paper --seed 0``.
"""

import pytest

from translucent import harness


@pytest.mark.slow
@pytest.mark.parametrize("check", harness.CHECKS, ids=lambda c: c.__name__.removeprefix("check_"))
def test_criterion(check):
    result = check(seed=harness.DEFAULT_SEED) if check in harness.RANDOMIZED else check()
    print(result.line())
    assert result.passed, result.line()
