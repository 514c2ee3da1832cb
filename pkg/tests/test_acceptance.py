"""Acceptance criteria, one test per criterion.

Each result line is collected and printed in an "acceptance criteria" block at
the end of the pytest run.  The same checks back ``kohnspec selftest``.
"""

import pytest

from kohnspec import checks

RESULT_LINES: list[str] = []


@pytest.mark.parametrize("name", list(checks.ALL_CHECKS))
def test_criterion(name):
    result = checks.run_check(name, seed=0)
    RESULT_LINES.append(result.line())
    print(result.line())
    assert result.passed, result.detail
