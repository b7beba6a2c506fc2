"""One test per acceptance criterion, each run at its stated tolerance.

The per-criterion pass/fail lines are printed as they complete and
repeated in the terminal summary.
"""

import pytest

from diagprod import acceptance

RESULTS = {}


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number):
    result = acceptance.CRITERIA[number]()
    RESULTS[number] = result
    print(result.line())
    assert result.passed, result.line()
