"""Every acceptance criterion at its stated tolerance; one line per criterion.

The checks live in gmbif.verify (shared with ``gmbif verify``).  Nothing here
relaxes a threshold: a criterion that does not hold fails.
"""

from __future__ import annotations

import pytest

from gmbif.verify import CRITERIA, run_criterion


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=[f"{n}-{CRITERIA[n][0]}" for n in sorted(CRITERIA)])
def test_criterion(number, acceptance_log):
    result = run_criterion(number, rng_seed=0)
    line = result.line()
    acceptance_log.append(line)
    print(line)
    assert result.passed, line
