"""One test per acceptance criterion; each prints a PASS/FAIL line with its measurements.

Tolerances and runtime limits live in dedk.verify and are the ones the criteria fix:
1e-9 for the uniform constant, (0.5481, 0.5482) and 1e-3 for polyD, 0.539/0.542 and
1e-8 for certificates, zero infeasible cuts, 1e-9 on the per-edge bound, 0.002 on
bipartite frequencies, exact rationals for structured labels, 1e-6 relative LP
agreement, 0.549(k+1) ratios, and 95% for derandomization.

The lines are also collected into a summary section at the end of the run.
"""

import pytest

from dedk.verify import CHECKS

from conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize("number", sorted(CHECKS))
def test_criterion(number):
    result = CHECKS[number]()
    print(result.line())
    ACCEPTANCE_LINES.append(result.line())
    assert result.passed, result.detail


if __name__ == "__main__":
    for n in sorted(CHECKS):
        print(CHECKS[n]().line(), flush=True)
