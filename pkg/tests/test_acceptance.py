"""Release-gate acceptance suite.

Each test runs one check from nisqlab.validate at its pinned seed, scale,
and tolerance, and prints the measured values.  ``lab validate`` runs the
same checks from the command line.
"""

import pytest

from nisqlab.validate import CHECKS, run_check


@pytest.mark.parametrize(
    "check_id,name",
    [(cid, name) for cid, name, _, _ in CHECKS],
    ids=[f"{cid:02d}-{name}" for cid, name, _, _ in CHECKS],
)
def test_acceptance_criterion(check_id, name):
    result = run_check(check_id)
    print(f"[{check_id}] {name}: {result.details} ({result.elapsed:.1f}s)")
    assert result.passed, f"{name}: {result.details}"
