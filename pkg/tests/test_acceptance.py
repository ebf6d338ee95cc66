"""Acceptance gate: every criterion from the verification registry, with a
printed pass/fail line and the stated runtime budget enforced."""

import pytest

from posetahedra.verification import CRITERIA, run_criterion


@pytest.mark.parametrize(
    "cid,name,limit,fn", CRITERIA, ids=[f"C{cid:02d}-{name}" for cid, name, _, _ in CRITERIA]
)
def test_criterion(cid, name, limit, fn):
    result = run_criterion(cid, name, limit, fn)
    print(result.line())
    assert result.passed, result.detail
