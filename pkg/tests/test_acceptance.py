"""Acceptance suite: the ten verification checks, one line each.

Each check prints a single ``[PASS]``/``[FAIL]`` line with its
pinned tolerances baked into :mod:`momaps.verify`.  The deep
degree-3/2 catalog scan (the one slow item, tens of minutes) can be
skipped by setting ``MOMAPS_SHALLOW_ACCEPTANCE=1``, which downgrades
the dominant-membership part of the catalog checks to the certified
shallow variant.
"""

import os

import pytest

from momaps.verify import CHECKS, VerificationContext


@pytest.fixture(scope="session")
def ctx():
    shallow = os.environ.get("MOMAPS_SHALLOW_ACCEPTANCE") == "1"
    return VerificationContext(deep_catalog=not shallow)


@pytest.mark.parametrize(("name", "check"), CHECKS,
                         ids=[name for name, _ in CHECKS])
def test_criterion(name, check, ctx):
    result = check(ctx)
    print(result.line())
    assert result.passed, result.detail
