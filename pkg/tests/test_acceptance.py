"""The acceptance battery: one test per criterion, one PASS/FAIL line each.

Run directly (``python tests/test_acceptance.py``) for the plain listing.
"""

from __future__ import annotations

import sys

import pytest

from yrk.suite import CRITERIA, run_acceptance

SEED = 0
RESULTS: dict[str, str] = {}


@pytest.mark.parametrize("cid,title,fn", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(cid, title, fn):
    rep = fn(SEED)
    line = f"{'PASS' if rep.passed else 'FAIL'} {cid} {title}"
    RESULTS[cid] = line
    print(line)
    for c in rep.checks:
        print(f"    {c.check_id}: residual={c.residual:.3e} tol={c.tol:.1e} {'ok' if c.passed else 'FAIL'}")
    assert rep.passed, rep.summary()


if __name__ == "__main__":
    _, verdicts = run_acceptance(SEED)
    for cid, title, ok in verdicts:
        print(f"{'PASS' if ok else 'FAIL'} {cid} {title}")
    sys.exit(0 if all(ok for _, _, ok in verdicts) else 1)
