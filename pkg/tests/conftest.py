from __future__ import annotations

import sys
from fractions import Fraction

import numpy as np
import pytest

from yrk import linalg
from yrk.repn import evaluation_rep_sl2, trivial_rep
from yrk.scalars import QI


def Q(re, im=0) -> QI:
    return QI(Fraction(re), Fraction(im))


def exact(rows) -> np.ndarray:
    return linalg.exact_array([[QI.coerce(x) for x in r] for r in rows])


def as_complex(m) -> np.ndarray:
    return np.array([[complex(x) for x in row] for row in np.atleast_2d(m)], dtype=complex)


@pytest.fixture
def c2_0():
    return evaluation_rep_sl2(0, 1)


@pytest.fixture
def c2_1():
    return evaluation_rep_sl2(1, 1)


@pytest.fixture
def triv():
    return trivial_rep("A1")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for cid in sorted(results):
            terminalreporter.write_line(results[cid])
