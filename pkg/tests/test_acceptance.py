"""One test per acceptance check, each printing its pass line and holding
its stated time bound."""

import pytest

from oalg import selftest

BOUNDS = {
    "1": 1, "2": 60, "3": 120, "4": 60, "5": 60,
    "6": 120, "7": 300, "8": 120, "9": 10,
}


def _assert(result):
    print(result.line())
    assert result.passed, result.details
    bound = BOUNDS[result.name.split()[0]]
    assert result.seconds < bound, f"{result.name} took {result.seconds:.1f}s"


def test_criterion_1_paper_example_fidelity():
    _assert(selftest.criterion_1())


def test_criterion_2_term_order_antisymmetry():
    _assert(selftest.criterion_2())


def test_criterion_3_closure_oracle_equivalence():
    _assert(selftest.criterion_3())


def test_criterion_4_quotient_laws():
    _assert(selftest.criterion_4())


def test_criterion_5_universal_extension():
    _assert(selftest.criterion_5())


def test_criterion_6_pushout_soundness():
    _assert(selftest.criterion_6())


def test_criterion_7_special_amalgamation():
    _assert(selftest.criterion_7())


def test_criterion_8_normalizer():
    _assert(selftest.criterion_8())


def test_criterion_9_unordered_corollary():
    _assert(selftest.criterion_9())
