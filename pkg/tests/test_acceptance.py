"""One test per acceptance criterion; each prints its pass/fail line."""
from __future__ import annotations

import pytest

from quadstab import acceptance
from quadstab.acceptance import CriterionResult

from conftest import ACCEPTANCE_LINES


def check(result: CriterionResult) -> CriterionResult:
    line = result.line()
    ACCEPTANCE_LINES[result.number] = line
    print(line)
    return result


def test_criterion_01_enumeration():
    r = check(acceptance.enumeration_counts())
    assert r.passed, r.detail
    assert r.seconds < 5


def test_criterion_02_mutation_rotation():
    r = check(acceptance.mutation_rotation())
    assert r.passed, r.detail


def test_criterion_03_braid_relations():
    r = check(acceptance.braid_relations())
    assert r.passed, r.detail
    assert r.seconds < 1


@pytest.mark.slow
def test_criterion_04_counting_identities():
    r = check(acceptance.counting_identities())
    assert r.passed, r.detail
    assert r.seconds < 300


@pytest.mark.slow
def test_criterion_05_saddle_free_extraction():
    r = check(acceptance.saddle_free_extraction())
    assert r.passed, r.detail


def test_criterion_06_period_oracles():
    r = check(acceptance.period_oracles())
    assert r.passed, r.detail


@pytest.mark.slow
def test_criterion_07_local_isomorphism():
    r = check(acceptance.local_isomorphism())
    assert r.passed, r.detail


@pytest.mark.xfail(
    strict=True,
    reason="with exact periods the matched charges differ by 2|Z| sin(pi r), "
    "about 0.084 (n=1) and 0.18 (n=2) at r=0.01, so the 1e-3 bound cannot hold",
)
def test_criterion_08_wall_crossing():
    r = check(acceptance.wall_crossing())
    assert r.passed, r.detail


def test_criterion_08_wall_crossing_parts():
    # the parts of the criterion that do hold: rotation identity and decreasing gaps
    r = acceptance.wall_crossing()
    assert "FAILS" not in r.detail and "not decreasing" not in r.detail, r.detail


def test_criterion_09_monodromy():
    r = check(acceptance.monodromy_agreement())
    assert r.passed, r.detail


@pytest.mark.slow
def test_criterion_10_c_equivariance():
    r = check(acceptance.c_equivariance())
    assert r.passed, r.detail


@pytest.mark.slow
def test_criterion_11_stability_sanity():
    r = check(acceptance.stability_sanity())
    assert r.passed, r.detail
