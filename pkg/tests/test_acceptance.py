"""Acceptance gate: every headline criterion at its pinned tolerance.

Each test prints one pass/fail line per check (visible with -s or on
failure) and asserts the lot.  The disconnected-ball reproduction is a soft
criterion: its negative control (no disconnection on the annulus) is hard,
while the positive search is allowed to come back empty as long as it
reports the proximity diagnostics that would guide a wider sweep; set
SCHOTTKY_WITNESS_FULL=1 for the full parameter schedule.
"""

import pytest

from schottky.verify import (
    print_report,
    suite_annulus,
    suite_disk,
    suite_triply,
    suite_witness,
)


@pytest.fixture(scope="module")
def annulus_results():
    return suite_annulus()


@pytest.fixture(scope="module")
def triply_results():
    return suite_triply()


def _assert_all(results):
    failed = print_report(results)
    assert failed == 0, f"{failed} acceptance checks failed"


def _select(results, *needles):
    picked = [r for r in results if any(n in r.name for n in needles)]
    assert picked, f"no checks matched {needles}"
    return picked


def test_criterion_1_disk_degeneration():
    _assert_all(suite_disk())


def test_criterion_2_annulus_oracle(annulus_results):
    _assert_all(_select(annulus_results, "harmonic measure", "tau_11",
                        "two-sided product", "windings (1, 1)"))


def test_criterion_3_cross_formula_consistency(triply_results):
    _assert_all(_select(triply_results, "slit-form builds", "omega ratio",
                        "exchange identity", "shift identity",
                        "first-kind-integral relation"))


def test_criterion_4_boundary_behavior(annulus_results, triply_results):
    _assert_all(_select(annulus_results, "random admissible", "windings equal"))
    _assert_all(_select(triply_results, "random admissible", "windings equal"))


def test_criterion_5_boundary_data_construction(annulus_results, triply_results):
    _assert_all(_select(annulus_results, "boundary-data", "permuted"))
    _assert_all(_select(triply_results, "boundary-data", "permuted"))


def test_criterion_6_semigroup(triply_results):
    _assert_all(_select(triply_results, "semigroup"))


@pytest.mark.slow
def test_criterion_7_disconnected_ball_soft():
    results = suite_witness()
    print_report(results)
    by_name = {r.name: r for r in results}
    negative = by_name["witness: annulus negative control (no disconnection)"]
    assert negative.passed
    positive = [r for r in results if "disconnected ball" in r.name][0]
    if positive.passed:
        assert by_name["witness: closure gap certificate"].passed
    else:
        # soft outcome: the sweep must report the attained proximity proxies
        assert "beta1" in positive.detail and "beta2" in positive.detail
