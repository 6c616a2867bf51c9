"""Acceptance criteria at full scale; each test prints one PASS/FAIL line.

Run alone with ``pytest -m acceptance -s``.
"""

import pytest

from conftest import ACCEPTANCE_LINES

from permlike.suites import (
    closed_form_suite,
    cyclic_theorem_suite,
    cyclotomic_suite,
    dichotomy_suite,
    mutation_suite,
    noncyclic_theorem_suite,
    oracle_suite,
    similarity_suite,
    valuation_suite,
)

pytestmark = pytest.mark.acceptance


def _run(label, suite, limit):
    res = suite()
    within = res.seconds < limit
    status = "PASS" if res.passed and within else "FAIL"
    extra = f", {res.detail}" if res.detail else ""
    line = f"[{status}] {label}: {res.checked} checks in {res.seconds:.2f}s (limit {limit:g}s{extra})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert res.passed, res.detail
    assert within, f"{res.seconds:.1f}s exceeds {limit}s"


def test_criterion_1_valuation():
    _run("1 valuation", lambda: valuation_suite(12), 5)


def test_criterion_2_cyclotomic_identity():
    _run("2 cyclotomic identity", lambda: cyclotomic_suite(12), 5)


def test_criterion_3_closed_forms():
    _run("3 char-poly closed forms", lambda: closed_form_suite((4, 5, 6)), 30)


def test_criterion_4_dichotomy():
    _run("4 dihedral/quaternion dichotomy", lambda: dichotomy_suite((3, 4, 5, 6)), 10)


def test_criterion_5_cyclic_quotient():
    _run("5 cyclic quotient", lambda: cyclic_theorem_suite((3, 4, 5, 6), count=100, seed=1, dense_max=4), 300)


def test_criterion_6_noncyclic_quotient():
    _run("6 non-cyclic quotient", lambda: noncyclic_theorem_suite((3, 4, 5, 6), count=100, seed=2, dense_max=4), 300)


def test_criterion_7_oracle_independence():
    _run("7 oracle independence", lambda: oracle_suite((1, 2, 3, 4), count=100, seeds=(1, 2)), 600)


def test_criterion_8_similarity_vs_brute_force():
    _run("8 similarity vs brute force", lambda: similarity_suite((1, 2, 3, 4, 5), random_count=1000, seed=4), 60)


def test_criterion_9_mutation_robustness():
    _run("9 mutation robustness", lambda: mutation_suite((3, 4), count=100, seed=5), 60)
