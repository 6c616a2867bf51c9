import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from permlike.cyclotomic import CycloPoly, RootOfUnity
from permlike.engine import GroupSpec, permutation_like
from permlike.monomial import MonomialMatrix, char_factors
from permlike.oracle import (
    DenseMatrix,
    brute_char_poly,
    dense_diagonal,
    dense_expand,
    expand_factors,
    fourier_action,
    vandermonde_conjugate,
    vandermonde_inverse,
    vandermonde_matrix,
    verify_certificate,
)
from permlike.pipeline import build_presentation, torsion_choices
from permlike.residue import SubgroupDescriptor, all_subgroups
from permlike.synth import PermBasisCertificate, synthesize
from permlike.suites import mutate


def zeros(n):
    return [0] * (1 << n)


def random_monomial(rng, n, level):
    d = 1 << n
    perm = list(range(d))
    rng.shuffle(perm)
    return MonomialMatrix(n, level, perm, [rng.randrange(1 << level) for _ in range(d)])


def test_dense_expand_examples():
    for n in range(1, 4):
        d = 1 << n
        assert dense_expand(MonomialMatrix.identity(n)) == DenseMatrix.identity(d, n)
        assert dense_expand(MonomialMatrix.cycle(n)) == dense_diagonal([j for j in range(d)], n)


def test_dense_expand_is_diagonal_conjugation():
    rng = random.Random(0)
    for n in range(1, 4):
        level = n + 1
        for _ in range(10):
            m = random_monomial(rng, n, level)
            t = [rng.randrange(1 << level) for _ in range(1 << n)]
            dt = dense_diagonal(t, level)
            dt_inv = dense_diagonal([-x for x in t], level)
            assert dense_expand(m, t) == dt_inv @ dense_expand(m) @ dt


def test_vandermonde_inverse():
    for n in range(1, 5):
        t, ti = vandermonde_matrix(n, n), vandermonde_inverse(n, n)
        assert t @ ti == DenseMatrix.identity(1 << n, n)


def test_brute_char_poly_examples():
    x = CycloPoly.x(2)
    one = CycloPoly.constant(1, 2)
    assert brute_char_poly(DenseMatrix.identity(4, 2)) == CycloPoly.product([x - one] * 4, 2)
    assert brute_char_poly(dense_expand(MonomialMatrix.cycle(2))) == CycloPoly(2, {4: 1, 0: -1})
    ac = MonomialMatrix.from_relation(-1, zeros(2), 2) * MonomialMatrix.cycle(2)
    x2m1 = CycloPoly(2, {2: 1, 0: -1})
    assert brute_char_poly(dense_expand(ac)) == x2m1 * x2m1
    with pytest.raises(ValueError):
        brute_char_poly(DenseMatrix.identity(32, 1))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2 ** 32))
def test_char_factors_match_brute_force(n, seed):
    rng = random.Random(seed)
    level = n + rng.randrange(2)
    m = random_monomial(rng, n, level)
    assert expand_factors(char_factors(m), level) == brute_char_poly(dense_expand(m))


def test_vandermonde_conjugate_examples():
    for n in range(1, 5):
        d = 1 << n
        c = vandermonde_conjugate(dense_expand(MonomialMatrix.cycle(n)), n)
        assert c.is_permutation() == [(k + 1) % d for k in range(d)]
        i = vandermonde_conjugate(DenseMatrix.identity(d, n), n)
        assert i.is_permutation() == list(range(d))
    n = 4
    for r in (3, 5, 7, 9, 15):
        a = MonomialMatrix.from_relation(r, zeros(n), n)
        got = vandermonde_conjugate(dense_expand(a), n).is_permutation()
        assert got == [pow(r, -1, 16) * k % 16 for k in range(16)]
        assert fourier_action(a) == got


def test_vandermonde_conjugate_matches_dense_product():
    rng = random.Random(1)
    for n in range(1, 4):
        m = dense_expand(random_monomial(rng, n, n + 1))
        level = m.level
        direct = vandermonde_inverse(n, level) @ m @ vandermonde_matrix(n, level)
        assert vandermonde_conjugate(m, n) == direct


def test_fourier_action_rejects_non_cycle_form():
    c = zeros(3)
    c[1] = 1
    assert fourier_action(MonomialMatrix.from_relation(3, c, 3)) is None
    assert fourier_action(MonomialMatrix.cycle(3, power=5)) == [(k + 5) % 8 for k in range(8)]


def test_verify_dihedral_n3_both_tiers():
    spec = GroupSpec.build(3, 3, [("A", -1, zeros(3))])
    an = permutation_like(spec)
    cert = synthesize(an)
    report = verify_certificate(an, cert, "both")
    assert report.passed
    assert len([r for r in report.results if r.tier == "fast"]) == 16
    assert len([r for r in report.results if r.tier == "dense"]) == 16


def test_verify_trivial_group():
    spec = GroupSpec(3, 3, ())
    cert = synthesize(spec)
    assert cert.rescale == zeros(3)
    assert verify_certificate(spec, cert, "both").passed


def test_corrupted_rescale_rejected():
    spec = GroupSpec.build(3, 3, [("A", -1, zeros(3))])
    an = permutation_like(spec)
    cert = synthesize(an)
    bad = PermBasisCertificate.from_dict(cert.to_dict())
    bad.rescale[3] = (bad.rescale[3] + 1) % 8
    for tier in ("fast", "dense"):
        report = verify_certificate(an, bad, tier)
        assert not report.passed
        assert report.first_failure.word
    with pytest.raises(Exception):
        report.raise_on_failure()


def test_fast_and_dense_agree():
    for n in range(1, 5):
        for h in all_subgroups(n):
            for torsion in torsion_choices(h):
                an = permutation_like(build_presentation(h, torsion))
                if not an.permutation_like:
                    continue
                cert = synthesize(an)
                report = verify_certificate(an, cert, "both")
                assert report.passed, (str(h), torsion, report.first_failure)
                assert report.fast_perms == report.dense_perms


def test_mutations_detected():
    rng = random.Random(9)
    spec = build_presentation(SubgroupDescriptor("product", 4, 2), "A:tau=0,B:dihedral")
    an = permutation_like(spec)
    cert = synthesize(an)
    for _ in range(30):
        bad, what = mutate(cert, rng)
        assert not verify_certificate(an, bad, "fast").passed, what
