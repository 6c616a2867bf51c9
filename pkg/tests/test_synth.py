import random

import pytest
from hypothesis import given, settings, strategies as st

from permlike.engine import GroupSpec, parse_word, evaluate_word, permutation_like
from permlike.errors import SynthesisError
from permlike.monomial import MonomialMatrix, is_permutation_matrix, relation_of
from permlike.pipeline import _seeded, build_presentation, torsion_choices
from permlike.residue import SubgroupDescriptor, all_subgroups, unit_decompose
from permlike.synth import (
    PermBasisCertificate,
    cyclic_driver,
    dihedral_basis,
    fourier_permutations,
    noncyclic_driver,
    rescale_orbit,
    restrict_v2,
    synthesize,
    vstar_basis,
)
from permlike.cyclotomic import RootOfUnity


def zeros(n):
    return [0] * (1 << n)


def cycle_times_perm(m: MonomialMatrix):
    """``s`` with ``m = C^s * P`` for a permutation matrix ``P``, else None."""
    unit = m.unit
    mod = 1 << m.level
    c0 = m.coeffs[m.perm.index(1)] if m.dim > 1 else 0
    if c0 % unit:
        return None
    s = c0 // unit
    # (C^s P) e_j = lambda^(s * P(j)) e_P(j)
    if all((m.coeffs[j] - s * unit * m.perm[j]) % mod == 0 for j in range(m.dim)):
        return s % m.dim
    return None


def assert_all_elements_permutation_like(analysis, cert):
    for word, m in analysis.elements:
        assert cycle_times_perm(m.rescaled(cert.rescale)) is not None, word


def test_rescale_orbit_examples():
    n = 4
    a = MonomialMatrix.from_relation(5, zeros(n), n)
    part, omega = rescale_orbit(a, (1, 5, 9, 13))
    assert set(part.values()) == {0} and omega.is_one()
    c = zeros(n)
    c[8] = 3
    a = MonomialMatrix.from_relation(5, c, n)
    part, omega = rescale_orbit(a, (8,))
    assert part == {8: 0} and omega == RootOfUnity(4, 3)
    c = zeros(n)
    c[1], c[5] = 2, 14
    a = MonomialMatrix.from_relation(5, c, n)
    part, omega = rescale_orbit(a, (1, 5, 9, 13))
    assert omega.is_one()
    block = {j: part[j] for j in (1, 5, 9, 13)}
    assert block == {1: 0, 5: 2, 9: 0, 13: 0}


def test_vstar_basis_examples():
    n = 3
    c = zeros(n)
    c[1], c[3] = 5, 3
    a = MonomialMatrix.from_relation(3, c, n)
    t = vstar_basis(a)
    assert sorted(t) == [1, 3, 5, 7]
    full = [t.get(j, 0) for j in range(8)]
    r = a.rescaled(full)
    assert all(r.coeffs[j] == 0 for j in (1, 3, 5, 7))
    a = MonomialMatrix.from_relation(5, zeros(4), 4)
    assert sorted(vstar_basis(a)) == list(range(1, 16, 2))
    assert vstar_basis(MonomialMatrix.identity(3)) == {1: 0, 3: 0, 5: 0, 7: 0}
    c = zeros(n)
    c[1] = 1
    with pytest.raises(SynthesisError):
        vstar_basis(MonomialMatrix.from_relation(3, c, n))


def test_restrict_v2():
    n = 4
    c2 = restrict_v2(MonomialMatrix.cycle(n))
    assert c2.order() == 1 << (n - 1)
    assert c2 == MonomialMatrix.cycle(n - 1, n)
    assert relation_of(restrict_v2(MonomialMatrix.from_relation(9, zeros(n), n))).value == 1
    assert relation_of(restrict_v2(MonomialMatrix.from_relation(7, zeros(n), n))).value == 7


def test_dihedral_basis_cases():
    n = 2
    a = MonomialMatrix.from_relation(-1, zeros(n), n)
    t, case = dihedral_basis(a)
    assert case == "dihedral-i" and t == {0: 0, 2: 0, 1: 0, 3: 0}
    c = zeros(3)
    c[4] = 4
    t, case = dihedral_basis(MonomialMatrix.from_relation(-1, c, 3))
    assert t is None and case == "dihedral-ii"
    q = build_presentation(SubgroupDescriptor("minus_one", 3), "quaternion-").generator("A")
    with pytest.raises(SynthesisError):
        dihedral_basis(q)


def test_cyclic_driver_examples():
    spec = GroupSpec.build(3, 3, [("A", 3, zeros(3))])
    cert = cyclic_driver(spec)
    assert cert.generator_permutations["A"] == [3 * k % 8 for k in range(8)]
    assert cert.generator_permutations["C"] == [(k + 1) % 8 for k in range(8)]
    spec = build_presentation(SubgroupDescriptor("cyclic_plus", 4, 2), "tau=0")
    cert = cyclic_driver(spec)
    assert [s["case"] for s in cert.trace] == ["induction", "a=1-plus"]
    cert = cyclic_driver(GroupSpec(4, 4, ()))
    assert cert.rescale == zeros(4)
    assert cert.generator_permutations == {"C": [(k + 1) % 16 for k in range(16)]}


def test_dihedral_case_ii_substitution():
    spec = build_presentation(SubgroupDescriptor("minus_one", 4), "dihedral-ii")
    cert = cyclic_driver(spec)
    assert cert.substitutions == ["A:=A*C"]
    assert cert.generator_words["A"] == "A*C"


def test_noncyclic_driver_examples():
    spec = GroupSpec.build(3, 3, [("A", 5, zeros(3)), ("B", -1, zeros(3))])
    cert = noncyclic_driver(spec)
    assert cert.generator_permutations["B"] == [(-k) % 8 for k in range(8)]
    spec = GroupSpec.build(4, 4, [("A", 9, zeros(4)), ("B", -1, zeros(4))])
    cert = noncyclic_driver(spec)
    assert cert.pairing == [[1, 15], [2, 14], [3, 13], [4, 12], [6, 10]]
    assert "a=1-plus" in [s["case"] for s in cert.trace]
    spec = GroupSpec.build(4, 4, [("A", 5, zeros(4)), ("B", -1, zeros(4))])
    cert = noncyclic_driver(spec)
    assert cert.pairing == [[1, 15], [2, 14], [4, 12]]
    with pytest.raises(SynthesisError):
        noncyclic_driver(GroupSpec.build(4, 4, [("A", 5, zeros(4))]))


def test_fourier_permutations():
    n = 4
    a = MonomialMatrix.from_relation(5, zeros(n), n)
    perms = fourier_permutations({"A": a, "C": MonomialMatrix.cycle(n), "I": MonomialMatrix.identity(n)}, zeros(n))
    assert perms["A"] == [13 * k % 16 for k in range(16)]
    assert perms["C"] == [(k + 1) % 16 for k in range(16)]
    assert perms["I"] == list(range(16))
    with pytest.raises(SynthesisError):
        c = zeros(n)
        c[3] = 1
        fourier_permutations({"A": MonomialMatrix.from_relation(5, c, n)}, zeros(n))


def test_quaternion_never_synthesized():
    for torsion in ("quaternion-", "quaternion+"):
        spec = build_presentation(SubgroupDescriptor("minus_one", 4), torsion)
        with pytest.raises(SynthesisError):
            synthesize(spec)


def _canonical_cases(ns):
    for n in ns:
        for h in all_subgroups(n):
            for torsion in torsion_choices(h):
                yield h, torsion, build_presentation(h, torsion)


def test_every_element_becomes_permutation():
    for h, torsion, spec in _canonical_cases(range(1, 6)):
        an = permutation_like(spec)
        if not an.permutation_like:
            continue
        cert = synthesize(an)
        assert_all_elements_permutation_like(an, cert)
        t = cert.rescale
        d = 1 << spec.n
        assert len(t) == d and t[0] == 0
        if d > 1:
            assert t[d >> 1] == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(0, 10 ** 6))
def test_seeded_twists_certify(n, seed):
    hs = [h for h in all_subgroups(n) if h.tag != "trivial"]
    h = hs[seed % len(hs)]
    _, spec = _seeded(h, seed, 3)
    an = permutation_like(spec)
    if not an.permutation_like:
        return
    cert = synthesize(an)
    assert_all_elements_permutation_like(an, cert)
    for name, text in cert.generator_words.items():
        m = evaluate_word(spec, parse_word(text))
        assert is_permutation_matrix(m.rescaled(cert.rescale)) or name == "C"


def test_certificate_image_relations():
    for h, torsion, spec in _canonical_cases([4]):
        an = permutation_like(spec)
        if not an.permutation_like:
            continue
        cert = synthesize(an)
        d = 1 << spec.n
        perms = cert.generator_permutations
        c = perms["C"]
        for name, p in perms.items():
            if name == "C":
                continue
            r = relation_of(evaluate_word(spec, parse_word(cert.generator_words[name]))).value
            order = 1
            q = list(p)
            while q != list(range(d)):
                q = [p[x] for x in q]
                order += 1
            assert order == unit_decompose(r, spec.n).order
            inv = [0] * d
            for i, x in enumerate(p):
                inv[x] = i
            conj = [inv[c[p[k]]] for k in range(d)]
            # P^-1 C P = C^r on the Fourier indices
            assert conj == [(k + r) % d for k in range(d)]


def test_certificate_json_roundtrip():
    spec = GroupSpec.build(3, 3, [("A", 5, zeros(3)), ("B", -1, zeros(3))])
    cert = noncyclic_driver(spec)
    assert PermBasisCertificate.from_json(cert.to_json()) == cert
