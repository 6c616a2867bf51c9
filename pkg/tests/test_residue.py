from math import comb

import pytest
from hypothesis import given, strategies as st

from permlike.residue import (
    all_subgroups,
    brute_order,
    closure,
    geom_sum,
    geom_sum_valuation,
    orbit_pairing,
    orbits,
    subgroup_classify,
    unit_decompose,
    v2,
)


def test_v2_values():
    assert v2(12) == 2
    assert v2(comb(8, 2)) == 2
    for n in range(1, 10):
        assert v2(1 << (n - 1)) == n - 1
    with pytest.raises(ValueError):
        v2(0)


def test_unit_decompose_examples():
    assert unit_decompose(5, 5).order == 8
    u = unit_decompose(7, 4)
    assert (u.sign, u.b, u.v, u.order) == (-1, 3, 1, 2)
    assert unit_decompose(1, 6).order == 1
    u = unit_decompose(13, 4)
    assert (u.sign, u.b, u.v, u.order) == (1, 2, 3, 4)


def test_unit_order_matches_brute_force():
    for n in range(1, 13):
        for r in range(1, 1 << n, 2):
            assert unit_decompose(r, n).order == brute_order(r, n)


def test_subgroup_classify_examples():
    d = subgroup_classify([15], 5)
    assert (d.tag, d.a) == ("cyclic_minus", 1)
    d = subgroup_classify([17, 31], 5)
    assert (d.tag, d.a) == ("product", 1)
    assert d.elements() == frozenset({1, 17, 15, 31})
    assert subgroup_classify([1], 5).tag == "trivial"
    # 3 = -1 + 2^2 mod 8
    d = subgroup_classify([3], 3)
    assert (d.tag, d.a) == ("cyclic_minus", 1)


def test_all_subgroups_n4():
    assert [str(d) for d in all_subgroups(4)] == [
        "1", "<-1>", "<1+2^3>", "<-1+2^3>", "<1+2^2>", "<-1+2^2>",
        "<-1>x<1+2^3>", "<-1>x<1+2^2>",
    ]


def test_every_subgroup_is_classified():
    for n in range(1, 9):
        seen = set()
        units = range(1, 1 << n, 2)
        for x in units:
            for y in units:
                s = closure([x, y], n)
                if s in seen:
                    continue
                seen.add(s)
                assert subgroup_classify([x, y], n).elements() == s
        assert len(seen) == len(all_subgroups(n))


def test_geom_sum_examples():
    assert geom_sum(9, 4, 5) == 20
    assert geom_sum(1, 5, 5) == 5
    assert geom_sum(31, 2, 5) == 0
    assert geom_sum(5, 4, 4) == 12
    assert geom_sum(7, 2, 3) == 0


def test_geom_sum_valuation_examples():
    assert geom_sum_valuation(unit_decompose(9, 5)) == 2
    assert geom_sum_valuation(unit_decompose(7, 5)) == 4
    assert geom_sum_valuation(unit_decompose(31, 5)) is None


def test_geom_sum_valuation_matches_integer_sum():
    for n in range(2, 13):
        for r in range(3, 1 << n, 2):
            u = unit_decompose(r, n)
            total = sum(r ** i for i in range(u.order))
            closed = geom_sum_valuation(u)
            if closed is None:
                assert total % (1 << n) == 0
            else:
                assert v2(total) == closed


def test_orbits_examples():
    part = orbits(3, 3, "units")
    assert sorted(o.elements for o in part) == [(1, 3), (5, 7)]
    part = orbits(5, 4, "units")
    assert [o.elements for o in part] == [(1, 5, 9, 13), (3, 15, 11, 7)]
    part = orbits(5, 4, "all")
    got = sorted(tuple(sorted(o.elements)) for o in part)
    assert got == sorted([(0,), (8,), (4,), (12,), (1, 5, 9, 13), (3, 7, 11, 15), (2, 10), (6, 14)])
    assert all(len(o) == 1 for o in orbits(1, 5, "all"))


@given(st.integers(1, 10), st.integers(0, 1 << 20))
def test_orbit_sizes_divide_order(n, seed):
    r = (2 * seed + 1) % (1 << n)
    u = unit_decompose(r, n)
    part = orbits(r, n, "all")
    assert sum(len(o) for o in part) == 1 << n
    assert all(u.order % len(o) == 0 for o in part)
    assert all(o.rep == min(o.elements) for o in part)


def test_orbit_pairing_examples():
    p = orbit_pairing(5, 4)
    got = [(g.elements, h.elements) for g, h in p.pairs]
    assert got == [((1, 5, 9, 13), (15, 11, 7, 3)), ((2, 10), (14, 6)), ((4,), (12,))]
    assert p.fixed == (0, 8)
    p = orbit_pairing(9, 4)
    got = [(g.elements, h.elements) for g, h in p.pairs]
    assert got == [((1, 9), (15, 7)), ((2,), (14,)), ((3, 11), (13, 5)), ((4,), (12,)), ((6,), (10,))]
    with pytest.raises(ValueError):
        orbit_pairing(3, 3)


def test_orbit_pairing_is_negation():
    for n in range(3, 10):
        for a in range(1, n - 1):
            r = 1 + (1 << (n - a))
            p = orbit_pairing(r, n)
            assert p.self_paired == ()
            mod = 1 << n
            for g, h in p.pairs:
                assert h.elements == tuple((-x) % mod for x in g.elements)
            covered = {x for g, h in p.pairs for x in g.elements + h.elements}
            assert covered == set(range(mod)) - {0, mod >> 1}
