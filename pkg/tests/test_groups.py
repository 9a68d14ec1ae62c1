"""Group construction, subgroup lattices, quotients, Sylow subgroups.

The subgroup oracle enumerates every multiplication-closed subset by brute
force, independent of the cyclic-extension algorithm in the library.
"""

from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from burnside.errors import NotSubgroup, OrderCapExceeded
from burnside.groups import (
    builtin_group,
    double_cosets,
    group_from_cayley,
    group_from_permutations,
    p_residual,
    quotient,
    stabilizer_pair,
    sylow_subgroup,
)

BUILTIN_ORDERS = {
    "C2": 2, "C3": 3, "C4": 4, "C2xC2": 4, "C6": 6,
    "S3": 6, "D4": 8, "Q8": 8, "A4": 12,
}


def brute_subgroups(g) -> set:
    """All subgroups as frozensets, by closing every subset of a generating pool."""
    found = {frozenset([g.identity])}
    frontier = [frozenset([g.identity])]
    while frontier:
        base = frontier.pop()
        for x in g.elements():
            if x in base:
                continue
            new = frozenset(g.generated(tuple(base) + (x,)))
            if new not in found:
                found.add(new)
                frontier.append(new)
    return found


def brute_is_normal(g, members) -> bool:
    s = set(members)
    return all(g.conj(x, m) in s for x in g.elements() for m in members)


@pytest.mark.parametrize("name,order", sorted(BUILTIN_ORDERS.items()))
def test_builtin_orders(name, order):
    g = builtin_group(name)
    assert g.order == order
    assert g.name == name


def test_unknown_builtin():
    with pytest.raises(ValueError):
        builtin_group("NOPE")


@pytest.mark.parametrize("name", sorted(BUILTIN_ORDERS))
def test_lattice_matches_brute_force(name):
    g = builtin_group(name)
    subs = g.lattice
    expected = brute_subgroups(g)
    assert {subs.member_set(i) for i in range(len(subs))} == expected
    assert len(subs) == len(expected)


# class counts: orbit counting under conjugation on the brute-force lattice
@pytest.mark.parametrize("name", sorted(BUILTIN_ORDERS))
def test_conjugacy_classes_match_brute_force(name):
    g = builtin_group(name)
    subs = g.lattice
    orbits = set()
    for members in brute_subgroups(g):
        orbit = frozenset(
            frozenset(g.conj(x, m) for m in members) for x in g.elements()
        )
        orbits.add(orbit)
    assert len(subs.classes) == len(orbits)
    # representative of each class is the minimum id in its orbit
    for i in range(len(subs)):
        orbit_ids = {subs.conj_sub[x][i] for x in g.elements()}
        assert subs.class_rep[i] == min(orbit_ids)


def test_canonical_subgroup_order():
    subs = builtin_group("S3").lattice
    sizes = [subs.subgroup(i).order for i in range(len(subs))]
    assert sizes == sorted(sizes)
    assert sizes == [1, 2, 2, 2, 3, 6]
    assert subs.trivial().order == 1
    assert subs.top().order == 6


@pytest.mark.parametrize("name", sorted(BUILTIN_ORDERS))
def test_normality_matches_brute_force(name):
    g = builtin_group(name)
    subs = g.lattice
    top = subs.top().id
    normal = set(subs.normal_ids_in(top))
    for i in range(len(subs)):
        assert (i in normal) == brute_is_normal(g, subs.members(i))


def test_meet_join():
    g = builtin_group("D4")
    subs = g.lattice
    for i in range(len(subs)):
        for j in range(len(subs)):
            meet = subs.member_set(subs.meet_id(i, j))
            assert meet == subs.member_set(i) & subs.member_set(j)
            join = subs.member_set(subs.join_id(i, j))
            assert join >= subs.member_set(i) | subs.member_set(j)
            # join is the smallest such subgroup
            for k in range(len(subs)):
                if subs.member_set(k) >= subs.member_set(i) | subs.member_set(j):
                    assert subs.leq[subs.join_id(i, j)][k]


def test_group_from_permutations():
    s3 = group_from_permutations(3, [(1, 0, 2), (1, 2, 0)], "S3")
    assert s3.order == 6
    assert not s3.is_abelian()
    with pytest.raises(OrderCapExceeded):
        group_from_permutations(8, [(1, 2, 3, 4, 5, 6, 7, 0)], "C8", cap=4)


def test_group_from_cayley_rejects_garbage():
    from burnside.errors import NoInverse, NotAssociative

    with pytest.raises((NotAssociative, NoInverse, ValueError)):
        group_from_cayley([[0, 1], [1, 1]], "bad")


def test_element_orders():
    q8 = builtin_group("Q8")
    orders = sorted(q8.element_order(x) for x in q8.elements())
    assert orders == [1, 2, 4, 4, 4, 4, 4, 4]


@pytest.mark.parametrize("name", sorted(BUILTIN_ORDERS))
def test_conjugation_is_automorphism(name):
    g = builtin_group(name)
    for x in list(g.elements())[:4]:
        for a in g.elements():
            for b in g.elements():
                assert g.conj(x, g.mul(a, b)) == g.mul(g.conj(x, a), g.conj(x, b))


def test_quotient_structure():
    g = builtin_group("S3")
    subs = g.lattice
    c3 = next(i for i in range(len(subs)) if subs.subgroup(i).order == 3)
    q = quotient(g, subs.subgroup(c3), subs.trivial())
    assert q.order == 3
    assert q.as_group.order == 3
    # quotient by a non-normal subgroup of the numerator is rejected
    c2 = next(i for i in range(len(subs)) if subs.subgroup(i).order == 2)
    top = subs.top()
    with pytest.raises(NotSubgroup):
        quotient(g, top, subs.subgroup(c2))


def test_weyl_of_trivial_pair_is_full_quotient():
    g = builtin_group("S3")
    subs = g.lattice
    n, w = stabilizer_pair(
        g, subs.top(), subs.trivial(), None, lambda gg, s: s
    )
    assert n.order == 6
    assert w.order == 6


def test_stabilizer_pair_respects_action():
    # pair (C2, marker) where conjugating moves the marker: stabilizer = N(C2)
    g = builtin_group("S3")
    subs = g.lattice
    c2 = next(i for i in range(len(subs)) if subs.subgroup(i).order == 2)
    n, w = stabilizer_pair(
        g,
        subs.top(),
        subs.subgroup(c2),
        c2,
        lambda gg, s: subs.conj_sub[gg][s],
    )
    members = set(n.members)
    assert members == {
        x for x in g.elements() if subs.conj_sub[x][c2] == c2
    }
    assert w.order == n.order // 2


@pytest.mark.parametrize("name,p,expected", [
    ("S3", 2, 2), ("S3", 3, 3), ("A4", 2, 4), ("A4", 3, 3),
    ("D4", 2, 8), ("Q8", 3, 1), ("C6", 2, 2), ("C6", 3, 3),
])
def test_sylow_orders(name, p, expected):
    g = builtin_group(name)
    subs = g.lattice
    w = quotient(g, subs.top(), subs.trivial())
    syl = sylow_subgroup(w, p)
    assert syl.order == expected


def test_sylow_inf_is_whole_group():
    g = builtin_group("S3")
    w = quotient(g, g.lattice.top(), g.lattice.trivial())
    assert sylow_subgroup(w, "inf").order == 6


@pytest.mark.parametrize("name,p,expected_order", [
    ("S3", 2, 3),   # O^2(S3) = C3
    ("S3", 3, 6),   # no proper normal subgroup has 3-power index
    ("A4", 2, 12),  # A4/V = C3 is not a 2-group, so O^2 = A4
    ("A4", 3, 4),   # O^3(A4) = V
    ("C6", 2, 3),
    ("C6", 3, 2),
])
def test_p_residual(name, p, expected_order):
    g = builtin_group(name)
    k = g.lattice.top()
    r = p_residual(g, k, p)
    assert r.order == expected_order
    # the quotient K/O^p really is a p-group
    q = quotient(g, k, r)
    assert q.order == k.order // expected_order


def test_double_cosets_partition():
    g = builtin_group("S3")
    subs = g.lattice
    h = subs.top()
    c2 = next(subs.subgroup(i) for i in range(len(subs)) if subs.subgroup(i).order == 2)
    reps = double_cosets(g, h, c2, c2)
    seen = set()
    for r in reps:
        coset = {g.mul(g.mul(a, r), b) for a in c2.members for b in c2.members}
        assert not (coset & seen)
        seen |= coset
    assert seen == set(h.members)


@settings(deadline=None, max_examples=20)
@given(st.sampled_from(sorted(BUILTIN_ORDERS)), st.data())
def test_generated_is_smallest_closed_set(name, data):
    g = builtin_group(name)
    seed = data.draw(
        st.lists(st.integers(0, g.order - 1), min_size=1, max_size=3)
    )
    got = set(g.generated(tuple(seed)))
    assert set(seed) <= got
    assert g.identity in got
    for a in got:
        for b in got:
            assert g.mul(a, b) in got
    # minimality: any closed superset of the seed contains it
    for members in brute_subgroups(g):
        if set(seed) <= members:
            assert got <= members
