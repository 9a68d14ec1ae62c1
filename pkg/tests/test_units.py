"""Unit groups of Ω(G, M_Λ).

Oracle: α∘φ embeds the ring into Z^rank, so x is a unit exactly when its
ghost vector is ±1 everywhere and the rational preimage of that sign
vector is integral.  The oracle below inverts the ghost matrix once and
filters all 2^rank sign vectors by integrality, with no reference to the
γ-homomorphism criterion the implementation uses.
"""

import itertools
from fractions import Fraction
from math import lcm

import pytest

from burnside.errors import NotAbelian, RankCapExceeded
from burnside.ghost import alpha_phi
from burnside.rings import basis_element, basis_system, one
from burnside.units import abelian_conormal_generators, lifts, theta, unit_group


def inverse(mat):
    n = len(mat)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        scale = 1 / aug[col][col]
        aug[col] = [v * scale for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def unit_signs_oracle(bs):
    """All ±1 ghost vectors whose rational preimage is integral."""
    ghost = [list(alpha_phi(basis_element(bs, i)).entries) for i in range(bs.rank)]
    inv = inverse([list(col) for col in zip(*ghost)])
    den = lcm(*(v.denominator for row in inv for v in row), 1)
    scaled = [[int(v * den) for v in row] for row in inv]
    out = []
    for signs in itertools.product((1, -1), repeat=bs.rank):
        if all(
            sum(m * s for m, s in zip(row, signs)) % den == 0 for row in scaled
        ):
            out.append(signs)
    return out


ORDERS = {
    ("C2", "trivial"): 4, ("C3", "trivial"): 2, ("C4", "trivial"): 4,
    ("C2xC2", "trivial"): 16, ("S3", "trivial"): 8,
    ("C2", "conormal"): 8, ("C3", "conormal"): 4, ("C4", "conormal"): 32,
    ("C2xC2", "conormal"): 2048, ("C6", "conormal"): 64,
    ("C2", "slice"): 8, ("C3", "slice"): 2, ("C4", "slice"): 8,
    ("C2xC2", "slice"): 128, ("S3", "slice"): 64,
}


@pytest.mark.parametrize("gname,kind", sorted(ORDERS))
def test_unit_group_matches_integrality_oracle(gname, kind, make_functor):
    bs = basis_system(make_functor(gname, kind))
    ug = unit_group(bs)
    assert ug.order == ORDERS[(gname, kind)]
    assert ug.order == 2**ug.rank
    assert sorted(ug.signs) == sorted(unit_signs_oracle(bs))


@pytest.mark.parametrize("gname,kind", [
    ("S3", "trivial"), ("C4", "conormal"), ("C6", "conormal"), ("S3", "slice"),
])
def test_units_square_to_one(gname, kind, make_functor):
    bs = basis_system(make_functor(gname, kind))
    ug = unit_group(bs)
    identity = one(bs)
    for u, signs in zip(ug.units, ug.signs):
        assert all(c.denominator == 1 for c in u.coeffs.values())
        assert (u * u).coeffs == identity.coeffs
        assert tuple(alpha_phi(u).entries) == signs
    assert tuple([1] * bs.rank) in ug.signs
    assert tuple([-1] * bs.rank) in ug.signs
    assert (-identity).coeffs in [u.coeffs for u in ug.units]


def test_generator_span_is_whole_group(make_functor):
    bs = basis_system(make_functor("C4", "conormal"))
    ug = unit_group(bs)
    assert len(ug.generators) == ug.rank
    masks = []
    for u in ug.generators:
        signs = alpha_phi(u).entries
        masks.append(sum(1 << i for i, s in enumerate(signs) if s == -1))
    span = {0}
    for m in masks:
        span |= {v ^ m for v in span}
    assert len(span) == ug.order


def test_lift_known_vectors(make_functor):
    bs = basis_system(make_functor("S3", "trivial"))
    ok, w = lifts([1] * bs.rank, bs)
    assert ok and w.coeffs == one(bs).coeffs
    ok, w = lifts([-1] * bs.rank, bs)
    assert ok and w.coeffs == (-one(bs)).coeffs
    # marks of [S3/C3] are (2, 0, 2, 0); 1 - [S3/C3] has signs (-1, 1, -1, 1)
    pos = next(
        i for i, (kid, _) in enumerate(bs.reps)
        if bs.subs.subgroup(kid).order == 3
    )
    ok, w = lifts((-1, 1, -1, 1), bs)
    assert ok and w.coeffs == (one(bs) - basis_element(bs, pos)).coeffs
    ok, w = lifts((-1, 1, 1, 1), bs)
    assert not ok and w is None


def test_lift_input_validation(make_functor):
    bs = basis_system(make_functor("C2", "trivial"))
    with pytest.raises(ValueError):
        lifts([1], bs)
    with pytest.raises(ValueError):
        lifts([1, 2], bs)


THETA = {"C2": 1, "C3": 0, "C4": 2, "C2xC2": 6, "C6": 2}


@pytest.mark.parametrize("gname", sorted(THETA))
def test_theta_counts_index_two_pairs(gname, make_group):
    g = make_group(gname)
    subs = g.lattice
    pairs = [
        (hid, uid)
        for hid in range(len(subs))
        if 2 * subs.subgroup(hid).order == g.order
        for uid in range(len(subs))
        if subs.leq[uid][hid]
    ]
    assert theta(g) == THETA[gname] == len(pairs)


@pytest.mark.parametrize("gname", sorted(THETA))
def test_conormal_generator_family_spans_proper_subgroup(gname, make_functor):
    f = make_functor(gname, "conormal")
    bs = basis_system(f)
    gens = abelian_conormal_generators(bs.group, f)
    assert len(gens) == theta(bs.group) + 1
    identity = one(bs)
    masks = set()
    span = {0}
    for u in gens:
        signs = alpha_phi(u).entries
        assert all(s in (1, -1) for s in signs)
        assert all(c.denominator == 1 for c in u.coeffs.values())
        assert (u * u).coeffs == identity.coeffs
        m = sum(1 << i for i, s in enumerate(signs) if s == -1)
        masks.add(m)
        span |= {v ^ m for v in span}
    assert len(span) == 2 ** (theta(bs.group) + 1)
    # each spanned sign vector is a genuine unit, but the family generates
    # only part of the group: free signs at index-2 pairs are not reachable
    ug = unit_group(bs)
    all_signs = set(ug.signs)
    for v in span:
        assert tuple(-1 if v >> i & 1 else 1 for i in range(bs.rank)) in all_signs
    assert len(span) < ug.order


def test_conormal_generators_reject_nonabelian(make_group):
    with pytest.raises(NotAbelian, match="witness pair"):
        abelian_conormal_generators(make_group("S3"))


def test_rank_cap(make_functor):
    bs = basis_system(make_functor("D4", "slice"))
    assert bs.rank == 26
    with pytest.raises(RankCapExceeded):
        unit_group(bs)
    small = basis_system(make_functor("C4", "conormal"))
    with pytest.raises(RankCapExceeded):
        unit_group(small, cap=small.rank - 1)
    assert unit_group(small, cap=small.rank).order == 32
