"""Primitive idempotents, coequalizer edges, and the ∼_p class partition.

Two oracles anchor this file.  Rational idempotents must invert the ghost
embedding: e_pos is the unique element with α∘φ(e_pos) = δ_pos, recovered
here by Gauss-Jordan inversion of the α∘φ matrix.  Class counts for the
trivial functor must equal the number of conjugacy classes of p-residuals
O^p(U), recomputed directly from the subgroup lattice.
"""

from fractions import Fraction
from types import SimpleNamespace

import pytest

from burnside.arith import p_part
from burnside.errors import NotInWeylGroup
from burnside.ghost import alpha_phi
from burnside.groups import all_sylow_subgroups, p_residual
from burnside.rings import RingElement, basis_element, basis_system, one
from burnside.spectra import (
    coequalizer,
    connectivity_tests,
    equivalence_classes,
    idempotents_local,
    idempotents_rational,
)

GROUPS = ("C2", "C3", "C4", "C2xC2", "S3", "D4", "Q8", "C6", "A4")
PRIMES = (2, 3, "inf")


def invert(mat):
    """Gauss-Jordan inverse over Q; the independent route to idempotents."""
    n = len(mat)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def ghost_matrix(bs):
    return [list(alpha_phi(basis_element(bs, i)).entries) for i in range(bs.rank)]


@pytest.mark.parametrize("gname,kind", [
    ("C2", "trivial"), ("S3", "trivial"), ("C4", "conormal"),
    ("S3", "slice"), ("C2xC2", "slice"), ("Q8", "conormal"),
])
def test_rational_idempotents_solve_ghost_deltas(gname, kind, make_functor):
    bs = basis_system(make_functor(gname, kind))
    # column pos of the inverse transpose solves x·A = delta_pos
    cols = invert([list(c) for c in zip(*ghost_matrix(bs))])
    es = idempotents_rational(bs)
    assert len(es) == bs.rank
    for pos in range(bs.rank):
        want = {i: cols[i][pos] for i in range(bs.rank) if cols[i][pos]}
        assert es[pos].coeffs == want


def test_frozen_ordinary_s3_idempotents(make_functor):
    # hand-derived from e_K = |N(K)|^-1 Σ_{U≤K} |U| μ(U,K) [S3/U]
    bs = basis_system(make_functor("S3", "trivial"))
    es = idempotents_rational(bs)
    half = Fraction(1, 2)
    sixth = Fraction(1, 6)
    assert es[0].coeffs == {0: sixth}
    assert es[1].coeffs == {0: -half, 1: 1}
    assert es[2].coeffs == {0: -sixth, 2: half}
    assert es[3].coeffs == {0: half, 1: -1, 2: -half, 3: 1}


@pytest.mark.parametrize("gname,kind", [
    ("S3", "trivial"), ("S3", "conormal"), ("C4", "slice"),
    ("C6", "conormal"), ("Q8", "conormal"), ("A4", "conormal"),
])
def test_idempotent_system_axioms(gname, kind, make_functor):
    bs = basis_system(make_functor(gname, kind))
    es = idempotents_rational(bs)
    total = RingElement(bs, {})
    for i, e in enumerate(es):
        assert (e * e).coeffs == e.coeffs
        delta = alpha_phi(e).entries
        assert all(v == (1 if j == i else 0) for j, v in enumerate(delta))
        total = total + e
    assert total.coeffs == one(bs).coeffs
    for i in range(len(es)):
        for j in range(i + 1, len(es)):
            assert not (es[i] * es[j]).coeffs


@pytest.mark.parametrize("gname", GROUPS)
@pytest.mark.parametrize("p", PRIMES)
def test_trivial_class_count_is_residual_count(gname, p, make_functor):
    bs = basis_system(make_functor(gname, "trivial"))
    subs = bs.subs
    cls = equivalence_classes(bs, p)
    residuals = {
        subs.class_rep[p_residual(bs.group, subs.subgroup(uid), p).id]
        for uid, _ in bs.reps
    }
    assert cls.count == len(residuals)
    # two pairs in one class share the residual class
    for members in cls.classes:
        marks = {
            subs.class_rep[p_residual(bs.group, subs.subgroup(bs.reps[m][0]), p).id]
            for m in members
        }
        assert len(marks) == 1


CONORMAL_COUNTS = {
    ("C4", 2): 3, ("Q8", 2): 6, ("C3", 3): 2,
    ("S3", 2): 5, ("S3", 3): 7, ("A4", 2): 8,
}


@pytest.mark.parametrize("gname,p", sorted(CONORMAL_COUNTS, key=str))
def test_conormal_class_counts(gname, p, make_functor):
    f = make_functor(gname, "conormal")
    bs = basis_system(f)
    assert equivalence_classes(bs, p).count == CONORMAL_COUNTS[(gname, p)]
    rep = connectivity_tests(bs.group, f, p)
    assert rep.residuals_conjugate, rep.failures
    is_p_group = p_part(bs.group.order, p) == bs.group.order
    assert rep.count_is_subgroup_classes == is_p_group


@pytest.mark.parametrize("gname,p", [("D4", 2), ("Q8", 2), ("S3", "inf")])
def test_slice_spectrum_connected(gname, p, make_functor):
    bs = basis_system(make_functor(gname, "slice"))
    cls = equivalence_classes(bs, p)
    assert cls.count == 1
    assert idempotents_local(bs, p)[0].coeffs == one(bs).coeffs


def test_partition_bookkeeping(make_functor):
    bs = basis_system(make_functor("S3", "conormal"))
    cls = equivalence_classes(bs, 2)
    assert sorted(sum(cls.classes, ())) == list(range(bs.rank))
    for cid, members in enumerate(cls.classes):
        assert list(members) == sorted(members)
        for m in members:
            assert cls.class_of[m] == cid
    for src, _, tgt in cls.edges:
        assert cls.class_of[src] == cls.class_of[tgt]


@pytest.mark.parametrize("gname,kind,p", [
    ("S3", "trivial", 2), ("S3", "trivial", 3), ("S3", "slice", 2),
    ("C4", "conormal", 2), ("Q8", "conormal", 2), ("A4", "conormal", 2),
    ("C6", "conormal", 3), ("S3", "trivial", "inf"),
])
def test_local_idempotents(gname, kind, p, make_functor):
    bs = basis_system(make_functor(gname, kind))
    cls = equivalence_classes(bs, p)
    es = idempotents_local(bs, p)
    assert len(es) == cls.count
    total = RingElement(bs, {})
    for cid, e in enumerate(es):
        if p != "inf":
            assert all(c.denominator % p for c in e.coeffs.values())
        else:
            assert all(c.denominator == 1 for c in e.coeffs.values())
        assert (e * e).coeffs == e.coeffs
        ghost = alpha_phi(e).entries
        for j in range(bs.rank):
            assert ghost[j] == (1 if cls.class_of[j] == cid else 0)
        total = total + e
    assert total.coeffs == one(bs).coeffs
    for i in range(len(es)):
        for j in range(i + 1, len(es)):
            assert not (es[i] * es[j]).coeffs


def test_solvable_integral_idempotents_trivial(make_functor):
    # at p = inf nothing is inverted, so a connected spectrum leaves only 0, 1
    for gname in GROUPS:
        bs = basis_system(make_functor(gname, "trivial"))
        es = idempotents_local(bs, "inf")
        assert len(es) == 1
        assert es[0].coeffs == one(bs).coeffs


def sub_id_of(subs, members):
    want = frozenset(members)
    return next(s.id for s in subs.all if frozenset(s.members) == want)


def test_coequalizer_targets(make_functor):
    f = make_functor("C2xC2", "slice")
    bs = basis_system(f)
    subs, g = bs.subs, bs.group
    data = f.require_lattice()
    a, b = [s.id for s in subs.all if s.order == 2][:2]
    b_gen = next(m for m in subs.members(b) if m != g.identity)
    join = sub_id_of(subs, g.generated(list(subs.members(a)) + [b_gen]))
    cq = coequalizer(bs, (0, data.pos[0][a]), b_gen)
    assert cq.source == (0, data.pos[0][a])
    assert cq.g == b_gen
    assert cq.target == (b, data.pos[b][join])
    # a label already above the adjoined subgroup stays put
    top = len(subs) - 1
    cq2 = coequalizer(bs, (0, data.pos[0][top]), b_gen)
    assert cq2.target == (b, data.pos[b][top])


def test_coequalizer_rejects_non_weyl(make_functor):
    bs = basis_system(make_functor("S3", "trivial"))
    subs = bs.subs
    c2 = next(s.id for s in subs.all if s.order == 2)
    mover = next(
        x for x in range(bs.group.order) if subs.conj_sub[x][c2] != c2
    )
    with pytest.raises(NotInWeylGroup):
        coequalizer(bs, (c2, 0), mover)
    # normalizing the subgroup is not enough: the label must be fixed too
    fs = make_functor("S3", "slice")
    bss = basis_system(fs)
    data = fs.require_lattice()
    three = next(x for x in range(bss.group.order) if bss.group.element_order(x) == 3)
    with pytest.raises(NotInWeylGroup):
        coequalizer(bss, (0, data.pos[0][c2]), three)


@pytest.mark.parametrize("gname,kind,p", [
    ("S3", "trivial", 2), ("S3", "slice", 2), ("A4", "conormal", 2),
    ("D4", "conormal", 2), ("S3", "conormal", "inf"),
])
def test_partition_independent_of_sylow_choice(gname, kind, p, make_functor):
    bs = basis_system(make_functor(gname, kind))
    base = equivalence_classes(bs, p)

    def choice(i):
        def pick(w, q):
            opts = all_sylow_subgroups(w, q)
            return opts[i % len(opts)]

        return pick

    for i in range(3):
        alt = equivalence_classes(bs, p, sylow=choice(i))
        assert alt.class_of == base.class_of


def test_connectivity_report_fields(make_functor):
    f = make_functor("S3", "trivial")
    rep = connectivity_tests(basis_system(f).group, f, 2)
    assert rep.p == 2
    assert rep.class_count == 2
    assert not rep.connected
    assert rep.subgroup_class_count == 4
    assert not rep.count_is_subgroup_classes
    assert rep.residuals_conjugate
    assert rep.failures == []
    inf_rep = connectivity_tests(basis_system(f).group, f, "inf")
    assert inf_rep.connected
