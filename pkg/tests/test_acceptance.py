"""Release gate: ten checks over the full desk matrix.

The matrix is {C2, C3, C4, C2xC2, S3, D4, Q8, C6, A4} x {trivial, slice,
conormal} x p in {2, 3, inf}, all exact arithmetic, budgeted to finish in
under a minute.

Criterion 8 is red on purpose.  It asserts the closed-form unit-group
orders 2^|Hom(G, <-1>)| (ordinary) and 2^(theta(G)+1) (conormal, abelian
G) exactly as stated, and the computed unit groups are strictly larger on
several cells.  The discrepancy is analyzed in /root/notes/decisions.md;
the computed orders are pinned green in tests/test_units.py.
"""

import json
import random
from fractions import Fraction

import pytest

from burnside import jobs
from burnside.arith import INF, p_part
from burnside.ghost import (
    GhostVector,
    alpha,
    alpha_phi,
    beta,
    phi,
    phi_matrix,
    sigma_inverse,
    verify_fundamental,
)
from burnside.partial import (
    build_partial,
    partial_idempotents,
    partial_multiply,
    verify_partial,
)
from burnside.rings import RingElement, axiom_report, basis_element, basis_system, one
from burnside.spectra import (
    connectivity_tests,
    equivalence_classes,
    idempotents_local,
    idempotents_rational,
)
from burnside.units import abelian_conormal_generators, theta, unit_group

GROUPS = ("C2", "C3", "C4", "C2xC2", "S3", "D4", "Q8", "C6", "A4")
KINDS = ("trivial", "slice", "conormal")
PRIMES = (2, 3, INF)
CELLS = [(g, k) for g in GROUPS for k in KINDS]


# -- 1. Green-functor axioms, exhaustively -----------------------------------


@pytest.mark.parametrize("gname,kind", CELLS)
def test_criterion_1_axioms_exhaustive(make_functor, gname, kind):
    f = make_functor(gname, kind)
    rep = axiom_report(f, assoc_limit=None)
    assert rep.checked > 0
    assert rep.ok, rep.violations[:5]


# -- 2. sigma is a two-sided |H|-section of phi ------------------------------


@pytest.mark.parametrize("gname,kind", CELLS)
def test_criterion_2_sigma_phi_both_ways(make_functor, gname, kind):
    f = make_functor(gname, kind)
    for hid in range(len(f.subs)):
        bs = basis_system(f, hid)
        n = bs.host.order
        for i in range(bs.rank):
            back = sigma_inverse(phi(basis_element(bs, i)))
            assert back.coeffs == {i: Fraction(n)}
        for j in range(bs.rank):
            delta = GhostVector(
                bs, tuple(Fraction(int(k == j)) for k in range(bs.rank))
            )
            assert phi(sigma_inverse(delta)) == n * delta


# -- 3. fundamental exact sequence at every prime and inf --------------------


@pytest.mark.parametrize("gname,kind", CELLS)
def test_criterion_3_fundamental_sequence(make_functor, gname, kind):
    f = make_functor(gname, kind)
    bs = basis_system(f)
    mat = phi_matrix(bs)
    assert all(
        mat[i][j] == 0 for i in range(bs.rank) for j in range(i + 1, bs.rank)
    )
    assert all(mat[i][i] == bs.weyl_order(i) for i in range(bs.rank))
    for p in PRIMES:
        rep = verify_fundamental(bs, p)
        assert rep.ok, (gname, kind, p, rep.failures)
        assert rep.psi_phi_zero
        assert rep.det_p_part == rep.moduli_product


# -- 4. alpha and beta are mutually inverse ----------------------------------


@pytest.mark.parametrize("gname,kind", CELLS)
def test_criterion_4_alpha_beta_inverse(make_functor, gname, kind):
    bs = basis_system(make_functor(gname, kind))
    rng = random.Random(f"{gname}/{kind}")
    for _ in range(100):
        y = GhostVector(
            bs, tuple(Fraction(rng.randint(-999, 999)) for _ in range(bs.rank))
        )
        assert beta(alpha(y)) == y
        assert alpha(beta(y)) == y


# -- 5. rational idempotents, and the partial formula at X = S ---------------


@pytest.mark.parametrize("gname,kind", CELLS)
def test_criterion_5_idempotents(make_functor, gname, kind):
    f = make_functor(gname, kind)
    bs = basis_system(f)
    es = idempotents_rational(bs)
    assert len(es) == bs.rank
    total = RingElement(bs, {})
    for i, e in enumerate(es):
        assert (e * e).coeffs == e.coeffs
        marks = alpha_phi(e).entries
        assert marks == tuple(Fraction(int(k == i)) for k in range(bs.rank))
        total = total + e
    assert total.coeffs == one(bs).coeffs
    for i in range(bs.rank):
        for j in range(i):
            assert (es[i] * es[j]).coeffs == {}
    # the partial-system formula over the full pair set must agree
    # coefficient by coefficient
    ps = build_partial(f, lambda kid, s: True)
    assert ps.size == bs.rank
    for eps, e in zip(partial_idempotents(ps), es):
        assert eps.coeffs == e.coeffs


# -- 6. conormal idempotent count detects p-groups ---------------------------


@pytest.mark.parametrize(
    "gname,p,expect",
    [
        ("C4", 2, True),
        ("Q8", 2, True),
        ("C3", 3, True),
        ("S3", 2, False),
        ("S3", 3, False),
        ("A4", 2, False),
    ],
)
def test_criterion_6_conormal_count_vs_p_groups(
    make_group, make_functor, gname, p, expect
):
    g = make_group(gname)
    rep = connectivity_tests(g, make_functor(gname, "conormal"), p)
    assert (p_part(g.order, p) == g.order) is expect
    assert rep.count_is_subgroup_classes is expect
    assert rep.residuals_conjugate, rep.failures


# -- 7. slice rings with no idempotents beyond 0 and 1 -----------------------


@pytest.mark.parametrize("gname,p", [("D4", 2), ("Q8", 2), ("S3", INF)])
def test_criterion_7_slice_connected(make_functor, gname, p):
    bs = basis_system(make_functor(gname, "slice"))
    assert equivalence_classes(bs, p).count == 1
    es = idempotents_local(bs, p)
    assert len(es) == 1
    assert es[0].coeffs == one(bs).coeffs


# -- 8. unit-group orders (red: the closed forms are wrong) ------------------

ORDINARY_UNIT_GROUPS = ("C2", "C4", "C2xC2", "S3")
CONORMAL_ABELIAN = ("C2", "C3", "C4", "C2xC2", "C6")


def _index_two_count(g) -> int:
    subs = g.lattice
    return sum(
        1 for hid in range(len(subs)) if 2 * subs.subgroup(hid).order == g.order
    )


def _sign_span(bs, elements):
    """F2 span of the sign vectors of the given units."""
    span = {(1,) * bs.rank}
    for u in elements:
        s = tuple(int(v) for v in alpha_phi(u).entries)
        span |= {tuple(a * b for a, b in zip(t, s)) for t in span}
    return span


@pytest.mark.parametrize("gname", ORDINARY_UNIT_GROUPS + CONORMAL_ABELIAN)
def test_criterion_8_units_are_genuine(make_group, make_functor, gname):
    """The sub-claims that do hold: each cell is an elementary abelian
    2-group containing -1, and the generator family consists of units."""
    kinds = []
    if gname in ORDINARY_UNIT_GROUPS:
        kinds.append("trivial")
    if gname in CONORMAL_ABELIAN:
        kinds.append("conormal")
    for kind in kinds:
        bs = basis_system(make_functor(gname, kind))
        ug = unit_group(bs)
        assert ug.order == 2**ug.rank
        e = one(bs)
        assert e in ug.units and -e in ug.units
        for u in ug.units:
            assert (u * u).coeffs == e.coeffs
            assert all(c.denominator == 1 for c in u.coeffs.values())
        if kind == "conormal":
            g = make_group(gname)
            fam = abelian_conormal_generators(g, bs.functor)
            assert len(fam) == theta(g) + 1
            unit_signs = {tuple(int(v) for v in s) for s in ug.signs}
            for u in fam:
                signs = tuple(int(v) for v in alpha_phi(u).entries)
                assert signs in unit_signs


def test_criterion_8_unit_group_orders(make_group, make_functor):
    """Asserts the closed-form orders as stated.  Red by design: see the
    module docstring and /root/notes/decisions.md."""
    mismatches = []
    for gname in ORDINARY_UNIT_GROUPS:
        g = make_group(gname)
        claimed = 2 ** (1 + _index_two_count(g))
        ug = unit_group(basis_system(make_functor(gname, "trivial")))
        if ug.order != claimed:
            mismatches.append(
                f"ordinary {gname}: 2^|Hom(G,<-1>)| = {claimed}, computed {ug.order}"
            )
    for gname in CONORMAL_ABELIAN:
        g = make_group(gname)
        claimed = 2 ** (theta(g) + 1)
        bs = basis_system(make_functor(gname, "conormal"))
        ug = unit_group(bs)
        if ug.order != claimed:
            mismatches.append(
                f"conormal {gname}: 2^(theta+1) = {claimed}, computed {ug.order}"
            )
        span = _sign_span(bs, abelian_conormal_generators(g, bs.functor))
        if len(span) != ug.order:
            mismatches.append(
                f"conormal {gname}: generator family spans {len(span)}"
                f" of {ug.order} units"
            )
    assert not mismatches, (
        "closed-form unit-group orders disagree with the computed groups:\n  "
        + "\n  ".join(mismatches)
        + "\nThe computed groups pass every unit check (squares, integrality,"
        " sign lifts; see tests/test_units.py); the closed forms undercount."
        " Analysis: /root/notes/decisions.md."
    )


# -- 9. section systems over S3 and D4 ---------------------------------------


@pytest.mark.parametrize("gname", ("S3", "D4"))
def test_criterion_9_section_system(make_functor, gname):
    f = make_functor(gname, "slice")
    ps = jobs.resolve_partial(f, "section")  # construction enforces condition (A)
    assert ps.overlift
    assert ps.subring and ps.subring_witness is None
    for p in (2, INF):
        rep = verify_partial(ps, p)
        assert rep.ok, (gname, p, rep.failures)
    bs = ps.ambient
    es = partial_idempotents(ps)
    assert len(es) == ps.size
    total = RingElement(bs, {})
    for i in range(len(es)):
        assert partial_multiply(ps, es[i], es[i]).coeffs == es[i].coeffs
        for j in range(i):
            assert partial_multiply(ps, es[i], es[j]).coeffs == {}
        total = total + es[i]
    assert total.coeffs == one(bs).coeffs


# -- 10. verify_all is deterministic -----------------------------------------


def test_criterion_10_verify_all_byte_identical():
    first = json.dumps(jobs.run_verify_all(), sort_keys=True).encode()
    second = json.dumps(jobs.run_verify_all(), sort_keys=True).encode()
    assert first == second
    assert json.loads(first)["ok"] is True
