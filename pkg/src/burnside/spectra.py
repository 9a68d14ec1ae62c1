"""Primitive idempotents and the connectivity of Spec Ω(G, M_Λ).

Over Q every representative (K, s) owns one primitive idempotent via a
double Möbius sum.  Over Z_(p) the idempotents are class sums for the
equivalence ∼_p generated by coequalizer identifications
(G/U, π_t)/σ_g = (G/⟨g⟩U, π_{s_{(g,t)}}) with g of p-power order in the
Weyl group; the class count detects solvability and p-groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .arith import INF, local_domain
from .errors import NotInWeylGroup
from .groups import FiniteGroup, p_residual, sylow_subgroup
from .functors import MonoidFunctor
from .ghost import _host_subgroup_mobius, inf_above
from .rings import BasisSystem, RingElement, basis_system


def idempotents_rational(bs: BasisSystem) -> list[RingElement]:
    """The primitive idempotents of Q ⊗ Ω(H, M_Λ), one per representative.

    e_{(K,s)} = |N_H(K,s)|^-1 Σ_{t ≤ s in Λ_K} μ_K(t,s)
                Σ_{U ≤ K} |U| μ(U,K) [(H/U)_{t ∧ sup Λ_U}]
    """
    data = bs.functor.require_lattice()
    subs = bs.subs
    _, pos_of, sub_mu = _host_subgroup_mobius(bs)
    out = []
    for pos in range(bs.rank):
        kid, s = bs.reps[pos]
        n_order = bs.stab(pos)[0].order
        lat_mu = data.mobius_of(kid)
        s_lat = data.elems[kid][s]
        coeffs = {}
        for t_idx, t_lat in enumerate(data.elems[kid]):
            if not data.leq(t_lat, s_lat):
                continue
            outer = lat_mu[t_idx][s]
            if not outer:
                continue
            for uid in subs.ids_below(kid):
                inner = sub_mu[pos_of[uid]][pos_of[kid]]
                if not inner:
                    continue
                elem = data.pos[uid][data.meet(t_lat, data.sup_id(uid))]
                tgt = bs.index(uid, elem)
                c = Fraction(outer * inner * subs.subgroup(uid).order, n_order)
                coeffs[tgt] = coeffs.get(tgt, Fraction(0)) + c
        out.append(RingElement(bs, coeffs))
    return out


@dataclass(frozen=True)
class Coequalizer:
    """(G/U, π_t)/σ_g = (G/⟨g⟩U, π_{s_{(g,t)}}) for gU in the Weyl group."""

    source: tuple
    g: int
    target: tuple


def coequalizer(bs: BasisSystem, pair: tuple, g: int) -> Coequalizer:
    """The coequalizer of σ_g and the identity on (H/U)_t."""
    uid, t = pair
    f = bs.functor
    f.require_lattice()
    if bs.subs.conj_sub[g][uid] != uid or f.con(uid, g)[t] != t:
        raise NotInWeylGroup(g, pair)
    rid = bs.subs.adjoin(uid, g)
    return Coequalizer((uid, t), g, (rid, inf_above(bs, uid, rid, t)))


@dataclass
class EquivalenceClasses:
    """The ∼_p partition of the representatives, with the edges that made it."""

    p: object
    class_of: tuple  # representative position -> class id
    classes: tuple  # class id -> sorted positions
    edges: tuple  # (source position, g, target position)

    @property
    def count(self) -> int:
        return len(self.classes)


def equivalence_classes(
    bs: BasisSystem, p, sylow=sylow_subgroup
) -> EquivalenceClasses:
    """Union-find closure of source ∼_p target over all coequalizer edges.

    g runs over every member of the chosen Sylow p-subgroup of each
    W_H(U,t) (the whole Weyl group when p = inf); the partition does not
    depend on the Sylow choice, which `sylow` lets tests vary.
    """
    parent = list(range(bs.rank))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    edges = []
    for pos in range(bs.rank):
        pair = bs.reps[pos]
        w = bs.weyl(pos)
        for c in sylow(w, p).members:
            g = w.coset_reps[c]
            cq = coequalizer(bs, pair, g)
            tgt = bs.rep_of(*cq.target)[0]
            edges.append((pos, g, tgt))
            union(pos, tgt)
    roots = sorted({find(a) for a in range(bs.rank)})
    class_id = {r: i for i, r in enumerate(roots)}
    class_of = tuple(class_id[find(a)] for a in range(bs.rank))
    classes = tuple(
        tuple(a for a in range(bs.rank) if class_of[a] == i)
        for i in range(len(roots))
    )
    return EquivalenceClasses(p, class_of, classes, tuple(edges))


def idempotents_local(
    bs: BasisSystem, p, sylow=sylow_subgroup
) -> list[RingElement]:
    """The primitive idempotents of Ω(H, M_Λ)_(p): ∼_p class sums.

    Every denominator must end up coprime to p; the local domain check on
    the result enforces that, so a failure here is a genuine bug.
    """
    rational = idempotents_rational(bs)
    cls = equivalence_classes(bs, p, sylow=sylow)
    dom = local_domain(p)
    out = []
    for members in cls.classes:
        total = rational[members[0]]
        for pos in members[1:]:
            total = total + rational[pos]
        out.append(total.in_domain(dom))
    return out


@dataclass
class ConnectivityReport:
    """Idempotent counting vs the solvability / p-group criteria."""

    p: object
    class_count: int
    connected: bool
    subgroup_class_count: int
    count_is_subgroup_classes: bool
    residuals_conjugate: bool
    failures: list = field(default_factory=list)


def connectivity_tests(
    g: FiniteGroup, functor: MonoidFunctor, p
) -> ConnectivityReport:
    """Count ∼_p classes and cross-check the p-residual invariant.

    Along every coequalizer edge the subgroups O^p(U) and O^p(⟨g⟩U) are
    conjugate, so all subgroups in one class must share the conjugacy class
    of their p-residual; any violation is reported.
    """
    bs = basis_system(functor)
    subs = g.lattice
    cls = equivalence_classes(bs, p)
    failures = []

    def residual_class(sid: int) -> int:
        return subs.class_rep[p_residual(g, subs.subgroup(sid), p).id]

    for src, edge_g, tgt in cls.edges:
        if residual_class(bs.reps[src][0]) != residual_class(bs.reps[tgt][0]):
            failures.append(("edge-residual", src, edge_g, tgt))
    for members in cls.classes:
        marks = {residual_class(bs.reps[pos][0]) for pos in members}
        if len(marks) != 1:
            failures.append(("class-residual", members))
    n_classes = len(subs.classes)
    return ConnectivityReport(
        p=p,
        class_count=cls.count,
        connected=cls.count == 1,
        subgroup_class_count=n_classes,
        count_is_subgroup_classes=cls.count == n_classes,
        residuals_conjugate=not failures,
        failures=failures,
    )
