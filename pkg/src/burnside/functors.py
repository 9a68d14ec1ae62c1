"""Monoid functors M = (M, con, res) and every built-in instance.

A monoid functor assigns a finite monoid M(H) to each subgroup H together
with conjugation maps con(H, g): M(H) -> M(gHg^-1) and restriction maps
res(K <= H): M(H) -> M(K), subject to composition and compatibility axioms.
Functors built from a sublattice family carry extra lattice structure
(`LatticeData`) consumed by the ghost/spectra/units layers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import (
    ActionNotByHomomorphisms,
    CapExceeded,
    InvalidFamily,
    NotAbelian,
    NotLatticeFunctor,
)
from .groups import FiniteGroup, SubgroupLattice
from .posets import (
    FinitePoset,
    GLattice,
    SublatticeFamily,
    make_family,
    mobius,
    subgroup_glattice,
    validate_family,
)


class FiniteMonoid:
    """A finite monoid on indices 0..size-1 with labeled elements."""

    def __init__(self, table, identity: int, labels=None):
        self.table = tuple(tuple(row) for row in table)
        self.size = len(self.table)
        self.identity = identity
        self.labels = tuple(labels) if labels is not None else tuple(
            str(i) for i in range(self.size)
        )
        n = self.size
        for a in range(n):
            if self.table[self.identity][a] != a or self.table[a][self.identity] != a:
                raise ValueError(f"identity {identity} is not two-sided at {a}")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                        raise ValueError(f"monoid not associative at ({a}, {b}, {c})")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def is_commutative(self) -> bool:
        return all(
            self.table[a][b] == self.table[b][a]
            for a in range(self.size)
            for b in range(a)
        )


def _compose_map(outer, inner):
    return tuple(outer[x] for x in inner)


def _cover_pairs(subs: SubgroupLattice):
    """All covering pairs (K, H) with K < H and nothing strictly between."""
    pairs = []
    for hid in range(len(subs)):
        below = [c for c in subs.ids_below(hid) if c != hid]
        for c in below:
            if not any(
                m not in (c, hid) and subs.leq[c][m] for m in below
            ):
                pairs.append((c, hid))
    return pairs


class LatticeData:
    """Lattice-side structure of a functor built from a sublattice family."""

    def __init__(self, glattice: GLattice, family: SublatticeFamily):
        self.glattice = glattice
        self.family = family
        self.elems = tuple(family.elements_of(sid) for sid in range(len(family.member)))
        self.pos = tuple(
            {x: i for i, x in enumerate(elems)} for elems in self.elems
        )
        self._mobius = {}
        self._poset = {}

    def sup_id(self, sid: int) -> int:
        return self.family.sup[sid]

    def leq(self, x: int, y: int) -> bool:
        return self.glattice.leq_elems(x, y)

    def meet(self, x: int, y: int) -> int:
        return self.glattice.meet[x][y]

    def poset_of(self, sid: int) -> FinitePoset:
        if sid not in self._poset:
            elems = self.elems[sid]
            leq = [[self.leq(x, y) for y in elems] for x in elems]
            labels = [self.glattice.poset.labels[x] for x in elems]
            self._poset[sid] = FinitePoset(leq, labels)
        return self._poset[sid]

    def mobius_of(self, sid: int):
        """Möbius matrix of the poset Λ_H, indexed like M(H)."""
        if sid not in self._mobius:
            self._mobius[sid] = mobius(self.poset_of(sid))
        return self._mobius[sid]

    def up_inf(self, sid: int, t: int) -> int:
        """inf Λ_H^{>=t}: the least member of Λ_H above the lattice element t."""
        above = [s for s in self.elems[sid] if self.leq(t, s)]
        if not above:
            raise ValueError(f"no element of Λ at subgroup {sid} lies above {t}")
        out = above[0]
        for s in above[1:]:
            out = self.meet(out, s)
        return out


@dataclass
class AxiomReport:
    checked: int = 0
    violations: list = None

    def __post_init__(self):
        if self.violations is None:
            self.violations = []

    @property
    def ok(self) -> bool:
        return not self.violations


class MonoidFunctor:
    """The (M, con, res) triple over a fixed group's subgroup lattice.

    con maps are stored densely; res maps are stored for covering pairs
    K < H only and composed on demand (axiom M.2 makes the chain choice
    irrelevant; `check_axioms` re-verifies that).
    """

    def __init__(self, group: FiniteGroup, name: str, monoids, con_maps, res_cover,
                 lattice_data: LatticeData | None = None):
        self.group = group
        self.subs: SubgroupLattice = group.lattice
        self.name = name
        self.monoids = tuple(monoids)
        self._con = dict(con_maps)
        self._res_cover = dict(res_cover)
        self._res_memo = {}
        self.lattice = lattice_data

    # -- structure maps -----------------------------------------------------

    def monoid(self, sid: int) -> FiniteMonoid:
        return self.monoids[sid]

    def con(self, sid: int, g: int):
        """Index map M(sid) -> M(g·sid·g^-1)."""
        return self._con[(sid, g)]

    def res(self, kid: int, hid: int):
        """Index map M(hid) -> M(kid) for kid <= hid, composed along covers."""
        if kid == hid:
            return tuple(range(self.monoids[hid].size))
        key = (kid, hid)
        out = self._res_memo.get(key)
        if out is None:
            cur = hid
            out = tuple(range(self.monoids[hid].size))
            while cur != kid:
                step = next(
                    c for c in self._covers_below(cur) if self.subs.leq[kid][c]
                )
                out = _compose_map(self._res_cover[(step, cur)], out)
                cur = step
            self._res_memo[key] = out
        return out

    @cached_property
    def _covers(self):
        n = len(self.subs)
        leq = self.subs.leq
        covers = [[] for _ in range(n)]
        for h in range(n):
            below = [c for c in range(n) if leq[c][h] and c != h]
            for c in below:
                if not any(leq[c][m] and leq[m][h] and m not in (c, h) for m in below):
                    covers[h].append(c)
        return covers

    def _covers_below(self, hid: int):
        return self._covers[hid]

    def require_lattice(self) -> LatticeData:
        if self.lattice is None:
            raise NotLatticeFunctor(self.name)
        return self.lattice

    # -- axiom verification -------------------------------------------------

    def check_axioms(self, sample=None) -> AxiomReport:
        """Verify M.1-M.3 plus the homomorphism property of every map."""
        report = AxiomReport()
        group = self.group
        subs = self.subs
        nsub = len(subs)
        ids = range(nsub)

        def hom_ok(src: FiniteMonoid, dst: FiniteMonoid, f) -> bool:
            if f[src.identity] != dst.identity:
                return False
            return all(
                f[src.mul(a, b)] == dst.mul(f[a], f[b])
                for a in range(src.size)
                for b in range(src.size)
            )

        for sid in ids:
            for g in group.elements():
                tgt = subs.conj_sub[g][sid]
                f = self.con(sid, g)
                report.checked += 1
                if sorted(f) != list(range(self.monoids[tgt].size)):
                    report.violations.append(("con-bijection", sid, g))
                if not hom_ok(self.monoids[sid], self.monoids[tgt], f):
                    report.violations.append(("con-homomorphism", sid, g))
            for h in subs.members(sid):
                if self.con(sid, h) != tuple(range(self.monoids[sid].size)):
                    report.violations.append(("M.1-identity", sid, h))
        for sid in ids:
            for r in group.elements():
                rsid = subs.conj_sub[r][sid]
                for g in group.elements():
                    lhs = _compose_map(self.con(rsid, g), self.con(sid, r))
                    rhs = self.con(sid, group.mul(g, r))
                    report.checked += 1
                    if lhs != rhs:
                        report.violations.append(("M.1-composition", sid, (g, r)))
        for hid in ids:
            for kid in subs.ids_below(hid):
                f = self.res(kid, hid)
                report.checked += 1
                if not hom_ok(self.monoids[hid], self.monoids[kid], f):
                    report.violations.append(("res-homomorphism", kid, hid))
                for lid in subs.ids_below(kid):
                    lhs = _compose_map(self.res(lid, kid), f)
                    report.checked += 1
                    if lhs != self.res(lid, hid):
                        report.violations.append(("M.2-composition", lid, kid, hid))
            if self.res(hid, hid) != tuple(range(self.monoids[hid].size)):
                report.violations.append(("M.2-identity", hid))
        for hid in ids:
            for kid in subs.ids_below(hid):
                for g in group.elements():
                    gh = subs.conj_sub[g][hid]
                    gk = subs.conj_sub[g][kid]
                    lhs = _compose_map(self.con(kid, g), self.res(kid, hid))
                    rhs = _compose_map(self.res(gk, gh), self.con(hid, g))
                    report.checked += 1
                    if lhs != rhs:
                        report.violations.append(("M.3-compatibility", kid, hid, g))
        return report

    def __repr__(self):
        return f"MonoidFunctor({self.name!r} over {self.group.name})"


# -- lattice functors -------------------------------------------------------


def lattice_functor(family: SublatticeFamily, name: str = "lattice") -> MonoidFunctor:
    """The monoid functor of a sublattice family: M(H) = Λ_H under meet."""
    report = validate_family(family)
    if not report.ok:
        raise InvalidFamily(report)
    lat = family.glattice
    subs = family.subgroup_lattice
    group = subs.group
    data = LatticeData(lat, family)
    monoids = []
    for sid in range(len(subs)):
        elems = data.elems[sid]
        pos = data.pos[sid]
        table = [[pos[lat.meet[x][y]] for y in elems] for x in elems]
        labels = [lat.poset.labels[x] for x in elems]
        monoids.append(FiniteMonoid(table, pos[family.sup[sid]], labels))
    con_maps = {}
    for sid in range(len(subs)):
        for g in group.elements():
            tgt = subs.conj_sub[g][sid]
            con_maps[(sid, g)] = tuple(
                data.pos[tgt][lat.act(g, x)] for x in data.elems[sid]
            )
    res_cover = {
        (kid, hid): tuple(
            data.pos[kid][lat.meet[x][family.sup[kid]]] for x in data.elems[hid]
        )
        for kid, hid in _cover_pairs(subs)
    }
    return MonoidFunctor(group, name, monoids, con_maps, res_cover, data)


def trivial_functor(g: FiniteGroup) -> MonoidFunctor:
    """One-point lattice: Ω(H, M) is the ordinary Burnside ring."""
    poset = FinitePoset([[True]], ["*"])
    lat = GLattice(poset, [(0,) for _ in g.elements()])
    family = make_family(lat, g.lattice, {sid: [0] for sid in range(len(g.lattice))})
    return lattice_functor(family, "trivial")


def slice_functor(g: FiniteGroup) -> MonoidFunctor:
    """Λ_H = subgroups containing H; res is inclusion. Bouc's slice ring."""
    lat = subgroup_glattice(g)
    subs = g.lattice
    member = {
        sid: [t for t in range(len(subs)) if subs.leq[sid][t]]
        for sid in range(len(subs))
    }
    return lattice_functor(make_family(lat, subs, member), "slice")


def conormal_functor(g: FiniteGroup) -> MonoidFunctor:
    """Λ_H = normal subgroups of H; res(L) = L ∩ K."""
    lat = subgroup_glattice(g)
    subs = g.lattice
    member = {sid: list(subs.normal_ids_in(sid)) for sid in range(len(subs))}
    return lattice_functor(make_family(lat, subs, member), "conormal")


# -- crossed functors -------------------------------------------------------


def monoid_from_glattice(lat: GLattice) -> tuple[FiniteMonoid, list]:
    """A G-lattice as a G-monoid: multiplication is meet, identity the top."""
    n = lat.poset.size
    monoid = FiniteMonoid(lat.meet, lat.top, lat.poset.labels)
    action = [tuple(lat.action[g]) for g in range(len(lat.action))]
    return monoid, action


def crossed_functor(g: FiniteGroup, monoid: FiniteMonoid, action,
                    name: str = "crossed") -> MonoidFunctor:
    """M(H) = H-invariants of a G-monoid S; con = action, res = inclusion."""
    action = [tuple(row) for row in action]
    if len(action) != g.order:
        raise ActionNotByHomomorphisms("need one permutation per group element")
    for x, perm in enumerate(action):
        if sorted(perm) != list(range(monoid.size)):
            raise ActionNotByHomomorphisms(f"action of {x} is not a permutation")
        if perm[monoid.identity] != monoid.identity:
            raise ActionNotByHomomorphisms(f"action of {x} moves the monoid identity")
        for a in range(monoid.size):
            for b in range(monoid.size):
                if perm[monoid.mul(a, b)] != monoid.mul(perm[a], perm[b]):
                    raise ActionNotByHomomorphisms(
                        f"action of {x} is not a monoid homomorphism at ({a}, {b})"
                    )
    for x in g.elements():
        for y in g.elements():
            xy = g.mul(x, y)
            if _compose_map(action[x], action[y]) != action[xy]:
                raise ActionNotByHomomorphisms(
                    f"action is not a left group action at ({x}, {y})"
                )
    subs = g.lattice
    invariants = []
    pos = []
    for sid in range(len(subs)):
        inv = tuple(
            a for a in range(monoid.size)
            if all(action[h][a] == a for h in subs.members(sid))
        )
        invariants.append(inv)
        pos.append({a: i for i, a in enumerate(inv)})
    monoids = []
    for sid in range(len(subs)):
        inv = invariants[sid]
        table = [[pos[sid][monoid.mul(a, b)] for b in inv] for a in inv]
        monoids.append(
            FiniteMonoid(table, pos[sid][monoid.identity], [monoid.labels[a] for a in inv])
        )
    con_maps = {}
    for sid in range(len(subs)):
        for x in g.elements():
            tgt = subs.conj_sub[x][sid]
            con_maps[(sid, x)] = tuple(pos[tgt][action[x][a]] for a in invariants[sid])
    res_cover = {
        (kid, hid): tuple(pos[kid][a] for a in invariants[hid])
        for kid, hid in _cover_pairs(subs)
    }
    return MonoidFunctor(g, name, monoids, con_maps, res_cover)


# -- monomial functors ------------------------------------------------------


def monomial_functor(g: FiniteGroup, a: FiniteGroup, action,
                     cap: int = 10**6, name: str = "monomial") -> MonoidFunctor:
    """M(H) = H^1(H, A) for an abelian G-group A, by brute-force cocycles.

    A 1-cocycle is a map σ: H -> A with σ(h1 h2) = σ(h1) · ʰ¹σ(h2); two
    cocycles are identified when σ'(h) = b^-1 σ(h) ʰb for some b in A.
    """
    witness = next(
        ((x, y) for x in a.elements() for y in a.elements() if a.mul(x, y) != a.mul(y, x)),
        None,
    )
    if witness is not None:
        raise NotAbelian(a.name, witness)
    action = [tuple(row) for row in action]
    if len(action) != g.order:
        raise ActionNotByHomomorphisms("need one permutation of A per group element")
    for x, perm in enumerate(action):
        if sorted(perm) != list(range(a.order)):
            raise ActionNotByHomomorphisms(f"action of {x} is not a permutation of A")
        for u in a.elements():
            for v in a.elements():
                if perm[a.mul(u, v)] != a.mul(perm[u], perm[v]):
                    raise ActionNotByHomomorphisms(
                        f"action of {x} is not an automorphism of A at ({u}, {v})"
                    )
    for x in g.elements():
        for y in g.elements():
            if _compose_map(action[x], action[y]) != action[g.mul(x, y)]:
                raise ActionNotByHomomorphisms(
                    f"A-action is not a left group action at ({x}, {y})"
                )
    subs = g.lattice
    nsub = len(subs)

    member_pos = [
        {h: i for i, h in enumerate(subs.members(sid))} for sid in range(nsub)
    ]

    def cocycles(sid: int):
        members = subs.members(sid)
        pos = member_pos[sid]
        if a.order ** len(members) > cap:
            raise CapExceeded(
                f"|A|^|H| = {a.order}^{len(members)} exceeds the cocycle cap {cap}"
            )
        out = []
        for sigma in itertools.product(a.elements(), repeat=len(members)):
            ok = True
            for h1 in members:
                for h2 in members:
                    lhs = sigma[pos[g.mul(h1, h2)]]
                    if lhs != a.mul(sigma[pos[h1]], action[h1][sigma[pos[h2]]]):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.append(sigma)
        return out

    def normalize(sid: int, sigma):
        members = subs.members(sid)
        best = None
        for b in a.elements():
            binv = a.inv(b)
            cand = tuple(
                a.mul(a.mul(binv, sigma[i]), action[members[i]][b])
                for i in range(len(members))
            )
            if best is None or cand < best:
                best = cand
        return best

    classes = []
    class_pos = []
    for sid in range(nsub):
        reps = sorted({normalize(sid, s) for s in cocycles(sid)})
        classes.append(tuple(reps))
        class_pos.append({r: i for i, r in enumerate(reps)})
    monoids = []
    for sid in range(nsub):
        reps = classes[sid]
        members = subs.members(sid)
        ident = normalize(sid, tuple(a.identity for _ in members))
        table = []
        for s1 in reps:
            row = []
            for s2 in reps:
                prod = tuple(a.mul(s1[i], s2[i]) for i in range(len(members)))
                row.append(class_pos[sid][normalize(sid, prod)])
            table.append(row)
        labels = ["(" + ",".join(map(str, r)) + ")" for r in reps]
        monoids.append(FiniteMonoid(table, class_pos[sid][ident], labels))
    con_maps = {}
    for sid in range(nsub):
        members = subs.members(sid)
        pos = member_pos[sid]
        for x in g.elements():
            tgt = subs.conj_sub[x][sid]
            xinv = g.inv(x)
            maps = []
            for sigma in classes[sid]:
                moved = tuple(
                    action[x][sigma[pos[g.conj(xinv, h)]]]
                    for h in subs.members(tgt)
                )
                maps.append(class_pos[tgt][normalize(tgt, moved)])
            con_maps[(sid, x)] = tuple(maps)
    res_cover = {}
    for kid, hid in _cover_pairs(subs):
        pos = member_pos[hid]
        maps = []
        for sigma in classes[hid]:
            cut = tuple(sigma[pos[h]] for h in subs.members(kid))
            maps.append(class_pos[kid][normalize(kid, cut)])
        res_cover[(kid, hid)] = tuple(maps)
    return MonoidFunctor(g, name, monoids, con_maps, res_cover)
