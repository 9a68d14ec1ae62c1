"""Finite posets, Möbius functions, G-lattices, and sublattice families.

A G-lattice is a finite lattice with an order-preserving left action of a
finite group; a sublattice family assigns to every subgroup H a sublattice
Λ_H subject to the four conditions that make the lattice Burnside ring
construction work (see `validate_family` for the list).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import CapExceeded
from .groups import FiniteGroup, SubgroupLattice


class FinitePoset:
    """A partial order on range(size) given by a boolean leq matrix."""

    def __init__(self, leq, labels=None):
        self.leq = tuple(tuple(bool(x) for x in row) for row in leq)
        self.size = len(self.leq)
        self.labels = tuple(labels) if labels is not None else tuple(
            str(i) for i in range(self.size)
        )
        if any(len(row) != self.size for row in self.leq):
            raise ValueError("leq matrix is not square")
        if len(self.labels) != self.size:
            raise ValueError("label count does not match poset size")
        n = self.size
        for i in range(n):
            if not self.leq[i][i]:
                raise ValueError(f"not reflexive at {i}")
            for j in range(n):
                if i != j and self.leq[i][j] and self.leq[j][i]:
                    raise ValueError(f"not antisymmetric at ({i}, {j})")
                if self.leq[i][j]:
                    for k in range(n):
                        if self.leq[j][k] and not self.leq[i][k]:
                            raise ValueError(f"not transitive at ({i}, {j}, {k})")

    def below(self, j: int) -> list[int]:
        return [i for i in range(self.size) if self.leq[i][j]]

    def above(self, i: int) -> list[int]:
        return [j for j in range(self.size) if self.leq[i][j]]


def mobius(poset: FinitePoset) -> list[list[int]]:
    """The Möbius function as an integer matrix mu[x][y], zero when x ≰ y.

    Computed by the defining recursion mu(x,x) = 1,
    sum_{x ≤ z ≤ y} mu(x,z) = 0 for x < y, memoized over intervals.
    """
    n = poset.size
    leq = poset.leq
    mu = [[0] * n for _ in range(n)]
    for x in range(n):
        mu[x][x] = 1
        # process targets in an order compatible with ≤ so partial sums exist
        for y in sorted(range(n), key=lambda j: sum(leq[i][j] for i in range(n))):
            if y == x or not leq[x][y]:
                continue
            mu[x][y] = -sum(mu[x][z] for z in range(n) if leq[x][z] and leq[z][y] and z != y)
    return mu


class GLattice:
    """A finite lattice with meet/join tables and a group action preserving leq."""

    def __init__(self, poset: FinitePoset, action, validate: bool = True):
        self.poset = poset
        n = poset.size
        if n == 0:
            raise ValueError("a lattice cannot be empty")
        self.action = tuple(tuple(row) for row in action)
        leq = poset.leq
        self.meet = [[self._bound(i, j, lower=True) for j in range(n)] for i in range(n)]
        self.join = [[self._bound(i, j, lower=False) for j in range(n)] for i in range(n)]
        self.bottom = next(i for i in range(n) if all(leq[i][j] for j in range(n)))
        self.top = next(i for i in range(n) if all(leq[j][i] for j in range(n)))
        if validate:
            self._validate_action()

    def _bound(self, i: int, j: int, lower: bool):
        leq = self.poset.leq
        n = self.poset.size
        if lower:
            cands = [k for k in range(n) if leq[k][i] and leq[k][j]]
            best = [k for k in cands if all(leq[c][k] for c in cands)]
        else:
            cands = [k for k in range(n) if leq[i][k] and leq[j][k]]
            best = [k for k in cands if all(leq[k][c] for c in cands)]
        if len(best) != 1:
            kind = "meet" if lower else "join"
            raise ValueError(f"poset is not a lattice: no unique {kind} of ({i}, {j})")
        return best[0]

    def _validate_action(self):
        n = self.poset.size
        leq = self.poset.leq
        for g, perm in enumerate(self.action):
            if sorted(perm) != list(range(n)):
                raise ValueError(f"action of element {g} is not a permutation")
            for i in range(n):
                for j in range(n):
                    if leq[i][j] and not leq[perm[i]][perm[j]]:
                        raise ValueError(
                            f"action of element {g} does not preserve leq at ({i}, {j})"
                        )

    def act(self, g: int, x: int) -> int:
        return self.action[g][x]

    def leq_elems(self, i: int, j: int) -> bool:
        return self.poset.leq[i][j]

    def meet_all(self, xs) -> int:
        out = None
        for x in xs:
            out = x if out is None else self.meet[out][x]
        if out is None:
            raise ValueError("meet of empty set")
        return out

    def check_action_group_law(self, group: FiniteGroup):
        for g in group.elements():
            for h in group.elements():
                gh = group.mul(g, h)
                for x in range(self.poset.size):
                    if self.action[g][self.action[h][x]] != self.action[gh][x]:
                        raise ValueError(
                            f"action is not a left group action at (g={g}, h={h}, x={x})"
                        )


@dataclass
class FamilyReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class SublatticeFamily:
    """The data Λ_H ⊆ Λ for every subgroup H, with sup Λ_H precomputed."""

    glattice: GLattice
    subgroup_lattice: SubgroupLattice
    member: tuple  # per subgroup id, a frozenset of lattice indices
    sup: tuple  # per subgroup id, a lattice index

    def elements_of(self, sid: int) -> tuple[int, ...]:
        return tuple(sorted(self.member[sid]))


def make_family(glattice: GLattice, sub_lattice: SubgroupLattice, member_map) -> SublatticeFamily:
    member = []
    for sid in range(len(sub_lattice)):
        elems = frozenset(member_map[sid])
        if not elems:
            raise ValueError(f"Λ is empty at subgroup {sid}")
        member.append(elems)
    # sup Λ_H is the join of the members; closure puts it back inside Λ_H
    sup = []
    for elems in member:
        top = None
        for x in elems:
            top = x if top is None else glattice.join[top][x]
        sup.append(top)
    return SublatticeFamily(glattice, sub_lattice, tuple(member), tuple(sup))


def validate_family(f: SublatticeFamily) -> FamilyReport:
    """Check the four lattice-functor conditions plus sublattice closure.

    (1) Λ_{gH} = g·Λ_H, (2) H fixes Λ_H pointwise, (3) s ∧ sup Λ_K ∈ Λ_K
    for K ≤ H, (4) sup Λ_K ≤ sup Λ_H for K ≤ H; each Λ_H must be a nonempty
    sublattice (closed under ∧ and ∨).  Violations are reported with
    witnesses instead of raising.
    """
    report = FamilyReport()
    lat = f.glattice
    subs = f.subgroup_lattice
    group = subs.group
    n = len(subs)
    for sid in range(n):
        elems = f.member[sid]
        if not elems:
            report.violations.append(("nonempty", sid, None, None))
            continue
        for x in elems:
            for y in elems:
                if lat.meet[x][y] not in elems:
                    report.violations.append(("meet-closed", sid, (x, y), None))
                if lat.join[x][y] not in elems:
                    report.violations.append(("join-closed", sid, (x, y), None))
        if f.sup[sid] not in elems:
            report.violations.append(("sup-member", sid, f.sup[sid], None))
        for g in group.elements():
            gsid = subs.conj_sub[g][sid]
            if frozenset(lat.act(g, x) for x in elems) != f.member[gsid]:
                report.violations.append((1, sid, g, None))
        for h in subs.members(sid):
            for s in elems:
                if lat.act(h, s) != s:
                    report.violations.append((2, sid, h, s))
        for kid in subs.ids_below(sid):
            for s in elems:
                if lat.meet[s][f.sup[kid]] not in f.member[kid]:
                    report.violations.append((3, sid, kid, s))
            if not lat.leq_elems(f.sup[kid], f.sup[sid]):
                report.violations.append((4, sid, kid, None))
    return report


def subgroup_glattice(g: FiniteGroup) -> GLattice:
    """The lattice of all subgroups of g under inclusion, with conjugation action."""
    subs = g.lattice
    n = len(subs)
    leq = [[subs.leq[i][j] for j in range(n)] for i in range(n)]
    labels = ["{" + ",".join(map(str, s.members)) + "}" for s in subs.all]
    poset = FinitePoset(leq, labels)
    action = [tuple(subs.conj_sub[x][i] for i in range(n)) for x in g.elements()]
    return GLattice(poset, action)


def powerset_glattice(group: FiniteGroup, points: int, point_action, cap: int = 12) -> GLattice:
    """Boolean lattice of subsets of a G-set with the induced action.

    point_action[g][x] is the image of point x under group element g.
    """
    if points > cap:
        raise CapExceeded(f"G-set of size {points} exceeds powerset cap {cap}")
    subsets = []
    for mask in range(1 << points):
        subsets.append(frozenset(i for i in range(points) if mask >> i & 1))
    subsets.sort(key=lambda s: (len(s), tuple(sorted(s))))
    index = {s: i for i, s in enumerate(subsets)}
    leq = [[a <= b for b in subsets] for a in subsets]
    labels = ["{" + ",".join(map(str, sorted(s))) + "}" for s in subsets]
    poset = FinitePoset(leq, labels)
    action = [
        tuple(index[frozenset(point_action[g][x] for x in s)] for s in subsets)
        for g in group.elements()
    ]
    # leq preservation holds by construction; full validation only at small sizes
    return GLattice(poset, action, validate=len(subsets) <= 64)
