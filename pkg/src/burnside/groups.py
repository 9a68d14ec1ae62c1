"""Finite groups as explicit multiplication tables, with subgroup machinery.

Elements are integers 0..order-1 indexing rows of a Cayley table.  All
subgroup-level structure (the full subgroup lattice, conjugacy fusion,
double cosets, quotients, Sylow subgroups, p-residuals) is materialized
eagerly at desk scale and cached on the group object.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from math import gcd

from .arith import INF, p_part
from .errors import (
    InvalidPermutation,
    NoIdentity,
    NoInverse,
    NotAssociative,
    NotSubgroup,
    OrderCapExceeded,
)

ASSOC_EXHAUSTIVE_LIMIT = 256
PERM_ORDER_CAP = 5040


class FiniteGroup:
    """A finite group given by its Cayley table."""

    def __init__(self, table, name: str):
        self.table = tuple(tuple(row) for row in table)
        self.name = name
        self.order = len(self.table)
        n = self.order
        for row in self.table:
            if len(row) != n or any(not (0 <= x < n) for x in row):
                raise ValueError(f"{name}: table is not a square array of element indices")
        self.identity = self._find_identity()
        self.inverses = self._find_inverses()
        self._check_associativity()

    def _find_identity(self) -> int:
        n = self.order
        for e in range(n):
            if all(self.table[e][x] == x and self.table[x][e] == x for x in range(n)):
                return e
        raise NoIdentity()

    def _find_inverses(self) -> tuple[int, ...]:
        n, e = self.order, self.identity
        inv = []
        for x in range(n):
            y = next(
                (y for y in range(n) if self.table[x][y] == e and self.table[y][x] == e),
                None,
            )
            if y is None:
                raise NoInverse(x)
            inv.append(y)
        return tuple(inv)

    def _check_associativity(self):
        n, t = self.order, self.table
        if n <= ASSOC_EXHAUSTIVE_LIMIT:
            triples = itertools.product(range(n), repeat=3)
        else:
            rng = random.Random(0)
            triples = (
                (rng.randrange(n), rng.randrange(n), rng.randrange(n))
                for _ in range(20000)
            )
        for a, b, c in triples:
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise NotAssociative(a, b, c)

    # -- element arithmetic -------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def conj(self, g: int, x: int) -> int:
        """gxg^{-1}."""
        return self.table[self.table[g][x]][self.inverses[g]]

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.table[y][x]
            k += 1
        return k

    def commutator(self, a: int, b: int) -> int:
        """a b a^{-1} b^{-1}."""
        t = self.table
        return t[t[t[a][b]][self.inverses[a]]][self.inverses[b]]

    def generated(self, seed) -> tuple[int, ...]:
        """Sorted member tuple of the subgroup generated by seed."""
        members = {self.identity}
        frontier = [self.identity]
        gens = list(seed)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.table[x][g]
                if y not in members:
                    members.add(y)
                    frontier.append(y)
        return tuple(sorted(members))

    def is_abelian(self) -> bool:
        return all(
            self.table[a][b] == self.table[b][a]
            for a in range(self.order)
            for b in range(a)
        )

    @cached_property
    def lattice(self) -> "SubgroupLattice":
        return SubgroupLattice(self)

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"


@dataclass(frozen=True)
class Subgroup:
    """One subgroup: sorted member tuple plus its index in the canonical list."""

    id: int
    members: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)


class SubgroupLattice:
    """All subgroups of a group, canonically ordered, with conjugacy fusion.

    Enumeration is by cyclic extension: grow each known subgroup by adjoining
    one element and closing, starting from the trivial subgroup.  Canonical
    order is (order, member tuple); every representative notion downstream
    (conjugacy classes, basis pairs, double cosets) bottoms out in this order.
    """

    def __init__(self, group: FiniteGroup):
        self.group = group
        members_seen = {(group.identity,)}
        queue = [(group.identity,)]
        while queue:
            cur = queue.pop()
            cur_set = set(cur)
            for x in group.elements():
                if x in cur_set:
                    continue
                new = group.generated(cur + (x,))
                if new not in members_seen:
                    members_seen.add(new)
                    queue.append(new)
        ordered = sorted(members_seen, key=lambda m: (len(m), m))
        self.all = tuple(Subgroup(i, m) for i, m in enumerate(ordered))
        self.id_of = {s.members: s.id for s in self.all}
        self._member_sets = [frozenset(s.members) for s in self.all]
        n = len(self.all)
        self.leq = [
            [self._member_sets[i] <= self._member_sets[j] for j in range(n)]
            for i in range(n)
        ]
        # conjugation permutation of subgroup ids, one row per group element
        self.conj_sub = tuple(
            tuple(
                self.id_of[tuple(sorted(group.conj(g, x) for x in s.members))]
                for s in self.all
            )
            for g in group.elements()
        )
        rep = list(range(n))
        for i in range(n):
            orbit = {self.conj_sub[g][i] for g in group.elements()}
            m = min(orbit)
            for j in orbit:
                rep[j] = min(rep[j], m)
        self.class_rep = tuple(rep)
        self.classes = tuple(sorted(set(rep)))
        self._join_cache: dict[tuple[int, int], int] = {}

    def __len__(self):
        return len(self.all)

    def subgroup(self, sid: int) -> Subgroup:
        return self.all[sid]

    def members(self, sid: int) -> tuple[int, ...]:
        return self.all[sid].members

    def member_set(self, sid: int) -> frozenset:
        return self._member_sets[sid]

    def top(self) -> Subgroup:
        return self.all[-1]

    def trivial(self) -> Subgroup:
        return self.all[0]

    def meet_id(self, i: int, j: int) -> int:
        return self.id_of[tuple(sorted(self._member_sets[i] & self._member_sets[j]))]

    def join_id(self, i: int, j: int) -> int:
        key = (i, j) if i <= j else (j, i)
        out = self._join_cache.get(key)
        if out is None:
            out = self.id_of[self.group.generated(self.all[i].members + self.all[j].members)]
            self._join_cache[key] = out
        return out

    @cached_property
    def _below(self) -> tuple[tuple[int, ...], ...]:
        n = len(self.all)
        return tuple(
            tuple(i for i in range(n) if self.leq[i][j]) for j in range(n)
        )

    def ids_below(self, sid: int) -> tuple[int, ...]:
        """Ids of all subgroups contained in subgroup sid."""
        return self._below[sid]

    def normal_ids_in(self, sid: int) -> tuple[int, ...]:
        """Ids of subgroups normal in subgroup sid."""
        h = self.all[sid].members
        return tuple(
            i
            for i in self.ids_below(sid)
            if all(self.conj_sub[g][i] == i for g in h)
        )

    def adjoin(self, sid: int, g: int) -> int:
        """Id of ⟨g⟩U for U the subgroup sid."""
        return self.id_of[self.group.generated(self.all[sid].members + (g,))]


def group_from_cayley(table, name: str) -> FiniteGroup:
    return FiniteGroup(table, name)


def _compose(p, q):
    return tuple(p[q[i]] for i in range(len(p)))


def group_from_permutations(degree: int, generators, name: str,
                            cap: int = PERM_ORDER_CAP) -> FiniteGroup:
    """Close a generating set of permutations of range(degree) into a group.

    Element 0 is the identity; the rest appear in BFS discovery order.
    """
    gens = [tuple(g) for g in generators]
    for g in gens:
        if sorted(g) != list(range(degree)):
            raise InvalidPermutation(g, degree)
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    frontier = deque([ident])
    while frontier:
        cur = frontier.popleft()
        for g in gens:
            new = _compose(cur, g)
            if new not in index:
                if len(elems) >= cap:
                    raise OrderCapExceeded(cap)
                index[new] = len(elems)
                elems.append(new)
                frontier.append(new)
    table = [
        [index[_compose(a, b)] for b in elems]
        for a in elems
    ]
    return FiniteGroup(table, name)


def _quaternion_table():
    # elements (sign, letter): 1, -1, i, -i, j, -j, k, -k
    letters = "1ijk"
    mul1 = {}
    for x in letters:
        mul1[("1", x)] = (1, x)
        mul1[(x, "1")] = (1, x)
    for x in "ijk":
        mul1[(x, x)] = (-1, "1")
    for a, b, c in [("i", "j", "k"), ("j", "k", "i"), ("k", "i", "j")]:
        mul1[(a, b)] = (1, c)
        mul1[(b, a)] = (-1, c)
    elems = [(s, x) for x in letters for s in (1, -1)]
    elems.sort(key=lambda e: (e[1] != "1", e[1], e[0] < 0))
    idx = {e: i for i, e in enumerate(elems)}
    table = []
    for sa, xa in elems:
        row = []
        for sb, xb in elems:
            s, x = mul1[(xa, xb)]
            row.append(idx[(sa * sb * s, x)])
        table.append(row)
    return table


def builtin_group(name: str) -> FiniteGroup:
    """Construct one of the named small groups.

    Supported: C<n>, D<n> (order 2n), S<n> for n ≤ 4, A4, Q8, C2xC2.
    """
    if name == "Q8":
        return FiniteGroup(_quaternion_table(), "Q8")
    if name == "C2xC2":
        return group_from_permutations(4, [(1, 0, 2, 3), (0, 1, 3, 2)], "C2xC2")
    if name == "A4":
        return group_from_permutations(4, [(1, 2, 0, 3), (1, 0, 3, 2)], "A4")
    if name.startswith("C") and name[1:].isdigit():
        n = int(name[1:])
        if n < 1:
            raise ValueError(f"bad cyclic order in {name!r}")
        table = [[(a + b) % n for b in range(n)] for a in range(n)]
        return FiniteGroup(table, name)
    if name.startswith("D") and name[1:].isdigit():
        n = int(name[1:])
        if n == 1:
            return FiniteGroup([[0, 1], [1, 0]], "D1")
        if n == 2:
            g = group_from_permutations(4, [(1, 0, 2, 3), (0, 1, 3, 2)], "D2")
            return g
        rot = tuple((i + 1) % n for i in range(n))
        ref = tuple((n - i) % n for i in range(n))
        return group_from_permutations(n, [rot, ref], name)
    if name.startswith("S") and name[1:].isdigit():
        n = int(name[1:])
        if n > 4:
            raise ValueError("symmetric groups only up to S4")
        if n <= 1:
            return FiniteGroup([[0]], name)
        cycle = tuple((i + 1) % n for i in range(n))
        swap = tuple([1, 0] + list(range(2, n)))
        return group_from_permutations(n, [cycle, swap], name)
    raise ValueError(f"unknown builtin group {name!r}")


def subgroups(g: FiniteGroup) -> SubgroupLattice:
    return g.lattice


def double_cosets(g: FiniteGroup, h: Subgroup, k: Subgroup, u: Subgroup) -> list[int]:
    """Minimal representatives of the double cosets K\\h/U, in increasing order."""
    hset = set(h.members)
    if not set(k.members) <= hset or not set(u.members) <= hset:
        raise NotSubgroup(f"{k.members} or {u.members} not inside {h.members}")
    covered = set()
    reps = []
    for x in h.members:
        if x in covered:
            continue
        reps.append(x)
        for a in k.members:
            ax = g.mul(a, x)
            for b in u.members:
                covered.add(g.mul(ax, b))
    return reps


@dataclass(frozen=True)
class QuotientGroup:
    """N/K as an explicit coset table; cosets are indexed by minimal reps."""

    parent: FiniteGroup
    numerator: Subgroup
    kernel: Subgroup
    coset_reps: tuple[int, ...]
    table: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.coset_reps)

    @cached_property
    def as_group(self) -> FiniteGroup:
        return FiniteGroup(self.table, f"{self.parent.name}-quotient")


def quotient(g: FiniteGroup, n: Subgroup, k: Subgroup) -> QuotientGroup:
    kset = frozenset(k.members)
    if not kset <= set(n.members):
        raise NotSubgroup(f"{k.members} not inside {n.members}")
    for x in n.members:
        if frozenset(g.conj(x, a) for a in k.members) != kset:
            raise NotSubgroup(f"kernel {k.members} not normal in {n.members}: witness {x}")
    coset_of = {}
    reps = []
    for x in n.members:
        if x in coset_of:
            continue
        idx = len(reps)
        reps.append(x)
        for a in k.members:
            coset_of[g.mul(x, a)] = idx
    table = tuple(
        tuple(coset_of[g.mul(a, b)] for b in reps) for a in reps
    )
    return QuotientGroup(g, n, k, tuple(reps), table)


def stabilizer_pair(g: FiniteGroup, h: Subgroup, k: Subgroup, s, action):
    """N_H(K,s) = {x ∈ H : ˣK = K, x·s = s} and the quotient W = N_H(K,s)/K.

    action(x, s) must implement the monoid-functor conjugation on s.
    """
    kset = frozenset(k.members)
    members = tuple(
        x
        for x in h.members
        if frozenset(g.conj(x, a) for a in k.members) == kset and action(x, s) == s
    )
    n_sub = Subgroup(g.lattice.id_of[members], members)
    return n_sub, quotient(g, n_sub, k)


def sylow_subgroup(w: QuotientGroup, p) -> Subgroup:
    """A Sylow p-subgroup of W (all of W when p = inf), deterministically chosen."""
    wg = w.as_group
    if p == INF:
        return wg.lattice.top()
    target = p_part(wg.order, p)
    for s in wg.lattice.all:
        if s.order == target:
            return s
    raise AssertionError("Sylow subgroup must exist")


def all_sylow_subgroups(w: QuotientGroup, p) -> list[Subgroup]:
    wg = w.as_group
    if p == INF:
        return [wg.lattice.top()]
    target = p_part(wg.order, p)
    return [s for s in wg.lattice.all if s.order == target]


def p_residual(g: FiniteGroup, k: Subgroup, p) -> Subgroup:
    """O^p(K): smallest normal subgroup of K with p-group quotient.

    For finite p this is the subgroup generated by the p'-elements of K; for
    p = inf it is the limit of the derived series (the solvable residual).
    """
    if p == INF:
        cur = k.members
        while True:
            nxt = g.generated(
                g.commutator(a, b) for a in cur for b in cur
            )
            if nxt == cur:
                break
            cur = nxt
        members = cur
    else:
        members = g.generated(
            x for x in k.members if gcd(g.element_order(x), p) == 1
        )
    return g.lattice.subgroup(g.lattice.id_of[members])
