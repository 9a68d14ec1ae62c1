"""Burnside rings Ω(H, M): basis enumeration, products, Green operations.

The basis of Ω(H, M) is the set of H-orbit representatives of pairs
(K, s) with K <= H and s in M(K), ordered by (subgroup id, element index).
Products come from the double coset formula; all structure constants are
cached on the `BasisSystem`.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import QQ, ZZ, Domain, fmt_rat, join_domain, parse_rat
from .errors import BasisMismatch, NotSubgroup
from .functors import MonoidFunctor
from .groups import double_cosets, stabilizer_pair

ASSOC_RANK_LIMIT = 12
ASSOC_SAMPLES = 200


class BasisSystem:
    """Basis bookkeeping for Ω(H, M) over one host subgroup H."""

    def __init__(self, functor: MonoidFunctor, hid: int):
        self.functor = functor
        self.group = functor.group
        self.subs = functor.subs
        self.hid = hid
        self.host = self.subs.subgroup(hid)
        g = self.group
        pairs = [
            (kid, s)
            for kid in self.subs.ids_below(hid)
            for s in range(functor.monoid(kid).size)
        ]
        self.pairs = tuple(pairs)
        to_rep = {}
        reps = []
        orbits = []
        for base in pairs:
            if base in to_rep:
                continue
            # base is minimal in its orbit because pairs are scanned in order;
            # carry[q] conjugates base to q
            carry = {base: g.identity}
            queue = [base]
            while queue:
                cur = queue.pop()
                kid, s = cur
                for h in self.host.members:
                    img = (self.subs.conj_sub[h][kid], functor.con(kid, h)[s])
                    if img not in carry:
                        carry[img] = g.mul(h, carry[cur])
                        queue.append(img)
            pos = len(reps)
            reps.append(base)
            orbits.append(tuple(sorted(carry)))
            for q, c in carry.items():
                to_rep[q] = (pos, g.inv(c))
        self.reps = tuple(reps)
        self.rank = len(reps)
        self.orbits = tuple(orbits)
        self._to_rep = to_rep
        self._mul_memo = {}
        self._stab_memo = {}
        payload = repr((g.name, g.order, functor.name, hid, self.reps, self.pairs))
        self.signature = hashlib.sha256(payload.encode()).hexdigest()[:16]

    def rep_of(self, kid: int, s: int):
        """(position, h) with h·(kid, s) landing on the stored representative."""
        return self._to_rep[(kid, s)]

    def index(self, kid: int, s: int) -> int:
        return self._to_rep[(kid, s)][0]

    def stab(self, pos: int):
        """N_H(K, s) and W_H(K, s) = N_H(K, s)/K for the pos-th representative."""
        out = self._stab_memo.get(pos)
        if out is None:
            kid, s = self.reps[pos]
            f = self.functor
            out = stabilizer_pair(
                self.group,
                self.host,
                self.subs.subgroup(kid),
                s,
                lambda x, t: f.con(kid, x)[t],
            )
            self._stab_memo[pos] = out
        return out

    def weyl(self, pos: int):
        return self.stab(pos)[1]

    def weyl_order(self, pos: int) -> int:
        return self.stab(pos)[1].order

    def label(self, pos: int) -> str:
        kid, s = self.reps[pos]
        name = self.functor.monoid(kid).labels[s]
        return f"[(S{self.hid}/S{kid})_{name}]"

    def product_coeffs(self, i: int, j: int) -> dict:
        """Structure constants of reps[i]·reps[j] as {position: multiplicity}."""
        key = (i, j)
        out = self._mul_memo.get(key)
        if out is None:
            f = self.functor
            subs = self.subs
            kid, s = self.reps[i]
            uid, t = self.reps[j]
            acc = {}
            for h in double_cosets(
                self.group, self.host, subs.subgroup(kid), subs.subgroup(uid)
            ):
                hu = subs.conj_sub[h][uid]
                lid = subs.meet_id(kid, hu)
                left = f.res(lid, kid)[s]
                right = f.res(lid, hu)[f.con(uid, h)[t]]
                pos = self.index(lid, f.monoid(lid).mul(left, right))
                acc[pos] = acc.get(pos, 0) + 1
            out = acc
            self._mul_memo[key] = out
        return out

    def __repr__(self):
        return f"BasisSystem({self.functor.name}, host=S{self.hid}, rank={self.rank})"


def basis_system(functor: MonoidFunctor, hid: int | None = None) -> BasisSystem:
    """The memoized basis system of Ω(H, M); H defaults to the whole group."""
    if hid is None:
        hid = len(functor.subs) - 1
    cache = functor.__dict__.setdefault("_basis_systems", {})
    if hid not in cache:
        cache[hid] = BasisSystem(functor, hid)
    return cache[hid]


class RingElement:
    """A sparse exact-coefficient element of Ω(H, M)."""

    __slots__ = ("basis", "coeffs", "domain")

    def __init__(self, basis: BasisSystem, coeffs, domain: Domain | None = None):
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        clean = {}
        for pos, c in items:
            c = Fraction(c)
            if not 0 <= pos < basis.rank:
                raise IndexError(f"basis position {pos} outside rank {basis.rank}")
            if c:
                clean[pos] = clean.get(pos, Fraction(0)) + c
        clean = {pos: c for pos, c in sorted(clean.items()) if c}
        if domain is None:
            domain = ZZ if all(c.denominator == 1 for c in clean.values()) else QQ
        for c in clean.values():
            domain.check(c)
        self.basis = basis
        self.coeffs = clean
        self.domain = domain

    # -- ring structure -----------------------------------------------------

    def _assert_same(self, other: "RingElement"):
        if self.basis.signature != other.basis.signature:
            raise BasisMismatch(self.basis.signature, other.basis.signature)

    def __add__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        self._assert_same(other)
        out = dict(self.coeffs)
        for pos, c in other.coeffs.items():
            out[pos] = out.get(pos, Fraction(0)) + c
        return RingElement(self.basis, out, join_domain(self.domain, other.domain))

    def __sub__(self, other):
        return self.__add__(-other)

    def __neg__(self):
        return RingElement(
            self.basis, {p: -c for p, c in self.coeffs.items()}, self.domain
        )

    def __mul__(self, other):
        if isinstance(other, RingElement):
            self._assert_same(other)
            out = {}
            bs = self.basis
            for i, ci in self.coeffs.items():
                for j, cj in other.coeffs.items():
                    w = ci * cj
                    for pos, mult in bs.product_coeffs(i, j).items():
                        out[pos] = out.get(pos, Fraction(0)) + w * mult
            return RingElement(bs, out, join_domain(self.domain, other.domain))
        scalar = Fraction(other)
        out = {p: c * scalar for p, c in self.coeffs.items()}
        return RingElement(self.basis, out, _fit_domain(self.domain, out.values()))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        return self.__mul__(Fraction(1, 1) / Fraction(other))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined here")
        out = one(self.basis)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return (
            self.basis.signature == other.basis.signature
            and self.coeffs == other.coeffs
        )

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    __hash__ = None

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, pos: int) -> Fraction:
        return self.coeffs.get(pos, Fraction(0))

    def in_domain(self, domain: Domain) -> "RingElement":
        return RingElement(self.basis, self.coeffs, domain)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for pos, c in self.coeffs.items():
            mag = fmt_rat(abs(c))
            term = self.basis.label(pos) if abs(c) == 1 else f"{mag}·{self.basis.label(pos)}"
            parts.append(("-" if c < 0 else "+") + " " + term)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def to_json(self) -> dict:
        return {
            "basis": self.basis.signature,
            "coeffs": {str(p): fmt_rat(c) for p, c in self.coeffs.items()},
        }


def element_from_json(basis: BasisSystem, obj: dict) -> RingElement:
    if obj.get("basis") != basis.signature:
        raise BasisMismatch(obj.get("basis"), basis.signature)
    coeffs = {int(p): parse_rat(v) for p, v in obj.get("coeffs", {}).items()}
    return RingElement(basis, coeffs)


def _fit_domain(base: Domain, values) -> Domain:
    if all(base.admits(v) for v in values):
        return base
    return QQ


def zero(bs: BasisSystem) -> RingElement:
    return RingElement(bs, {})

def one(bs: BasisSystem) -> RingElement:
    """The identity [(H/H)_1] with 1 the monoid identity of M(H)."""
    pos = bs.index(bs.hid, bs.functor.monoid(bs.hid).identity)
    return RingElement(bs, {pos: Fraction(1)})

def basis_element(bs: BasisSystem, pos: int) -> RingElement:
    return RingElement(bs, {pos: Fraction(1)})


# -- Green operations -------------------------------------------------------


def conjugate(x: RingElement, g: int) -> RingElement:
    """con_H^g: Ω(H, M) -> Ω(gHg^-1, M)."""
    bs = x.basis
    f = bs.functor
    tgt = basis_system(f, bs.subs.conj_sub[g][bs.hid])
    out = {}
    for pos, c in x.coeffs.items():
        kid, s = bs.reps[pos]
        p2 = tgt.index(bs.subs.conj_sub[g][kid], f.con(kid, g)[s])
        out[p2] = out.get(p2, Fraction(0)) + c
    return RingElement(tgt, out, x.domain)


def restrict(x: RingElement, kid: int) -> RingElement:
    """res_K^H: Ω(H, M) -> Ω(K, M) by the double coset expansion."""
    bs = x.basis
    f, subs = bs.functor, bs.subs
    if not subs.leq[kid][bs.hid]:
        raise NotSubgroup(f"S{kid} is not contained in S{bs.hid}")
    tgt = basis_system(f, kid)
    k = subs.subgroup(kid)
    out = {}
    for pos, c in x.coeffs.items():
        uid, t = bs.reps[pos]
        for h in double_cosets(bs.group, bs.host, k, subs.subgroup(uid)):
            hu = subs.conj_sub[h][uid]
            lid = subs.meet_id(kid, hu)
            tt = f.res(lid, hu)[f.con(uid, h)[t]]
            p2 = tgt.index(lid, tt)
            out[p2] = out.get(p2, Fraction(0)) + c
    return RingElement(tgt, out, x.domain)


def induce(x: RingElement, hid: int) -> RingElement:
    """ind_K^H: Ω(K, M) -> Ω(H, M), [(K/L)_s] ↦ [(H/L)_s]."""
    bs = x.basis
    subs = bs.subs
    if not subs.leq[bs.hid][hid]:
        raise NotSubgroup(f"S{bs.hid} is not contained in S{hid}")
    tgt = basis_system(bs.functor, hid)
    out = {}
    for pos, c in x.coeffs.items():
        lid, s = bs.reps[pos]
        p2 = tgt.index(lid, s)
        out[p2] = out.get(p2, Fraction(0)) + c
    return RingElement(tgt, out, x.domain)


# -- Green functor axioms ---------------------------------------------------


@dataclass
class GreenReport:
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def note(self, ok: bool, tag):
        self.checked += 1
        if not ok:
            self.violations.append(tag)


def _small_generators(group) -> list:
    """A short generating sequence, greedily grown from the smallest elements."""
    gens = []
    have = (group.identity,)
    for x in group.elements():
        if x not in have:
            gens.append(x)
            have = group.generated(gens)
            if len(have) == group.order:
                break
    return gens


def axiom_report(
    functor: MonoidFunctor, rng_seed: int = 0, assoc_limit: int | None = ASSOC_RANK_LIMIT
) -> GreenReport:
    """Check the Green functor axioms on every Ω(H, M) for H <= G.

    Unit, commutativity, and Mackey/Frobenius identities are exhaustive;
    associativity is exhaustive up to rank assoc_limit (None: always) and
    seeded-random above; conjugation multiplicativity runs over a generating
    set (the composition law, checked against every group element, carries
    it to all of G).
    """
    group, subs = functor.group, functor.subs
    rep = GreenReport()
    gens = _small_generators(group)
    for hid in range(len(subs)):
        bs = basis_system(functor, hid)
        e = one(bs)
        els = [basis_element(bs, i) for i in range(bs.rank)]
        for i, x in enumerate(els):
            rep.note(e * x == x and x * e == x, ("G.1-identity", hid, i))
            for j in range(i):
                rep.note(
                    x * els[j] == els[j] * x, ("G.1-commutative", hid, i, j)
                )
        if assoc_limit is None or bs.rank <= assoc_limit:
            triples = [
                (i, j, k)
                for i in range(bs.rank)
                for j in range(bs.rank)
                for k in range(bs.rank)
            ]
        else:
            rng = random.Random(rng_seed)
            triples = [
                (
                    rng.randrange(bs.rank),
                    rng.randrange(bs.rank),
                    rng.randrange(bs.rank),
                )
                for _ in range(ASSOC_SAMPLES)
            ]
        for i, j, k in triples:
            rep.note(
                (els[i] * els[j]) * els[k] == els[i] * (els[j] * els[k]),
                ("G.1-associative", hid, i, j, k),
            )
        for h in bs.host.members:
            for x in els:
                rep.note(conjugate(x, h) == x, ("G.2-inner-trivial", hid, h))
        for g in gens:
            ghid = subs.conj_sub[g][hid]
            tgt = basis_system(functor, ghid)
            rep.note(conjugate(e, g) == one(tgt), ("G.2-unit", hid, g))
            for i, x in enumerate(els):
                for j in range(i + 1):
                    rep.note(
                        conjugate(x * els[j], g) == conjugate(x, g) * conjugate(els[j], g),
                        ("G.2-multiplicative", hid, g, i, j),
                    )
            for r in group.elements():
                rhid = subs.conj_sub[r][hid]
                gr = group.mul(g, r)
                for x in els:
                    rep.note(
                        conjugate(conjugate(x, r), g) == conjugate(x, gr),
                        ("G.2-composition", hid, g, r),
                    )
        for kid in subs.ids_below(hid):
            tgt = basis_system(functor, kid)
            rep.note(restrict(e, kid) == one(tgt), ("G.3-unit", hid, kid))
            for i, x in enumerate(els):
                for j in range(i + 1):
                    rep.note(
                        restrict(x * els[j], kid)
                        == restrict(x, kid) * restrict(els[j], kid),
                        ("G.3-multiplicative", hid, kid, i, j),
                    )
                for lid in subs.ids_below(kid):
                    rep.note(
                        restrict(restrict(x, kid), lid) == restrict(x, lid),
                        ("G.3-transitive", hid, kid, lid, i),
                    )
            for lid in subs.ids_below(kid):
                low = basis_system(functor, lid)
                for z_pos in range(low.rank):
                    z = basis_element(low, z_pos)
                    rep.note(
                        induce(induce(z, kid), hid) == induce(z, hid),
                        ("G.4-transitive", hid, kid, lid, z_pos),
                    )
            for g in gens:
                gk = subs.conj_sub[g][kid]
                gh = subs.conj_sub[g][hid]
                for x in els:
                    rep.note(
                        conjugate(restrict(x, kid), g)
                        == restrict(conjugate(x, g), gk),
                        ("G.5-res-con", hid, kid, g),
                    )
                for y_pos in range(tgt.rank):
                    y = basis_element(tgt, y_pos)
                    rep.note(
                        conjugate(induce(y, hid), g) == induce(conjugate(y, g), gh),
                        ("G.5-ind-con", hid, kid, g, y_pos),
                    )
        for kid in subs.ids_below(hid):
            for uid in subs.ids_below(hid):
                src = basis_system(functor, uid)
                for y_pos in range(src.rank):
                    y = basis_element(src, y_pos)
                    lhs = restrict(induce(y, hid), kid)
                    rhs = zero(basis_system(functor, kid))
                    for h in double_cosets(
                        group, bs.host, subs.subgroup(kid), subs.subgroup(uid)
                    ):
                        hu = subs.conj_sub[h][uid]
                        lid = subs.meet_id(kid, hu)
                        rhs = rhs + induce(restrict(conjugate(y, h), lid), kid)
                    rep.note(lhs == rhs, ("G.6-mackey", hid, kid, uid, y_pos))
        for uid in subs.ids_below(hid):
            src = basis_system(functor, uid)
            for i, x in enumerate(els):
                for y_pos in range(src.rank):
                    y = basis_element(src, y_pos)
                    rep.note(
                        x * induce(y, hid) == induce(restrict(x, uid) * y, hid),
                        ("G.7-frobenius", hid, uid, i, y_pos),
                    )
    return rep
