"""Unit groups of lattice Burnside rings via the ghost-lifting criterion.

A ±1 ghost vector x̃ lifts to a unit of Ω(G, M_Λ) exactly when, for every
representative (U, t), the map γ_{(U,t)}: σ_g ↦ x̃_{(U,t)}·x̃_{(⟨g⟩U, s_{(g,t)})}
is a homomorphism W_G(U,t) -> ⟨-1⟩.  The lift itself is (1/|G|)·ς(β(x̃)).
Unit groups are found by exhaustively filtering all 2^rank sign vectors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .arith import ZZ
from .errors import NotAbelian, RankCapExceeded
from .functors import MonoidFunctor, conormal_functor
from .ghost import GhostVector, alpha_phi, beta, inf_above, sigma_inverse
from .groups import FiniteGroup
from .rings import BasisSystem, RingElement, basis_element, basis_system, one

RANK_CAP = 20


def _gamma_tables(bs: BasisSystem):
    """Index quadruples whose sign products certify every γ homomorphism.

    γ_{(U,t)}(σ_g) = x_{(U,t)} x_{target(g)}, so multiplicativity over the
    pair (g1, g2) reduces (using x² = 1) to
    x_{target(g1)}·x_{target(g2)}·x_{target(g1 g2)}·x_{(U,t)} = 1.
    """

    def build():
        quads = []
        for pos in range(bs.rank):
            uid, t = bs.reps[pos]
            w = bs.weyl(pos)
            targets = []
            for c in range(w.order):
                r = w.coset_reps[c]
                rid = bs.subs.adjoin(uid, r)
                targets.append(bs.rep_of(rid, inf_above(bs, uid, rid, t))[0])
            for c1 in range(w.order):
                for c2 in range(w.order):
                    quads.append(
                        (
                            targets[c1],
                            targets[c2],
                            targets[w.table[c1][c2]],
                            pos,
                        )
                    )
        return tuple(set(quads))

    return bs.__dict__.setdefault("_gamma_quads", build())


def _passes_gamma(signs, quads) -> bool:
    return all(signs[a] * signs[b] * signs[c] * signs[d] == 1 for a, b, c, d in quads)


def lifts(signs, bs: BasisSystem):
    """Whether the ±1 ghost vector lifts to a unit; the unit when it does.

    Returns (False, None) or (True, witness).  The witness is recovered as
    (1/|H|)·ς(β(x̃)) and re-verified: integer coefficients, α∘φ(witness) = x̃,
    and witness² = 1.  Those re-checks are theorems, so a failure raises.
    """
    signs = tuple(int(s) for s in signs)
    if len(signs) != bs.rank or any(s not in (1, -1) for s in signs):
        raise ValueError("ghost unit must be a ±1 vector of full rank")
    bs.functor.require_lattice()
    if not _passes_gamma(signs, _gamma_tables(bs)):
        return False, None
    y = beta(GhostVector(bs, signs))
    witness = sigma_inverse(y) * Fraction(1, bs.host.order)
    witness = witness.in_domain(ZZ)
    if list(alpha_phi(witness).entries) != list(signs):
        raise AssertionError("recovered unit does not project back to its signs")
    if witness * witness != one(bs):
        raise AssertionError("recovered unit does not square to 1")
    return True, witness


@dataclass
class UnitGroup:
    """All units of Ω(G, M_Λ), an elementary abelian 2-group."""

    units: list  # RingElements, in lexicographic sign order
    signs: list  # the matching ±1 ghost vectors
    generators: list  # a minimal generating subset of `units`
    order: int
    rank: int  # order = 2^rank


def unit_group(bs: BasisSystem, cap: int = RANK_CAP) -> UnitGroup:
    """Exhaustive unit search over all ±1 ghost vectors.

    Refuses (rather than samples) above the rank cap: unit groups are only
    reported when they are provably complete.
    """
    if bs.rank > cap:
        raise RankCapExceeded(bs.rank, cap)
    quads = _gamma_tables(bs)
    units = []
    signs_found = []
    for signs in itertools.product((1, -1), repeat=bs.rank):
        if _passes_gamma(signs, quads):
            ok, witness = lifts(signs, bs)
            units.append(witness)
            signs_found.append(signs)
    # F2 span bookkeeping: sign vector -> bit vector, echelon basis by top bit
    pivot = {}
    generators = []
    for signs, u in zip(signs_found, units):
        cur = sum(1 << i for i, s in enumerate(signs) if s == -1)
        while cur:
            msb = cur.bit_length() - 1
            if msb in pivot:
                cur ^= pivot[msb]
            else:
                pivot[msb] = cur
                generators.append(u)
                break
    order = len(units)
    rank = order.bit_length() - 1
    if 2**rank != order or len(generators) != rank:
        raise AssertionError("unit group is not elementary abelian of 2-power order")
    return UnitGroup(units, signs_found, generators, order, rank)


def theta(g: FiniteGroup) -> int:
    """θ(G) = #{(H, U) : |G:H| = 2, U ≤ H} for abelian G."""
    subs = g.lattice
    count = 0
    for hid in range(len(subs)):
        if 2 * subs.subgroup(hid).order == g.order:
            count += len(subs.ids_below(hid))
    return count


def abelian_conormal_generators(g: FiniteGroup, functor: MonoidFunctor | None = None):
    """Generators of Ω(G, M_S°)^× for abelian G: -1 and the θ(G) elements
    [(G/H)_U] - [(G/G)_G] over index-2 subgroups H and U ≤ H."""
    if not g.is_abelian():
        witness = next(
            (x, y)
            for x in g.elements()
            for y in g.elements()
            if g.mul(x, y) != g.mul(y, x)
        )
        raise NotAbelian(g.name, witness)
    if functor is None:
        functor = conormal_functor(g)
    bs = basis_system(functor)
    data = functor.require_lattice()
    subs = g.lattice
    identity = one(bs)
    out = [-identity]
    for hid in range(len(subs)):
        if 2 * subs.subgroup(hid).order != g.order:
            continue
        for u_elem in range(functor.monoid(hid).size):
            pos = bs.index(hid, u_elem)
            out.append(basis_element(bs, pos) - identity)
    return out
