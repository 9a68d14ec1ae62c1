"""Partial lattice Burnside rings Ω(G, X) over G-closed pair sets.

X is a subset of S(G, M_Λ) closed under conjugation and ordered by
(U, t) ≤ (K, s)  iff  U ≤ K and t ≤ s (in the ambient lattice).  When every
coequalizer target (⟨g⟩U, s_{(g,t)}) has a unique minimal element of X above
it (condition (A)), the span of the representatives in X carries mark and
obstruction maps of its own, and one primitive idempotent per representative
computed from the Möbius function of the poset X.  The section ring over the
slice functor is the motivating instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import INF, det_bareiss, p_part, prime_factors, residue, smith_normal_form
from .errors import ClosureViolated, ConditionAViolated, NotGClosed
from .functors import MonoidFunctor, slice_functor
from .ghost import (
    FundamentalReport,
    ObsVector,
    _weyl_sylow_cosets,
    alpha_phi,
)
from .groups import FiniteGroup, stabilizer_pair
from .posets import FinitePoset, mobius
from .rings import BasisSystem, RingElement, basis_element, basis_system
from .spectra import coequalizer


class PartialSystem:
    """Ω(G, X): the pair set, its representatives, and the overlift table."""

    def __init__(self, bs: BasisSystem, pairs, overlift, subring, subring_witness):
        self.ambient = bs
        self.functor = bs.functor
        self.pairs = frozenset(pairs)
        # X̄ = R(G, M_Λ) ∩ X in the ambient representative order
        self.xreps = tuple(
            pos for pos in range(bs.rank) if bs.reps[pos] in self.pairs
        )
        self.xpos = {pos: i for i, pos in enumerate(self.xreps)}
        self.size = len(self.xreps)
        self.overlift = overlift
        self.subring = subring
        self.subring_witness = subring_witness
        self._marks = None
        self._mu = None

    def labels(self) -> tuple:
        return tuple(self.ambient.label(pos) for pos in self.xreps)

    def overlift_rep(self, pair: tuple) -> int:
        """Local index of the representative of the overlift of a raw target."""
        kid, s = self.overlift[pair]
        return self.xpos[self.ambient.rep_of(kid, s)[0]]

    def __repr__(self):
        return (
            f"PartialSystem({self.functor.name}, size={self.size}, "
            f"subring={self.subring})"
        )


def _pair_leq(bs: BasisSystem, a: tuple, b: tuple) -> bool:
    # (U, t) ≤ (K, s): subgroup containment plus ambient-lattice order
    data = bs.functor.require_lattice()
    (uid, t), (kid, s) = a, b
    return bs.subs.leq[uid][kid] and data.leq(
        data.elems[uid][t], data.elems[kid][s]
    )


def _weyl_coset_reps(bs: BasisSystem, pair: tuple) -> list:
    """Parent-group representatives of the cosets gU in W_G(U, t)."""
    uid, t = pair
    f = bs.functor
    _, w = stabilizer_pair(
        bs.group,
        bs.host,
        bs.subs.subgroup(uid),
        t,
        lambda x, e: f.con(uid, x)[e],
    )
    return [w.coset_reps[c] for c in range(w.order)]


def build_partial(functor: MonoidFunctor, spec) -> PartialSystem:
    """Materialize X, verify G-closure and condition (A), fill the overlift.

    `spec` is either a predicate on pairs (kid, element index) or an
    iterable of such pairs.  Condition (A) is checked exhaustively: every
    pair of X against every coset of its Weyl group; any failure is a
    constructor error carrying the witness.
    """
    functor.require_lattice()
    bs = basis_system(functor)
    universe = set(bs.pairs)
    if callable(spec):
        pairs = {q for q in bs.pairs if spec(*q)}
    else:
        pairs = set(map(tuple, spec))
        for q in pairs:
            if q not in universe:
                raise ValueError(f"pair {q} is not in S(G, M)")

    subs, f = bs.subs, bs.functor
    for kid, s in sorted(pairs):
        for g in bs.host.members:
            image = (subs.conj_sub[g][kid], f.con(kid, g)[s])
            if image not in pairs:
                raise NotGClosed((kid, s), g, image)

    # overlift: raw coequalizer target -> unique minimal element of X above it
    ordered = sorted(pairs)
    overlift = {}
    for pair in ordered:
        for g in _weyl_coset_reps(bs, pair):
            raw = coequalizer(bs, pair, g).target
            if raw in overlift:
                continue
            up = [q for q in ordered if _pair_leq(bs, raw, q)]
            minimal = [
                q
                for q in up
                if not any(r != q and _pair_leq(bs, r, q) for r in up)
            ]
            if len(minimal) != 1:
                raise ConditionAViolated(pair, g, minimal)
            overlift[raw] = minimal[0]

    sup_pair = (bs.hid, f.monoid(bs.hid).identity)
    subring, witness = True, None
    if sup_pair not in pairs:
        subring, witness = False, sup_pair
    else:
        data = f.require_lattice()
        for kid, s in ordered:
            for uid, t in ordered:
                lid = subs.meet_id(kid, uid)
                wedge = data.meet(data.elems[kid][s], data.elems[uid][t])
                q = (lid, data.pos[lid][wedge]) if wedge in data.pos[lid] else None
                if q is None or q not in pairs:
                    subring, witness = False, (lid, wedge)
                    break
            if not subring:
                break
    return PartialSystem(bs, pairs, overlift, subring, witness)


def section_system(g: FiniteGroup) -> PartialSystem:
    """The section ring: slice pairs (K, E) with K normal in E."""
    f = slice_functor(g)
    data = f.require_lattice()
    subs = g.lattice

    def is_section(kid: int, idx: int) -> bool:
        eid = data.elems[kid][idx]
        return kid in subs.normal_ids_in(eid)

    return build_partial(f, is_section)


def partial_marks(ps: PartialSystem):
    """The mark matrix φ_X: counts cosets gH with U ≤ ᵍH and t ≤ ᵍs."""
    if ps._marks is None:
        bs = ps.ambient
        rows = []
        for pos in ps.xreps:
            full = alpha_phi(basis_element(bs, pos)).entries
            rows.append(tuple(int(full[j]) for j in ps.xreps))
        ps._marks = tuple(rows)
    return ps._marks


def partial_moduli(ps: PartialSystem, p) -> tuple:
    return tuple(p_part(ps.ambient.weyl_order(pos), p) for pos in ps.xreps)


def partial_psi_matrix(ps: PartialSystem, p):
    """Integer matrix of ψ_X: each Weyl p-coset adds 1 at its overlift."""
    bs = ps.ambient
    rows = []
    for pos in ps.xreps:
        pair = bs.reps[pos]
        row = [0] * ps.size
        for r in _weyl_sylow_cosets(bs, pos, p):
            raw = coequalizer(bs, pair, r).target
            row[ps.overlift_rep(raw)] += 1
        rows.append(tuple(row))
    return tuple(rows)


def partial_psi(ps: PartialSystem, entries, p) -> ObsVector:
    """ψ_X applied to a ghost vector given as scalars over X̄."""
    if len(entries) != ps.size:
        raise ValueError(f"expected {ps.size} entries, got {len(entries)}")
    mat = partial_psi_matrix(ps, p)
    moduli = partial_moduli(ps, p)
    residues = tuple(
        residue(sum(Fraction(e) * c for e, c in zip(entries, row)), m, p)
        for row, m in zip(mat, moduli)
    )
    return ObsVector(residues, moduli, p)


def verify_partial(ps: PartialSystem, p) -> FundamentalReport:
    """Certify 0 -> Ω(G,X)_(p) -> Ω̃(G,X)_(p) -> Obs(G,X)_(p) -> 0.

    Same certificate battery as the ambient ring: φ_X triangular with
    Weyl-order diagonal, ψ_X∘φ_X = 0, determinant p-part against the moduli
    product, elementary divisors against the moduli, and the unitriangular
    shape of ψ_X that forces surjectivity.
    """
    rep = FundamentalReport(p=p, rank=ps.size)
    mat = partial_marks(ps)
    n = ps.size
    bs = ps.ambient
    rep.note(
        "triangular", all(mat[i][j] == 0 for i in range(n) for j in range(i + 1, n))
    )
    rep.note(
        "diagonal_is_weyl",
        all(mat[i][i] == bs.weyl_order(ps.xreps[i]) for i in range(n)),
    )
    det = det_bareiss(mat)
    rep.det = det
    diag = 1
    for i in range(n):
        diag *= mat[i][i]
    rep.note("det_matches_diagonal", det == diag)
    rep.note("injective", det != 0)

    pmat = partial_psi_matrix(ps, p)
    moduli = partial_moduli(ps, p)
    ok = True
    for i in range(n):
        for j in range(n):
            acc = sum(mat[i][k] * pmat[j][k] for k in range(n))
            if residue(Fraction(acc), moduli[j], p) != 0:
                ok = False
    rep.note("psi_phi_zero", ok)

    prod = 1
    for m in moduli:
        prod *= m
    rep.det_p_part = p_part(det, p) if det else 0
    rep.moduli_product = prod
    rep.note("cokernel_matches", det != 0 and p_part(det, p) == prod)

    divisors = smith_normal_form(mat)
    if p == INF:
        primes = set()
        for v in list(moduli) + list(divisors):
            primes.update(prime_factors(v))
        ok = len(divisors) == n and all(
            sorted(p_part(d, q) for d in divisors)
            == sorted(p_part(m, q) for m in moduli)
            for q in primes
        )
    else:
        ok = len(divisors) == n and sorted(p_part(d, p) for d in divisors) == sorted(
            p_part(m, p) for m in moduli
        )
    rep.note("divisors_match", ok)

    orders = [bs.subs.subgroup(bs.reps[pos][0]).order for pos in ps.xreps]
    rep.note("psi_unit_diagonal", all(pmat[i][i] == 1 for i in range(n)))
    rep.note(
        "psi_triangular",
        all(
            pmat[i][j] == 0
            for i in range(n)
            for j in range(n)
            if j != i and orders[j] <= orders[i]
        ),
    )
    return rep


def partial_multiply(ps: PartialSystem, x: RingElement, y: RingElement) -> RingElement:
    """Multiply in the ambient ring; only defined when X makes a subring."""
    if not ps.subring:
        raise ClosureViolated(ps.subring_witness)
    allowed = set(ps.xreps)
    for z in (x, y):
        for pos in z.coeffs:
            if pos not in allowed:
                raise ClosureViolated(ps.ambient.reps[pos])
    out = x * y
    for pos in out.coeffs:
        if pos not in allowed:
            raise ClosureViolated(ps.ambient.reps[pos])
    return out


def _pair_mobius(ps: PartialSystem):
    """Möbius matrix of the poset (X, ≤), indexed by sorted(X)."""
    if ps._mu is None:
        bs = ps.ambient
        elems = sorted(ps.pairs)
        leq = [[_pair_leq(bs, a, b) for b in elems] for a in elems]
        labels = [f"({kid},{s})" for kid, s in elems]
        ps._mu = (elems, {q: i for i, q in enumerate(elems)}, mobius(FinitePoset(leq, labels)))
    return ps._mu


def partial_idempotents(ps: PartialSystem) -> list[RingElement]:
    """ε_{(K,s)} over Q, one per representative; φ_X(ε) is a delta vector.

    ε_{(K,s)} = |N_G(K,s)|^-1 Σ_{(U,t) ∈ X, ≤ (K,s)} |U| μ_X((U,t),(K,s))
                [(G/U)_t]
    """
    bs = ps.ambient
    elems, index, mu = _pair_mobius(ps)
    out = []
    for pos in ps.xreps:
        kid, s = bs.reps[pos]
        n_order = bs.stab(pos)[0].order
        col = index[(kid, s)]
        coeffs = {}
        for row, (uid, t) in enumerate(elems):
            m = mu[row][col]
            if not m:
                continue
            tgt = bs.index(uid, t)
            c = Fraction(m * bs.subs.subgroup(uid).order, n_order)
            coeffs[tgt] = coeffs.get(tgt, Fraction(0)) + c
        e = RingElement(bs, coeffs)
        for q in e.coeffs:
            if q not in ps.xpos:
                raise ClosureViolated(bs.reps[q])
        out.append(e)
    return out
