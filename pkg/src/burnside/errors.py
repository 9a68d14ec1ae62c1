"""Exception types raised by the burnside package.

Every error message names a concrete witness (a triple, an element, a pair)
so the CLI can surface actionable diagnostics.
"""

from __future__ import annotations


class BurnsideError(Exception):
    """Base class for all domain errors."""


class NotAssociative(BurnsideError):
    def __init__(self, a: int, b: int, c: int):
        self.triple = (a, b, c)
        super().__init__(f"multiplication not associative at triple ({a}, {b}, {c})")


class NoIdentity(BurnsideError):
    def __init__(self):
        super().__init__("table has no two-sided identity element")


class NoInverse(BurnsideError):
    def __init__(self, elem: int):
        self.elem = elem
        super().__init__(f"element {elem} has no two-sided inverse")


class OrderCapExceeded(BurnsideError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"permutation closure exceeded the order cap {cap}")


class InvalidPermutation(BurnsideError):
    def __init__(self, perm, degree: int):
        super().__init__(f"{perm!r} is not a bijection on range({degree})")


class NotSubgroup(BurnsideError):
    def __init__(self, what: str):
        super().__init__(what)


class CapExceeded(BurnsideError):
    def __init__(self, what: str):
        super().__init__(what)


class InvalidFamily(BurnsideError):
    """Sublattice family violating one of the four lattice-functor conditions."""

    def __init__(self, report):
        self.report = report
        first = report.violations[0] if report.violations else None
        super().__init__(f"invalid sublattice family; first violation: {first}")


class ActionNotByHomomorphisms(BurnsideError):
    def __init__(self, what: str):
        super().__init__(what)


class NotAbelian(BurnsideError):
    def __init__(self, name: str, witness):
        super().__init__(f"group {name} is not abelian: witness pair {witness}")


class BasisMismatch(BurnsideError):
    def __init__(self, got=None, expected=None):
        detail = f": got {got}, expected {expected}" if expected is not None else ""
        super().__init__(f"ring elements belong to different basis systems{detail}")


class NotLatticeFunctor(BurnsideError):
    def __init__(self, name: str):
        super().__init__(f"functor {name!r} was not built from a sublattice family")


class DenominatorNotPLocal(BurnsideError):
    def __init__(self, value, p):
        self.value = value
        super().__init__(f"denominator of {value} is not invertible in Z_({p})")


class NotInWeylGroup(BurnsideError):
    def __init__(self, g: int, pair):
        super().__init__(f"element {g} does not stabilize the pair {pair}")


class NotGClosed(BurnsideError):
    def __init__(self, pair, g: int, image):
        self.witness = (pair, g, image)
        super().__init__(
            f"pair set is not closed under the group action: {pair} maps to {image} under {g}"
        )


class ConditionAViolated(BurnsideError):
    def __init__(self, pair, g: int, minimal):
        self.witness = (pair, g, minimal)
        super().__init__(
            f"overlift of {pair} along {g} has no unique minimal element; minimal set {minimal}"
        )


class ClosureViolated(BurnsideError):
    def __init__(self, pair):
        super().__init__(f"product left the partial pair set at {pair}")


class RankCapExceeded(BurnsideError):
    def __init__(self, rank: int, cap: int):
        super().__init__(
            f"unit search over 2^{rank} sign vectors exceeds cap 2^{cap}; "
            "refusing to sample (units must be exhaustive or absent)"
        )
