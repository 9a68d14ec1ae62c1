"""Exact scalar and integer-matrix arithmetic.

Everything in this package computes over Z, Q, or the localization Z_(p);
floats never appear.  p = "inf" denotes the localization at infinity, i.e.
Z itself: the infinite prime behaves like "no localization".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DenominatorNotPLocal

INF = "inf"


def parse_p(text):
    """Parse a CLI/JSON prime: a positive prime integer or the string "inf"."""
    if text in (INF, None):
        return INF
    p = int(text)
    if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise ValueError(f"{text!r} is not a prime or 'inf'")
    return p


def p_part(n: int, p) -> int:
    """Largest power of p dividing n; the full |n| when p = inf."""
    n = abs(n)
    if n == 0:
        raise ValueError("p-part of 0 is undefined")
    if p == INF:
        return n
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of |n|, ascending."""
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class Domain:
    """Scalar domain tag: Z, Q, or Z_(p) for a finite prime p."""

    kind: str  # "Z" | "Q" | "Zp"
    p: int | None = None

    def admits(self, x: Fraction) -> bool:
        if self.kind == "Z":
            return x.denominator == 1
        if self.kind == "Zp":
            return gcd(x.denominator, self.p) == 1
        return True

    def check(self, x: Fraction) -> Fraction:
        if not self.admits(x):
            raise DenominatorNotPLocal(x, self.p if self.kind == "Zp" else 0)
        return x

    def __str__(self):
        return {"Z": "Z", "Q": "Q"}.get(self.kind, f"Z_({self.p})")


ZZ = Domain("Z")
QQ = Domain("Q")


def local_domain(p) -> Domain:
    """Z_(p) for a finite prime, Z for the infinite one."""
    return ZZ if p == INF else Domain("Zp", p)


def join_domain(a: Domain, b: Domain) -> Domain:
    if a == b:
        return a
    if QQ in (a, b):
        return QQ
    if a.kind == "Z":
        return b
    if b.kind == "Z":
        return a
    return QQ  # distinct finite localizations


def fmt_rat(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(text: str) -> Fraction:
    return Fraction(text)


def residue(x, modulus: int, p) -> int:
    """Image of x in Z_(p)/(modulus), as an integer in [0, modulus).

    The modulus is |W_p|, a p-power for finite p, so any denominator coprime
    to p is invertible mod the modulus.  For p = inf the scalar must be an
    honest integer.
    """
    if modulus == 1:
        return 0
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    if den != 1 and (p == INF or gcd(den, p) != 1):
        raise DenominatorNotPLocal(x, p)
    if den == 1:
        return num % modulus
    return num * pow(den, -1, modulus) % modulus


def det_bareiss(matrix) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(matrix) -> list[int]:
    """Elementary divisors d_1 | d_2 | ... of an integer matrix.

    Plain row/column reduction; fine for the desk-scale matrices here.
    Returns the nonzero divisors, all positive, in divisibility order.
    """
    a = [list(map(int, row)) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    divisors = []
    top = 0
    while top < rows and top < cols:
        # pivot: smallest nonzero entry in the remaining block
        pivot = None
        best = None
        for i in range(top, rows):
            for j in range(top, cols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        a[top], a[pi] = a[pi], a[top]
        for row in a:
            row[top], row[pj] = row[pj], row[top]
        dirty = False
        for i in range(top + 1, rows):
            q = a[i][top] // a[top][top]
            if q:
                for j in range(top, cols):
                    a[i][j] -= q * a[top][j]
            if a[i][top] != 0:
                dirty = True
        for j in range(top + 1, cols):
            q = a[top][j] // a[top][top]
            if q:
                for i in range(top, rows):
                    a[i][j] -= q * a[i][top]
            if a[top][j] != 0:
                dirty = True
        if dirty:
            continue
        # pivot must divide every remaining entry, else fold a witness in
        witness = next(
            ((i, j) for i in range(top + 1, rows) for j in range(top + 1, cols)
             if a[i][j] % a[top][top] != 0),
            None,
        )
        if witness is not None:
            wi, _ = witness
            for j in range(top, cols):
                a[top][j] += a[wi][j]
            continue
        divisors.append(abs(a[top][top]))
        top += 1
    return divisors
