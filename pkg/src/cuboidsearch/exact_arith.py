"""Exact arithmetic substrate.

Rationals (stdlib Fraction: always reduced, positive denominator), the real
quadratic field of numbers a + b*sqrt(2), univariate integer polynomials, and
Sturm-sequence real-root counting.  Everything here is an immutable value and
every operation is a pure function, so all of it is safe to use from parallel
workers.  No floating point is used in any decision procedure; decimal
approximations exist only for display and for oracle cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

RatLike = Union[int, Fraction]


class EndpointIsRoot(ValueError):
    """An interval endpoint annihilates the polynomial and the caller did not
    permit perturbation."""


def rational_sqrt(x: Fraction) -> Optional[Fraction]:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if x < 0:
        return None
    num, den = x.numerator, x.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def sqrt2_approx(digits: int = 50) -> Fraction:
    """Rational lower approximation of sqrt(2), accurate to `digits` decimals."""
    scale = 10**digits
    return Fraction(math.isqrt(2 * scale * scale), scale)


@dataclass(frozen=True)
class QuadRational:
    """The number a + b*sqrt(2) with rational a, b.

    The representation is unique because sqrt(2) is irrational, so equality
    is field-wise and the dataclass __eq__ is exact.
    """

    a: Fraction
    b: Fraction

    @staticmethod
    def of(a: RatLike, b: RatLike = 0) -> "QuadRational":
        return QuadRational(Fraction(a), Fraction(b))

    def __add__(self, other: "QuadRational") -> "QuadRational":
        return QuadRational(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "QuadRational") -> "QuadRational":
        return QuadRational(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "QuadRational":
        return QuadRational(-self.a, -self.b)

    def __mul__(self, other) -> "QuadRational":
        if isinstance(other, QuadRational):
            return QuadRational(
                self.a * other.a + 2 * self.b * other.b,
                self.a * other.b + self.b * other.a,
            )
        return QuadRational(self.a * other, self.b * other)

    __rmul__ = __mul__

    def __truediv__(self, other: RatLike) -> "QuadRational":
        return QuadRational(self.a / other, self.b / other)

    def sign(self) -> int:
        return quad_sign(self)

    def __lt__(self, other: "QuadRational") -> bool:
        return quad_sign(self - other) < 0

    def __le__(self, other: "QuadRational") -> bool:
        return quad_sign(self - other) <= 0

    def __gt__(self, other: "QuadRational") -> bool:
        return quad_sign(self - other) > 0

    def __ge__(self, other: "QuadRational") -> bool:
        return quad_sign(self - other) >= 0

    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError("value has a nonzero sqrt(2) part")
        return self.a

    def approx(self, digits: int = 50) -> Fraction:
        """Rational approximation, for display and oracles only."""
        return self.a + self.b * sqrt2_approx(digits)

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt(2)"
        op = "+" if self.b > 0 else "-"
        return f"{self.a} {op} {abs(self.b)}*sqrt(2)"


QUAD_ZERO = QuadRational(Fraction(0), Fraction(0))
QUAD_SQRT2 = QuadRational(Fraction(0), Fraction(1))


def quad_sign(x: QuadRational) -> int:
    """Exact sign of a + b*sqrt(2), by rational comparisons only.

    Compares a^2 against 2 b^2 with a case split on the signs of a and b;
    sqrt(2) is never approximated.
    """
    a, b = x.a, x.b
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return 1 if b > 0 else -1
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    # opposite signs: |a| vs |b|*sqrt(2) decided by squaring
    cmp = a * a - 2 * b * b
    if a > 0:  # b < 0
        return (cmp > 0) - (cmp < 0)
    # a < 0, b > 0
    return (cmp < 0) - (cmp > 0)


def quad_sqrt(x: QuadRational) -> Optional[QuadRational]:
    """Positive square root of x inside the field, or None if it does not
    stay in the field.  Requires x >= 0."""
    if quad_sign(x) < 0:
        raise ValueError("square root of a negative value")
    if quad_sign(x) == 0:
        return QUAD_ZERO
    A, B = x.a, x.b
    if B == 0:
        r = rational_sqrt(A)
        if r is not None:
            return QuadRational(r, Fraction(0))
        r = rational_sqrt(A / 2)
        if r is not None:
            return QuadRational(Fraction(0), r)
        return None
    # seek u + v*sqrt(2): u^2 + 2 v^2 = A and 2 u v = B
    disc = A * A - 2 * B * B
    s = rational_sqrt(disc) if disc >= 0 else None
    if s is None:
        return None
    for u2 in ((A + s) / 2, (A - s) / 2):
        u = rational_sqrt(u2)
        if u is None or u == 0:
            continue
        v = B / (2 * u)
        cand = QuadRational(u, v)
        if cand * cand == x and quad_sign(cand) > 0:
            return cand
        cand = -cand
        if cand * cand == x and quad_sign(cand) > 0:
            return cand
    return None


@dataclass(frozen=True)
class IntPoly:
    """Univariate integer polynomial; coeffs[i] is the coefficient of t^i."""

    coeffs: tuple

    @staticmethod
    def of(coeffs: Iterable[int]) -> "IntPoly":
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        return IntPoly(tuple(int(c) for c in cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def constant(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_even(self) -> bool:
        return all(c == 0 for c in self.coeffs[1::2])

    def derivative(self) -> "IntPoly":
        return IntPoly.of(i * c for i, c in enumerate(self.coeffs) if i >= 1)

    def __add__(self, other: "IntPoly") -> "IntPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return IntPoly.of(x + y for x, y in zip(a, b))

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        if self.is_zero() or other.is_zero():
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, ci in enumerate(self.coeffs):
            if ci == 0:
                continue
            for j, cj in enumerate(other.coeffs):
                out[i + j] += ci * cj
        return IntPoly.of(out)

    def eval_int(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_mod(self, x: int, m: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % m
        return acc


def eval_poly(P: IntPoly, x: RatLike) -> Fraction:
    """Exact P(x) by Horner's scheme over the rationals."""
    acc = Fraction(0)
    for c in reversed(P.coeffs):
        acc = acc * x + c
    return acc


def eval_poly_quad(P: IntPoly, x: QuadRational) -> QuadRational:
    """Exact P(x) for x in the sqrt(2) field, by Horner's scheme."""
    acc = QUAD_ZERO
    for c in reversed(P.coeffs):
        acc = acc * x + QuadRational.of(c)
    return acc


def _primitive(coeffs: Sequence[Fraction]) -> IntPoly:
    """Scale by a positive rational to primitive integer coefficients.

    The positive scale preserves signs everywhere, which Sturm's theorem
    relies on; it also keeps coefficient growth under control along the
    remainder sequence.
    """
    fracs = [Fraction(c) for c in coeffs]
    while fracs and fracs[-1] == 0:
        fracs.pop()
    if not fracs:
        return IntPoly(())
    den = math.lcm(*(f.denominator for f in fracs))
    ints = [int(f * den) for f in fracs]
    g = math.gcd(*ints)
    return IntPoly(tuple(c // g for c in ints))


def _frac_rem(f: Sequence[Fraction], g: Sequence[Fraction]) -> list:
    """Remainder of f by g over the rationals (dense coefficient lists)."""
    r = [Fraction(c) for c in f]
    dg = len(g) - 1
    lg = g[-1]
    while len(r) - 1 >= dg and any(c != 0 for c in r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < dg:
            break
        k = len(r) - 1 - dg
        factor = r[-1] / lg
        for i in range(dg + 1):
            r[k + i] -= factor * g[i]
        r.pop()
    while r and r[-1] == 0:
        r.pop()
    return r


def sturm_sequence(P: IntPoly) -> list:
    """Signed remainder sequence of P, with primitive-part reduction."""
    seq = [_primitive([Fraction(c) for c in P.coeffs])]
    d = P.derivative()
    if d.is_zero():
        return seq
    seq.append(_primitive([Fraction(c) for c in d.coeffs]))
    while seq[-1].degree > 0:
        rem = _frac_rem(
            [Fraction(c) for c in seq[-2].coeffs],
            [Fraction(c) for c in seq[-1].coeffs],
        )
        if not rem:
            break
        seq.append(_primitive([-c for c in rem]))
    return seq


def _sign_variations(seq: Sequence[IntPoly], x: Fraction) -> int:
    signs = []
    for poly in seq:
        v = eval_poly(poly, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for s1, s2 in zip(signs, signs[1:]) if s1 != s2)


def sturm_count(
    P: IntPoly,
    lo: RatLike,
    hi: RatLike,
    endpoint_shift: Optional[Fraction] = None,
) -> int:
    """Number of distinct real roots of P in the open interval (lo, hi).

    Requires P(lo) != 0 and P(hi) != 0.  If an endpoint is a root the call
    fails with EndpointIsRoot unless `endpoint_shift` is given, in which case
    the offending endpoints are moved outward by that amount (a typical
    choice is (hi - lo) / 10**9) and re-checked once.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if P.is_zero():
        raise ValueError("zero polynomial")
    if not lo < hi:
        raise ValueError("need lo < hi")
    if eval_poly(P, lo) == 0:
        if endpoint_shift is None:
            raise EndpointIsRoot(f"P({lo}) = 0")
        lo -= endpoint_shift
        if eval_poly(P, lo) == 0:
            raise EndpointIsRoot("left endpoint still a root after shift")
    if eval_poly(P, hi) == 0:
        if endpoint_shift is None:
            raise EndpointIsRoot(f"P({hi}) = 0")
        hi += endpoint_shift
        if eval_poly(P, hi) == 0:
            raise EndpointIsRoot("right endpoint still a root after shift")
    seq = sturm_sequence(P)
    return _sign_variations(seq, lo) - _sign_variations(seq, hi)
