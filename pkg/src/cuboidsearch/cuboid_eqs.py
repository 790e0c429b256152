"""Cuboid equations over exact arithmetic.

A perfect cuboid (integer edges x1, x2, x3, face diagonals d1, d2, d3, space
diagonal L) reduces, in the bu = a^2 / au = b^2 parameter family, to integer
roots of an even degree-10 monic polynomial in t indexed by a coprime pair
p != q.  This module builds that polynomial, the ambient degree-12 equation
it factors out of, the rational parametrization of the cuboid ratios, and
the reconstruction of an integer cuboid from a candidate root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

from .exact_arith import IntPoly


class DegenerateDenominator(ArithmeticError):
    """The z-formula denominator vanished (alpha^2 * upsilon^2 = 1)."""


class NotARoot(ValueError):
    """Reconstruction was attempted for a t that is not a root."""


class VerificationFailed(RuntimeError):
    """A reconstructed septuple violates the cuboid equations.

    This must never happen for a candidate that passed the root and
    inequality checks; it signals an implementation (or theory) bug and
    aborts the run loudly.
    """


@dataclass(frozen=True)
class PQPair:
    """Coprime positive integers p != q selecting one polynomial instance."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError("p and q must be positive")
        if self.p == self.q:
            raise ValueError("p and q must differ")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError("p and q must be coprime")


@dataclass(frozen=True)
class FullEqParams:
    """Positive parameters (a, b, u) of the ambient degree-12 equation."""

    a: int
    b: int
    u: int

    def __post_init__(self):
        if self.a < 1 or self.b < 1 or self.u < 1:
            raise ValueError("a, b, u must be positive")


class CaseTag(Enum):
    """Which constraint the pair (p, q) resolves: bu = a^2 or au = b^2."""

    BU_EQ_A2 = "BU_EQ_A2"  # a = p*q, b = p^2, u = q^2
    AU_EQ_B2 = "AU_EQ_B2"  # a = p^2, b = p*q, u = q^2

    def params(self, p: int, q: int) -> FullEqParams:
        if self is CaseTag.BU_EQ_A2:
            return FullEqParams(a=p * q, b=p * p, u=q * q)
        return FullEqParams(a=p * p, b=p * q, u=q * q)


# Fully expanded coefficient grid of the degree-10 polynomial:
# power of t -> list of (power of p, power of q, integer coefficient).
# This is the single source for the Newton-polygon node set; build_qpq uses
# the factored coefficient formulas and the tests check both agree.
QPQ_TERMS = {
    10: [(0, 0, 1)],
    8: [(0, 4, 6), (2, 2, -1), (4, 0, -2)],
    6: [(0, 8, 1), (2, 6, 10), (4, 4, 4), (6, 2, -14), (8, 0, 1)],
    4: [(2, 10, -1), (4, 8, 14), (6, 6, -4), (8, 4, -10), (10, 2, -1)],
    2: [(6, 10, 2), (8, 8, 1), (10, 6, -6)],
    0: [(10, 10, -1)],
}


def build_qpq(pair: PQPair) -> IntPoly:
    """The even, monic, degree-10 polynomial in t for the pair (p, q).

    Its constant coefficient is -p^10 q^10, so any integer root divides
    p^10 q^10.
    """
    p, q = pair.p, pair.q
    p2, q2 = p * p, q * q
    c8 = (2 * q2 + p2) * (3 * q2 - 2 * p2)
    c6 = q2**4 + 10 * p2 * q2**3 + 4 * p2**2 * q2**2 - 14 * p2**3 * q2 + p2**4
    c4 = -p2 * q2 * (q2**4 - 14 * p2 * q2**3 + 4 * p2**2 * q2**2 + 10 * p2**3 * q2 + p2**4)
    c2 = -(p2**3) * q2**3 * (q2 + 2 * p2) * (3 * p2 - 2 * q2)
    c0 = -(p2**5) * q2**5
    return IntPoly.of([c0, 0, c2, 0, c4, 0, c6, 0, c8, 0, 1])


def build_qpq_from_grid(pair: PQPair) -> IntPoly:
    """Same polynomial, summed directly from the expanded term grid."""
    p, q = pair.p, pair.q
    coeffs = [0] * 11
    for m, terms in QPQ_TERMS.items():
        coeffs[m] = sum(c * p**i * q**j for i, j, c in terms)
    return IntPoly.of(coeffs)


def build_full_eq(params: FullEqParams) -> IntPoly:
    """The even, monic, degree-12 polynomial in t for parameters (a, b, u)."""
    a2, b2, u2 = params.a**2, params.b**2, params.u**2
    a4, b4, u4 = a2 * a2, b2 * b2, u2 * u2
    c10 = 6 * u2 - 2 * a2 - 2 * b2
    c8 = u4 + b4 + a4 + 4 * a2 * u2 + 4 * b2 * u2 - 12 * b2 * a2
    c6 = (
        6 * a4 * u2 + 6 * u2 * b4 - 8 * a2 * b2 * u2
        - 2 * u4 * a2 - 2 * u4 * b2 - 2 * a4 * b2 - 2 * b4 * a2
    )
    c4 = 4 * u2 * b4 * a2 + 4 * a4 * u2 * b2 - 12 * u4 * a2 * b2 + u4 * a4 + u4 * b4 + a4 * b4
    c2 = 6 * a4 * u2 * b4 - 2 * u4 * a4 * b2 - 2 * u4 * a2 * b4
    c0 = u4 * a4 * b4
    return IntPoly.of([c0, 0, c2, 0, c4, 0, c6, 0, c8, 0, c10, 0, 1])


def factorization_check(pair: PQPair) -> bool:
    """Check that (t - pq)(t + pq) times the degree-10 polynomial equals the
    degree-12 equation under both parameter substitutions, coefficient-wise."""
    p, q = pair.p, pair.q
    qpq = build_qpq(pair)
    linear = IntPoly.of([-((p * q) ** 2), 0, 1])
    product = linear * qpq
    return all(
        product == build_full_eq(tag.params(p, q)) for tag in CaseTag
    )


class RatioSet(NamedTuple):
    """The six cuboid ratios x_i / L and d_i / L."""

    x1: Fraction
    x2: Fraction
    x3: Fraction
    d1: Fraction
    d2: Fraction
    d3: Fraction


def param_ratios(
    upsilon: Fraction, z: Fraction, alpha: Fraction, beta: Fraction
) -> RatioSet:
    """Exact cuboid ratios from the four rational parameters.

    Two identities hold for any inputs: (x2/L)^2 + (x3/L)^2 = (d1/L)^2 and
    (x1/L)^2 + (d1/L)^2 = 1.
    """
    u2 = upsilon * upsilon
    z2 = z * z
    du = 1 + u2
    dz = 1 + z2
    x1 = 2 * upsilon / du
    d1 = (1 - u2) / du
    x2 = 2 * z * (1 - u2) / (du * dz)
    x3 = (1 - u2) * (1 - z2) / (du * dz)
    d2 = (du * dz + 2 * z * (1 - u2)) / (du * dz) * beta
    d3 = 2 * (u2 * z2 + 1) / (du * dz) * alpha
    return RatioSet(x1, x2, x3, d1, d2, d3)


def compute_z(upsilon: Fraction, alpha: Fraction, beta: Fraction) -> Fraction:
    """The dependent parameter z; fails when alpha^2 upsilon^2 = 1."""
    den = 2 * (1 + beta * beta) * (1 - alpha * alpha * upsilon * upsilon)
    if den == 0:
        raise DegenerateDenominator("alpha^2 * upsilon^2 = 1")
    return (1 + upsilon * upsilon) * (1 - beta * beta) * (1 + alpha * alpha) / den


def cuboid_predicate(p: int, q: int, t: int) -> bool:
    """True iff (p, q, t) yields a perfect cuboid: t is a root of the
    degree-10 polynomial, exceeds p^2, pq, q^2, and satisfies
    (p^2 + t)(pq + t) > 2 t^2."""
    pair = PQPair(p, q)
    if t < 1:
        raise ValueError("t must be positive")
    if t <= p * p or t <= p * q or t <= q * q:
        return False
    if (p * p + t) * (p * q + t) <= 2 * t * t:
        return False
    return build_qpq(pair).eval_int(t) == 0


@dataclass(frozen=True)
class CuboidWitness:
    """A verified integer cuboid reconstructed from a root candidate."""

    p: int
    q: int
    t: int
    case_tag: CaseTag
    x1: int
    x2: int
    x3: int
    d1: int
    d2: int
    d3: int
    L: int
    verified: bool

    def septuple(self) -> tuple:
        return (self.x1, self.x2, self.x3, self.d1, self.d2, self.d3, self.L)

    def primitive_gcd(self) -> int:
        return math.gcd(*self.septuple())

    def reduced(self) -> tuple:
        """The gcd-reduced (primitive) septuple; reported, not required."""
        g = self.primitive_gcd()
        return tuple(v // g for v in self.septuple())

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "t": self.t,
            "case": self.case_tag.value,
            "cuboid": {
                "x1": self.x1, "x2": self.x2, "x3": self.x3,
                "d1": self.d1, "d2": self.d2, "d3": self.d3, "L": self.L,
            },
            "verified": self.verified,
        }


def _check_cuboid_equations(x1, x2, x3, d1, d2, d3, L) -> bool:
    return (
        x1 * x1 + x2 * x2 + x3 * x3 == L * L
        and x2 * x2 + x3 * x3 == d1 * d1
        and x3 * x3 + x1 * x1 == d2 * d2
        and x1 * x1 + x2 * x2 == d3 * d3
    )


def reconstruct_cuboid(p: int, q: int, t: int, case_tag: CaseTag) -> CuboidWitness:
    """Turn a root candidate (p, q, t) into an integer cuboid septuple.

    Forms (a, b, u) for the case, sets alpha = a/t, beta = b/t,
    upsilon = u/t, derives z and the six ratios, scales by the least common
    multiple of the ratio denominators, and verifies the four cuboid
    equations exactly.  Raises NotARoot for non-roots, and
    VerificationFailed (abort-worthy) if the scaled septuple does not
    satisfy the equations.
    """
    pair = PQPair(p, q)
    if t < 1:
        raise ValueError("t must be positive")
    if build_qpq(pair).eval_int(t) != 0:
        raise NotARoot(f"t={t} is not a root for (p={p}, q={q})")
    params = case_tag.params(p, q)
    alpha = Fraction(params.a, t)
    beta = Fraction(params.b, t)
    upsilon = Fraction(params.u, t)
    z = compute_z(upsilon, alpha, beta)
    ratios = param_ratios(upsilon, z, alpha, beta)
    L = math.lcm(*(r.denominator for r in ratios))
    ints = [int(r * L) for r in ratios]
    x1, x2, x3, d1, d2, d3 = ints
    if not _check_cuboid_equations(x1, x2, x3, d1, d2, d3, L):
        raise VerificationFailed(
            f"septuple for (p={p}, q={q}, t={t}, {case_tag.value}) "
            "violates the cuboid equations"
        )
    return CuboidWitness(
        p=p, q=q, t=t, case_tag=case_tag,
        x1=x1, x2=x2, x3=x3, d1=d1, d2=d2, d3=d3, L=L,
        verified=True,
    )
