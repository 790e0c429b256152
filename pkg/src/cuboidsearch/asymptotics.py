"""Root asymptotics of the degree-10 polynomial for q much larger than p.

The polynomial, written as a sum A_{m,r}(p) q^r t^m, has a Newton polygon
whose upper-boundary slopes give the growth exponents of its roots in q.
For q >= 59 p the five roots in the upper half plane (three real, two purely
imaginary) lie in five explicit disjoint open intervals with endpoints in
the rationals or in the sqrt(2) field; each interval is certified to hold
exactly one root by exact endpoint sign evaluation (plus a Sturm count on
the real axis), and the real intervals are shown to contain no integer
satisfying the search inequalities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .exact_arith import (
    IntPoly,
    QuadRational,
    eval_poly,
    eval_poly_quad,
    quad_sign,
    quad_sqrt,
    rational_sqrt,
    sturm_count,
)
from .cuboid_eqs import PQPair, QPQ_TERMS, build_qpq


class PreconditionViolated(ValueError):
    """The interval theorems require q >= 59 p."""


class DegenerateHull(ValueError):
    """All nodes share one t-power; no slope is defined."""


class CertificationFailed(RuntimeError):
    """An interval failed its root certificate; names the interval and check."""


class Axis(Enum):
    REAL = "REAL"
    IMAGINARY = "IMAGINARY"


class IntervalLabel(Enum):
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"
    T5 = "T5"


@dataclass(frozen=True)
class NewtonNode:
    """Grid node (m, r) with its coefficient, a polynomial in p."""

    m: int
    r: int
    coeff_p: tuple  # index = power of p

    def coeff_at(self, p: int) -> int:
        return sum(c * p**i for i, c in enumerate(self.coeff_p))

    def monomial(self) -> Tuple[int, int]:
        """(coefficient, p-power) if the coefficient is a single monomial."""
        nonzero = [(i, c) for i, c in enumerate(self.coeff_p) if c != 0]
        if len(nonzero) != 1:
            raise ValueError(f"node ({self.m},{self.r}) coefficient is not a monomial")
        i, c = nonzero[0]
        return c, i


@dataclass(frozen=True)
class NewtonPolygon:
    nodes: tuple  # all NewtonNode, sorted by (m, r)
    upper_hull: tuple  # ordered (m, r) vertices, increasing m
    segment_slopes: tuple  # Fraction slope per hull segment
    exponents: tuple  # deduplicated -slope values, ascending


def build_newton_grid() -> tuple:
    """All nonzero (m, r, A_{m,r}(p)) nodes of the degree-10 polynomial.

    p is treated symbolically: a node exists iff its coefficient is a
    nonzero polynomial in p (here every coefficient is a single monomial).
    """
    nodes = []
    for m, terms in QPQ_TERMS.items():
        by_r: Dict[int, Dict[int, int]] = {}
        for p_pow, q_pow, c in terms:
            by_r.setdefault(q_pow, {})[p_pow] = by_r.setdefault(q_pow, {}).get(p_pow, 0) + c
        for r, pmap in by_r.items():
            top = max(pmap)
            coeff_p = tuple(pmap.get(i, 0) for i in range(top + 1))
            if any(coeff_p):
                nodes.append(NewtonNode(m=m, r=r, coeff_p=coeff_p))
    return tuple(sorted(nodes, key=lambda n: (n.m, n.r)))


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def upper_hull(nodes) -> NewtonPolygon:
    """Upper convex hull of the node set, with slopes and root exponents.

    Monotone chain over points sorted by (m, r); exact integer cross
    products only.
    """
    points = sorted({(n.m, n.r) for n in nodes})
    if len({m for m, _ in points}) < 2:
        raise DegenerateHull("all nodes share one t-power")
    hull: List[Tuple[int, int]] = []
    for pt in reversed(points):  # right to left builds the upper boundary
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    hull.reverse()
    slopes = tuple(
        Fraction(b[1] - a[1], b[0] - a[0]) for a, b in zip(hull, hull[1:])
    )
    exponents = tuple(sorted({-k for k in slopes}))
    return NewtonPolygon(
        nodes=tuple(sorted(nodes, key=lambda n: (n.m, n.r))),
        upper_hull=tuple(hull),
        segment_slopes=slopes,
        exponents=exponents,
    )


def node_dominance_holds(polygon: NewtonPolygon) -> bool:
    """Every node lies on or below the upper hull (checked segment-wise)."""
    for (m1, r1), (m2, r2) in zip(polygon.upper_hull, polygon.upper_hull[1:]):
        for n in polygon.nodes:
            if m1 <= n.m <= m2:
                # r <= r1 + k (m - m1), cleared of denominators
                if (n.r - r1) * (m2 - m1) > (n.m - m1) * (r2 - r1):
                    return False
    return True


@dataclass(frozen=True)
class LeadingTerm:
    """Leading factor of one root expansion: magnitude * p^p_power * q^exponent,
    on the real or imaginary axis."""

    exponent: Fraction
    magnitude: QuadRational  # > 0
    p_power: int
    axis: Axis
    multiplicity: int


def _solve_even_gamma(coeffs: List[int]) -> List[Tuple[QuadRational, Axis, int]]:
    """Admissible roots of an even integer polynomial in gamma.

    coeffs are in s = gamma^2, degree <= 2.  Returns (magnitude, axis,
    multiplicity) triples keeping only roots with gamma > 0 (real) or with
    positive imaginary part (imaginary axis).
    """
    s_roots: List[Tuple[QuadRational, int]] = []
    if len(coeffs) == 2:
        c0, c1 = coeffs
        s_roots.append((QuadRational.of(Fraction(-c0, c1)), 1))
    elif len(coeffs) == 3:
        c0, c1, c2 = coeffs
        disc = c1 * c1 - 4 * c2 * c0
        if disc == 0:
            s_roots.append((QuadRational.of(Fraction(-c1, 2 * c2)), 2))
        else:
            root = rational_sqrt(Fraction(disc))
            if root is not None:
                sq = QuadRational.of(root)
            else:
                root = rational_sqrt(Fraction(disc, 2))
                if root is None:
                    raise ValueError("discriminant outside the sqrt(2) field")
                sq = QuadRational.of(0, root)
            half = Fraction(1, 2 * c2)
            base = QuadRational.of(Fraction(-c1))
            s_roots.append(((base + sq) * half, 1))
            s_roots.append(((base - sq) * half, 1))
    else:
        raise ValueError("expected degree 1 or 2 in gamma^2")

    out = []
    for s, mult in s_roots:
        sgn = quad_sign(s)
        if sgn == 0:
            continue  # gamma = 0 is divided out beforehand
        if sgn > 0:
            gamma = quad_sqrt(s)
            if gamma is None:
                raise ValueError("real root magnitude outside the sqrt(2) field")
            out.append((gamma, Axis.REAL, mult))
        else:
            mag = quad_sqrt(-s)
            if mag is None:
                raise ValueError("imaginary root magnitude outside the sqrt(2) field")
            out.append((mag, Axis.IMAGINARY, mult))
    return out


def leading_coefficients(polygon: NewtonPolygon, exponent: Fraction) -> List[LeadingTerm]:
    """Admissible leading terms for the hull segment of slope -exponent.

    Collects the grid nodes on that segment, substitutes C = gamma * p^w
    with the p-weight w read off the segment, reduces to an integer
    polynomial in gamma^2, and solves it exactly over the sqrt(2) field.
    Roots with gamma < 0, or below the real axis, are discarded.
    """
    exponent = Fraction(exponent)
    if exponent not in polygon.exponents:
        raise ValueError(f"exponent {exponent} is not a hull exponent")
    k = -exponent
    seg = None
    for (a, b), slope in zip(
        zip(polygon.upper_hull, polygon.upper_hull[1:]), polygon.segment_slopes
    ):
        if slope == k:
            seg = (a, b)
            break
    assert seg is not None
    (m1, r1), (m2, r2) = seg
    on_segment = [
        n for n in polygon.nodes
        if m1 <= n.m <= m2 and (n.r - r1) * (m2 - m1) == (n.m - m1) * (r2 - r1)
    ]
    mono = {n.m: n.monomial() for n in on_segment}  # m -> (coeff, p-power)
    c2_, e2 = mono[m2]
    c1_, e1 = mono[m1]
    w = Fraction(e1 - e2, m2 - m1)
    if w.denominator != 1:
        raise ValueError("fractional p-weight on hull segment")
    w = int(w)
    # homogeneity: e + m*w must be constant along the segment
    target = e1 + m1 * w
    gamma_coeffs: Dict[int, int] = {}
    for m, (c, e) in mono.items():
        if e + m * w != target:
            raise ValueError("segment equation is not p-homogeneous")
        gamma_coeffs[m] = c
    m_min = min(gamma_coeffs)
    shifted = {m - m_min: c for m, c in gamma_coeffs.items()}
    if any(m % 2 for m in shifted):
        raise ValueError("segment equation is not even in gamma")
    s_coeffs = [shifted.get(2 * i, 0) for i in range(max(shifted) // 2 + 1)]
    terms = []
    for mag, axis, mult in _solve_even_gamma(s_coeffs):
        terms.append(
            LeadingTerm(
                exponent=exponent, magnitude=mag, p_power=w, axis=axis,
                multiplicity=mult,
            )
        )
    return terms


@dataclass(frozen=True)
class AsymptoticInterval:
    """Exact open interval certified to contain one root (or, for the
    imaginary axis, one root's imaginary part)."""

    label: IntervalLabel
    axis: Axis
    lo: QuadRational
    hi: QuadRational

    def width(self) -> QuadRational:
        return self.hi - self.lo

    def midpoint(self) -> QuadRational:
        return (self.lo + self.hi) / 2


def asymptotic_intervals(pair: PQPair) -> List[AsymptoticInterval]:
    """The five exact root intervals, valid only for q >= 59 p."""
    p, q = pair.p, pair.q
    if q < 59 * p:
        raise PreconditionViolated(f"need q >= 59p, got p={p}, q={q}")
    p2 = Fraction(p * p)
    q2 = Fraction(q * q)
    half1 = Fraction(5 * p**3, q)
    t3_center = Fraction(p * q) - Fraction(16 * p**3, q)
    half3 = Fraction(5 * p**4, q * q)
    r = QuadRational.of
    t4_center = QuadRational(q2 - 2 * p2, q2 + p2)  # (sqrt2+1) q^2 + (sqrt2-2) p^2
    t5_center = QuadRational(-q2 + 2 * p2, q2 + p2)  # (sqrt2-1) q^2 + (sqrt2+2) p^2
    h = r(half1)
    return [
        AsymptoticInterval(IntervalLabel.T1, Axis.REAL, r(p2 - half1), r(p2)),
        AsymptoticInterval(IntervalLabel.T2, Axis.REAL, r(p2), r(p2 + half1)),
        AsymptoticInterval(
            IntervalLabel.T3, Axis.REAL, r(t3_center - half3), r(t3_center + half3)
        ),
        AsymptoticInterval(IntervalLabel.T4, Axis.IMAGINARY, t4_center - h, t4_center + h),
        AsymptoticInterval(IntervalLabel.T5, Axis.IMAGINARY, t5_center - h, t5_center + h),
    ]


@dataclass(frozen=True)
class DisjointnessReport:
    ok: bool
    origin_margins: dict  # label -> lo (must be > 0)
    real_gap: QuadRational  # T3.lo - T2.hi (must be > 0)
    adjacency_ok: bool  # T1.hi == T2.lo == p^2, open so disjoint
    imaginary_gap: QuadRational  # T4.lo - T5.hi (must be > 0)


def check_disjoint(intervals: List[AsymptoticInterval]) -> DisjointnessReport:
    """Exact pairwise disjointness of the five intervals, with margins."""
    by = {iv.label: iv for iv in intervals}
    origin = {iv.label.value: iv.lo for iv in intervals}
    positive = all(quad_sign(lo) > 0 for lo in origin.values())
    adjacency_ok = by[IntervalLabel.T1].hi == by[IntervalLabel.T2].lo
    real_gap = by[IntervalLabel.T3].lo - by[IntervalLabel.T2].hi
    imaginary_gap = by[IntervalLabel.T4].lo - by[IntervalLabel.T5].hi
    ok = (
        positive
        and adjacency_ok
        and quad_sign(real_gap) > 0
        and quad_sign(imaginary_gap) > 0
    )
    return DisjointnessReport(
        ok=ok,
        origin_margins=origin,
        real_gap=real_gap,
        adjacency_ok=adjacency_ok,
        imaginary_gap=imaginary_gap,
    )


def imaginary_axis_poly(P: IntPoly) -> IntPoly:
    """P restricted to the imaginary axis: for even P, the real polynomial
    whose value at y equals P(i*y).  Maps the t^(2k) coefficient to
    (-1)^k y^(2k)."""
    if not P.is_even():
        raise ValueError("imaginary-axis restriction needs an even polynomial")
    coeffs = list(P.coeffs)
    for k in range(0, len(coeffs), 2):
        if (k // 2) % 2 == 1:
            coeffs[k] = -coeffs[k]
    return IntPoly.of(coeffs)


@dataclass(frozen=True)
class RootCertificate:
    label: IntervalLabel
    axis: Axis
    sign_lo: int
    sign_hi: int
    sturm_roots: Optional[int]  # real axis only
    passed: bool


def certify_roots(pair: PQPair) -> List[RootCertificate]:
    """Certify one root per interval by exact endpoint signs.

    Real intervals additionally get a Sturm count of exactly 1.  Imaginary
    intervals use the imaginary-axis restriction, whose values at the
    sqrt(2)-field endpoints have exactly decidable sign.  Raises
    CertificationFailed naming the interval and check if anything fails.
    """
    qpoly = build_qpq(pair)
    ipoly = imaginary_axis_poly(qpoly)
    certs = []
    failures = []
    for iv in asymptotic_intervals(pair):
        if iv.axis is Axis.REAL:
            lo, hi = iv.lo.to_fraction(), iv.hi.to_fraction()
            v_lo, v_hi = eval_poly(qpoly, lo), eval_poly(qpoly, hi)
            s_lo = (v_lo > 0) - (v_lo < 0)
            s_hi = (v_hi > 0) - (v_hi < 0)
            count = None
            if s_lo != 0 and s_hi != 0:
                count = sturm_count(qpoly, lo, hi)
            passed = s_lo * s_hi == -1 and count == 1
            if not passed:
                failures.append(
                    f"{iv.label.value}: sign({s_lo},{s_hi}), sturm={count}"
                )
            certs.append(RootCertificate(iv.label, iv.axis, s_lo, s_hi, count, passed))
        else:
            s_lo = quad_sign(eval_poly_quad(ipoly, iv.lo))
            s_hi = quad_sign(eval_poly_quad(ipoly, iv.hi))
            passed = s_lo * s_hi == -1
            if not passed:
                failures.append(f"{iv.label.value}: sign({s_lo},{s_hi})")
            certs.append(RootCertificate(iv.label, iv.axis, s_lo, s_hi, None, passed))
    if failures:
        raise CertificationFailed(
            f"(p={pair.p}, q={pair.q}): " + "; ".join(failures)
        )
    return certs


def integers_in_open_interval(lo: Fraction, hi: Fraction) -> List[int]:
    first = math.floor(lo) + 1
    last = math.ceil(hi) - 1
    return list(range(first, last + 1))


@dataclass(frozen=True)
class IntegerPointReport:
    """Integer-point exclusion for the real intervals of one pair."""

    pair: PQPair
    narrow_hypothesis: bool  # q > 5 p^3: T1 and T2 provably integer-free
    at_most_one_hypothesis: bool  # q^2 > 10 p^4: T3 has at most one integer
    t3_empty_hypothesis: bool  # 16 q >= 256 p^3 + 5 p: T3 provably integer-free
    integers_inside: dict  # label -> list of integers strictly inside
    search_candidates: dict  # label -> integers that also pass the lower bounds
    t3_in_unit_bracket: Optional[bool]  # T3 within (pq - 1, pq), when applicable
    conclusion: str  # SEARCH_SKIP: no candidate survives for q >= 59 p


def integer_point_report(pair: PQPair) -> IntegerPointReport:
    """Evaluate the narrowness hypotheses and, independently, enumerate all
    integers inside the real intervals, checking each against the lower
    bounds t > p^2, t > pq, t > q^2."""
    p, q = pair.p, pair.q
    intervals = asymptotic_intervals(pair)
    inside = {}
    candidates = {}
    for iv in intervals:
        if iv.axis is not Axis.REAL:
            continue
        pts = integers_in_open_interval(iv.lo.to_fraction(), iv.hi.to_fraction())
        inside[iv.label.value] = pts
        candidates[iv.label.value] = [
            t for t in pts if t > p * p and t > p * q and t > q * q
        ]
    t3_empty = 16 * q >= 256 * p**3 + 5 * p
    bracket = None
    if t3_empty:
        t3 = next(iv for iv in intervals if iv.label is IntervalLabel.T3)
        lo, hi = t3.lo.to_fraction(), t3.hi.to_fraction()
        bracket = Fraction(p * q - 1) < lo and hi < Fraction(p * q)
    return IntegerPointReport(
        pair=pair,
        narrow_hypothesis=q > 5 * p**3,
        at_most_one_hypothesis=q * q > 10 * p**4,
        t3_empty_hypothesis=t3_empty,
        integers_inside=inside,
        search_candidates=candidates,
        t3_in_unit_bracket=bracket,
        conclusion="SEARCH_SKIP",
    )


def refine_interval(
    poly: IntPoly,
    axis: Axis,
    lo: QuadRational,
    hi: QuadRational,
    rel_width: Fraction,
) -> QuadRational:
    """Bisect a certified sign-change interval until its width falls below
    rel_width times the midpoint; returns the midpoint.  `poly` must already
    be the axis-appropriate real polynomial."""
    s_lo = quad_sign(eval_poly_quad(poly, lo))
    if s_lo == 0:
        return lo
    while quad_sign((hi - lo) - rel_width * ((lo + hi) / 2)) > 0:
        mid = (lo + hi) / 2
        s_mid = quad_sign(eval_poly_quad(poly, mid))
        if s_mid == 0:
            return mid
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2
