"""End-to-end acceptance checks.

Each test prints one `criterion N ...: PASS` line (pytest -s shows them; a
failure raises before the line is printed, so the printed list is the list
of criteria that actually passed).
"""

import math
import random
from fractions import Fraction

import pytest

from cuboidsearch.asymptotics import (
    Axis,
    asymptotic_intervals,
    build_newton_grid,
    certify_roots,
    check_disjoint,
    imaginary_axis_poly,
    integer_point_report,
    leading_coefficients,
    refine_interval,
    upper_hull,
)
from cuboidsearch.cli import GOLDEN_HULL, GOLDEN_EXPONENTS, _golden_leading_terms
from cuboidsearch.cuboid_eqs import (
    PQPair,
    build_qpq,
    compute_z,
    factorization_check,
    param_ratios,
)
from cuboidsearch.exact_arith import QuadRational, sturm_count
from cuboidsearch.search import (
    SearchConfig,
    pairs_for_p,
    run_search,
    scan_pair,
)


def _sample_pairs():
    """q >= 59p sample set: boundary, near-boundary, and hypothesis-threshold
    values of q for each p up to 10."""
    pairs = set()
    for p in range(1, 11):
        for q in (59 * p, 59 * p + 1, 60 * p + 1, 5 * p**3 + 1, 16 * p**3 + p):
            if q >= 59 * p and q != p and math.gcd(p, q) == 1:
                pairs.add((p, q))
    return sorted(pairs)


VIETA_PAIRS = (
    (1, 59), (1, 60), (1, 100), (2, 119), (2, 121),
    (3, 178), (3, 200), (4, 237), (5, 296), (7, 415),
)


def test_criterion_1_factorization_identity():
    checked = 0
    for q in range(2, 21):
        for p in range(1, q):
            if math.gcd(p, q) == 1:
                assert factorization_check(PQPair(p, q))
                checked += 1
    assert checked == 127
    print(f"criterion 1 (factorization identity, {checked} pairs): PASS")


def test_criterion_2_newton_polygon():
    polygon = upper_hull(build_newton_grid())
    assert polygon.upper_hull == GOLDEN_HULL
    assert polygon.exponents == GOLDEN_EXPONENTS
    found = set()
    for exponent in polygon.exponents:
        for t in leading_coefficients(polygon, exponent):
            found.add((t.exponent, t.magnitude, t.p_power, t.axis, t.multiplicity))
    assert found == _golden_leading_terms()
    print("criterion 2 (Newton polygon and leading terms): PASS")


def test_criterion_3_certified_root_intervals():
    pairs = _sample_pairs()
    assert len(pairs) >= 20
    for p, q in pairs:
        pair = PQPair(p, q)
        assert check_disjoint(asymptotic_intervals(pair)).ok
        certs = certify_roots(pair)
        assert all(c.passed for c in certs)
        assert sum(1 for c in certs if c.axis is Axis.REAL) == 3
        assert sum(1 for c in certs if c.axis is Axis.IMAGINARY) == 2
    # exact global root counts for the boundary pair
    P = build_qpq(PQPair(1, 59))
    B = 10**6
    assert sturm_count(P, 0, B) == 3
    assert sturm_count(P, -B, B) == 6
    print(f"criterion 3 (certified disjoint root intervals, {len(pairs)} pairs): PASS")


def test_criterion_4_integer_point_exclusion():
    pairs = _sample_pairs()
    for p, q in pairs:
        report = integer_point_report(PQPair(p, q))
        assert all(not c for c in report.search_candidates.values())
        if report.t3_empty_hypothesis:
            assert report.integers_inside["T3"] == []
            assert report.t3_in_unit_bracket
        assert report.conclusion == "SEARCH_SKIP"
    print(f"criterion 4 (integer-point exclusion, {len(pairs)} pairs): PASS")


def test_criterion_5_exhaustive_search_small_range(tmp_path):
    config = SearchConfig(
        p_min=1,
        p_max=25,
        worker_count=4,
        checkpoint_path=str(tmp_path / "c5.ckpt"),
        output_path=str(tmp_path / "c5.jsonl"),
    )
    report = run_search(config)
    assert report.hits == []
    expected_pairs = sum(len(pairs_for_p(p)) for p in range(1, 26))
    assert report.pairs_examined == expected_pairs
    print(
        f"criterion 5 (search p <= 25: {report.pairs_examined} pairs, "
        f"{report.t_values_tested} exact evaluations, 0 hits): PASS"
    )


def test_criterion_6_mode_and_sieve_equivalence():
    base = SearchConfig(p_min=1, p_max=5)
    divisor = SearchConfig(p_min=1, p_max=5, mode="divisor")
    nosieve = SearchConfig(p_min=1, p_max=5, sieve_moduli=(2,))
    pairs = 0
    for p in range(1, 6):
        for pair in pairs_for_p(p):
            pairs += 1
            hits = scan_pair(pair, base).hits
            assert scan_pair(pair, divisor).hits == hits
            assert scan_pair(pair, nosieve).hits == hits
    print(f"criterion 6 (scan/divisor/sieve equivalence, {pairs} pairs): PASS")


def test_criterion_7_parametrization_identities():
    rng = random.Random(1729)
    checked = 0
    while checked < 100:
        upsilon, alpha, beta = (
            Fraction(rng.randint(-30, 30), rng.randint(1, 30)) for _ in range(3)
        )
        if (alpha * upsilon) ** 2 == 1:
            continue
        z = compute_z(upsilon, alpha, beta)
        r = param_ratios(upsilon, z, alpha, beta)
        assert r.x2**2 + r.x3**2 == r.d1**2
        assert r.x1**2 + r.d1**2 == 1
        checked += 1
    print("criterion 7 (exact parametrization identities, 100 samples): PASS")


def test_criterion_8_root_product():
    rel_width = Fraction(1, 10**12)
    tolerance = Fraction(1, 10**9)
    for p, q in VIETA_PAIRS:
        pair = PQPair(p, q)
        qpoly = build_qpq(pair)
        ipoly = imaginary_axis_poly(qpoly)
        product = QuadRational.of(1)
        for iv in asymptotic_intervals(pair):
            poly = qpoly if iv.axis is Axis.REAL else ipoly
            product = product * refine_interval(
                poly, iv.axis, iv.lo, iv.hi, rel_width
            )
        expected = Fraction(p**5 * q**5)
        rel_err = abs(product.approx(digits=50) - expected) / expected
        assert rel_err < tolerance
    print(
        f"criterion 8 (five-root product = p^5 q^5 within 1e-9, "
        f"{len(VIETA_PAIRS)} pairs): PASS"
    )


def test_criterion_9_determinism_and_resume(tmp_path):
    def config(name, workers):
        return SearchConfig(
            p_min=1,
            p_max=8,
            worker_count=workers,
            checkpoint_path=str(tmp_path / f"{name}.ckpt"),
            output_path=str(tmp_path / f"{name}.jsonl"),
        )

    run_search(config("w1", 1))
    run_search(config("w4", 4))
    bytes_w1 = (tmp_path / "w1.jsonl").read_bytes()
    assert bytes_w1 == (tmp_path / "w4.jsonl").read_bytes()

    interrupted = config("resume", 2)
    with pytest.raises(KeyboardInterrupt):
        run_search(interrupted, abort_after_p=4)
    run_search(interrupted)
    assert (tmp_path / "resume.jsonl").read_bytes() == bytes_w1
    print("criterion 9 (worker-count determinism and resume): PASS")
