import json

import pytest

from cuboidsearch.cuboid_eqs import PQPair, build_qpq
from cuboidsearch.exact_arith import IntPoly
from cuboidsearch.search import (
    CHECKPOINT_VERSION,
    ResumeMismatch,
    SearchCheckpoint,
    SearchConfig,
    divisor_candidates,
    eq83_upper,
    modular_sieve,
    pairs_for_p,
    run_search,
    scan_pair,
    t_bounds,
)


def make_config(tmp_path, name="a", **kw):
    defaults = dict(
        p_min=1,
        p_max=5,
        checkpoint_path=str(tmp_path / f"{name}.ckpt"),
        output_path=str(tmp_path / f"{name}.jsonl"),
    )
    defaults.update(kw)
    return SearchConfig(**defaults)


class TestBounds:
    def test_empty_range(self):
        assert t_bounds(PQPair(1, 2)) is None
        assert t_bounds(PQPair(1, 8)) is None

    def test_p3_q2(self):
        assert t_bounds(PQPair(3, 2)) == (10, 17)

    def test_upper_bound_exact(self):
        # largest t with (2t - p^2 - pq)^2 < p^2 (p^2 + 6pq + q^2)
        pair = PQPair(3, 2)
        hi = eq83_upper(pair)
        p, q = pair.p, pair.q
        D = p * p * (p * p + 6 * p * q + q * q)

        def strict(t):
            lhs = 2 * t - p * p - p * q
            return lhs < 0 or lhs * lhs < D

        assert strict(hi) and not strict(hi + 1)

    def test_lower_bound_dominates(self):
        lo, hi = t_bounds(PQPair(5, 4))
        assert lo == 26
        assert hi <= 61 * 25 - 1


class TestSieve:
    def test_mod2(self):
        assert modular_sieve(PQPair(1, 2), 2) == frozenset({0, 1})

    def test_size_bounded(self):
        for m in (7, 25, 64):
            assert len(modular_sieve(PQPair(3, 4), m)) <= m

    def test_soundness_against_fabricated_root(self):
        # an integer root of any integer polynomial survives every sieve
        poly = build_qpq(PQPair(3, 2))
        shifted = poly - IntPoly.of([poly.eval_int(12)])
        assert shifted.eval_int(12) == 0
        for m in (7, 11, 64):
            residues = frozenset(
                r for r in range(m) if shifted.eval_mod(r, m) == 0
            )
            assert 12 % m in residues

    def test_rejects_modulus_one(self):
        with pytest.raises(ValueError):
            modular_sieve(PQPair(1, 2), 1)


class TestDivisorCandidates:
    def test_p3_q2_range(self):
        assert divisor_candidates(PQPair(3, 2), 10, 17) == [12, 16]

    def test_contains_all_divisors_in_range(self):
        p, q = 2, 5
        n = (p * q) ** 10
        expected = [t for t in range(30, 200) if n % t == 0]
        assert divisor_candidates(PQPair(p, q), 30, 199) == expected


class TestScanPair:
    def test_empty_pair(self):
        config = SearchConfig(p_min=1, p_max=1)
        result = scan_pair(PQPair(1, 2), config)
        assert (result.t_tested, result.sieve_rejections, result.hits) == (0, 0, ())

    def test_counts_add_up(self):
        config = SearchConfig(p_min=3, p_max=3)
        pair = PQPair(3, 2)
        result = scan_pair(pair, config)
        lo, hi = t_bounds(pair)
        assert result.t_tested + result.sieve_rejections == hi - lo + 1
        assert result.hits == ()

    def test_mode_equivalence_small(self):
        for p in range(1, 6):
            for pair in pairs_for_p(p):
                scan = scan_pair(pair, SearchConfig(p_min=1, p_max=5, mode="scan"))
                div = scan_pair(
                    pair, SearchConfig(p_min=1, p_max=5, mode="divisor")
                )
                assert scan.hits == div.hits

    def test_sieve_soundness_small(self):
        # disabling the sieve must not change the hit list
        for p in range(1, 5):
            for pair in pairs_for_p(p):
                with_sieve = scan_pair(pair, SearchConfig(p_min=1, p_max=4))
                without = scan_pair(
                    pair, SearchConfig(p_min=1, p_max=4, sieve_moduli=(2,))
                )
                assert with_sieve.hits == without.hits


class TestPairsForP:
    def test_p1(self):
        pairs = pairs_for_p(1)
        assert len(pairs) == 57  # q in 2..58
        assert pairs[0] == PQPair(1, 2)
        assert pairs[-1] == PQPair(1, 58)

    def test_coprime_only(self):
        assert all(
            pair.q % 2 == 1 for pair in pairs_for_p(2)
        )


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            SearchConfig(p_min=0, p_max=3)
        with pytest.raises(ValueError):
            SearchConfig(p_min=5, p_max=3)
        with pytest.raises(ValueError):
            SearchConfig(p_min=1, p_max=3, mode="turbo")
        with pytest.raises(ValueError):
            SearchConfig(p_min=1, p_max=3, sieve_moduli=(1,))
        with pytest.raises(ValueError):
            SearchConfig(p_min=1, p_max=3, worker_count=0)

    def test_digest_ignores_workers_and_paths(self):
        a = SearchConfig(p_min=1, p_max=5)
        b = SearchConfig(
            p_min=1, p_max=5, worker_count=8, output_path="elsewhere.jsonl"
        )
        assert a.digest() == b.digest()

    def test_digest_tracks_semantics(self):
        a = SearchConfig(p_min=1, p_max=5)
        assert a.digest() != SearchConfig(p_min=1, p_max=6).digest()
        assert a.digest() != SearchConfig(p_min=1, p_max=5, mode="divisor").digest()
        assert (
            a.digest()
            != SearchConfig(p_min=1, p_max=5, sieve_moduli=(7,)).digest()
        )


class TestRunSearch:
    def test_no_hits_small(self, tmp_path):
        config = make_config(tmp_path)
        report = run_search(config)
        assert report.hits == []
        assert report.pairs_examined == sum(
            len(pairs_for_p(p)) for p in range(1, 6)
        )
        lines = (tmp_path / "a.jsonl").read_text().splitlines()
        assert len(lines) == 1
        summary = json.loads(lines[0])
        assert summary == {
            "summary": True,
            "pairs_examined": report.pairs_examined,
            "t_values_tested": report.t_values_tested,
            "sieve_rejections": report.sieve_rejections,
            "hits": 0,
        }

    def test_checkpoint_file_format(self, tmp_path):
        config = make_config(tmp_path)
        run_search(config)
        text = (tmp_path / "a.ckpt").read_text()
        keys = [line.split("=")[0] for line in text.strip().splitlines()]
        assert keys == [
            "version",
            "config_digest",
            "last_completed_p",
            "candidates_found",
            "elapsed_seconds",
        ]
        ckpt = SearchCheckpoint.read(str(tmp_path / "a.ckpt"))
        assert ckpt.version == CHECKPOINT_VERSION
        assert ckpt.config_digest == config.digest()
        assert ckpt.last_completed_p == 5
        assert ckpt.candidates_found == 0

    def test_worker_count_irrelevant(self, tmp_path):
        one = make_config(tmp_path, "one", worker_count=1)
        four = make_config(tmp_path, "four", worker_count=4)
        r1 = run_search(one)
        r4 = run_search(four)
        assert (r1.pairs_examined, r1.t_values_tested, r1.sieve_rejections) == (
            r4.pairs_examined,
            r4.t_values_tested,
            r4.sieve_rejections,
        )
        assert (tmp_path / "one.jsonl").read_bytes() == (
            tmp_path / "four.jsonl"
        ).read_bytes()

    def test_interrupt_and_resume(self, tmp_path):
        baseline = make_config(tmp_path, "base")
        run_search(baseline)

        broken = make_config(tmp_path, "broken")
        with pytest.raises(KeyboardInterrupt):
            run_search(broken, abort_after_p=3)
        ckpt = SearchCheckpoint.read(str(tmp_path / "broken.ckpt"))
        assert ckpt.last_completed_p == 3

        resumed = run_search(broken)
        full = run_search(baseline)
        assert (tmp_path / "broken.jsonl").read_bytes() == (
            tmp_path / "base.jsonl"
        ).read_bytes()
        assert resumed.pairs_examined == full.pairs_examined
        assert resumed.t_values_tested == full.t_values_tested
        assert resumed.sieve_rejections == full.sieve_rejections

    def test_resume_mismatch(self, tmp_path):
        config = make_config(tmp_path)
        with pytest.raises(KeyboardInterrupt):
            run_search(config, abort_after_p=2)
        altered = SearchConfig(
            p_min=1,
            p_max=9,
            checkpoint_path=config.checkpoint_path,
            output_path=config.output_path,
        )
        with pytest.raises(ResumeMismatch):
            run_search(altered)

    def test_resume_detects_tampered_output(self, tmp_path):
        config = make_config(tmp_path)
        with pytest.raises(KeyboardInterrupt):
            run_search(config, abort_after_p=2)
        with open(config.output_path, "a", encoding="utf-8") as fh:
            fh.write('{"p":1,"q":2,"t":5,"case":"BU_EQ_A2"}\n')
        with pytest.raises(ResumeMismatch):
            run_search(config)

    def test_faithful_mode_same_hits(self, tmp_path):
        fast = make_config(tmp_path, "fast", p_max=3)
        slow = make_config(tmp_path, "slow", p_max=3, faithful=True)
        r_fast = run_search(fast)
        r_slow = run_search(slow)
        assert [w.septuple() for w in r_fast.hits] == [
            w.septuple() for w in r_slow.hits
        ]
