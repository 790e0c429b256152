"""Optimized exhaustive search for perfect cuboids in the p != q family.

For q >= 59 p the root-interval analysis rules out every candidate, so the
search only walks q < 59 p.  For each admissible pair the candidate t range
is bounded below by max(p^2, pq, q^2) + 1 and above by both t < 61 p^2 and
the exact integer version of t < (p^2 + pq)/2 + p sqrt(p^2 + 6pq + q^2)/2;
the minimum of the two is always at least as tight.  Candidates are pruned
by modular residue sieves, then evaluated exactly.  Runs are checkpointed
per completed p and deterministic regardless of worker count.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple

from .cuboid_eqs import (
    CaseTag,
    CuboidWitness,
    PQPair,
    build_qpq,
    reconstruct_cuboid,
)

CHECKPOINT_VERSION = 1
DEFAULT_SIEVE_MODULI = (64, 81, 25, 7, 11, 13)


class ResumeMismatch(RuntimeError):
    """Checkpoint digest does not match the running configuration."""


@dataclass(frozen=True)
class SearchConfig:
    p_min: int
    p_max: int
    mode: str = "scan"  # "scan" or "divisor"
    sieve_moduli: tuple = DEFAULT_SIEVE_MODULI
    worker_count: int = 1
    checkpoint_path: Optional[str] = None
    output_path: str = "cuboids.jsonl"
    faithful: bool = False  # literal t upper bound 61 p^2 - 1 only

    def __post_init__(self):
        if self.p_min < 1 or self.p_min > self.p_max:
            raise ValueError("need 1 <= p_min <= p_max")
        if self.mode not in ("scan", "divisor"):
            raise ValueError("mode must be 'scan' or 'divisor'")
        if any(m <= 1 for m in self.sieve_moduli):
            raise ValueError("sieve moduli must exceed 1")
        if self.worker_count < 1:
            raise ValueError("worker_count must be positive")

    def digest(self) -> str:
        """Digest of the search semantics: p range, mode, sieves, bound
        choice.  Worker count and file paths deliberately excluded; they do
        not affect the result."""
        key = repr((
            CHECKPOINT_VERSION, self.p_min, self.p_max, self.mode,
            tuple(self.sieve_moduli), self.faithful,
        ))
        return hashlib.sha256(key.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class SearchCheckpoint:
    version: int
    config_digest: str
    last_completed_p: int
    candidates_found: int
    elapsed_seconds: float

    def write(self, path: str) -> None:
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(f"version={self.version}\n")
            fh.write(f"config_digest={self.config_digest}\n")
            fh.write(f"last_completed_p={self.last_completed_p}\n")
            fh.write(f"candidates_found={self.candidates_found}\n")
            fh.write(f"elapsed_seconds={self.elapsed_seconds}\n")
        os.replace(tmp, path)

    @staticmethod
    def read(path: str) -> "SearchCheckpoint":
        fields: Dict[str, str] = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    key, _, value = line.partition("=")
                    fields[key] = value
        return SearchCheckpoint(
            version=int(fields["version"]),
            config_digest=fields["config_digest"],
            last_completed_p=int(fields["last_completed_p"]),
            candidates_found=int(fields["candidates_found"]),
            elapsed_seconds=float(fields["elapsed_seconds"]),
        )


@dataclass
class SearchReport:
    pairs_examined: int = 0
    t_values_tested: int = 0
    sieve_rejections: int = 0
    hits: List[CuboidWitness] = field(default_factory=list)
    wall_time: float = 0.0


def eq83_upper(pair: PQPair) -> int:
    """Largest integer t with 2t - p^2 - pq < p*sqrt(p^2 + 6pq + q^2),
    computed exactly via integer square roots."""
    p, q = pair.p, pair.q
    A = p * p + p * q
    D = p * p * (p * p + 6 * p * q + q * q)

    def ok(t: int) -> bool:
        lhs = 2 * t - A
        return lhs < 0 or lhs * lhs < D

    t = (A + math.isqrt(D)) // 2
    while not ok(t):
        t -= 1
    while ok(t + 1):
        t += 1
    return t


def t_bounds(pair: PQPair) -> Optional[Tuple[int, int]]:
    """Inclusive candidate range for t, or None when empty.

    lo = max(p^2, pq, q^2) + 1; hi = min(61 p^2 - 1, exact square-root
    bound).  Empty for most pairs: the effective q range is far smaller
    than 59 p."""
    p, q = pair.p, pair.q
    lo = max(p * p, p * q, q * q) + 1
    hi = min(61 * p * p - 1, eq83_upper(pair))
    if lo > hi:
        return None
    return lo, hi


def modular_sieve(pair: PQPair, m: int) -> FrozenSet[int]:
    """Residues rho mod m with Q(rho) = 0 mod m; any t outside them cannot
    be an integer root."""
    if m <= 1:
        raise ValueError("modulus must exceed 1")
    poly = build_qpq(pair)
    return frozenset(r for r in range(m) if poly.eval_mod(r, m) == 0)


def _prime_factors(n: int) -> Dict[int, int]:
    out: Dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _divisors_of_tenth_power(n: int, limit: int) -> List[int]:
    """Sorted divisors of n^10 not exceeding limit."""
    divs = [1]
    for prime, exp in _prime_factors(n).items():
        new = []
        for d in divs:
            v = d
            for _ in range(10 * exp + 1):
                if v > limit:
                    break
                new.append(v)
                v *= prime
        divs = new
    return sorted(divs)


def divisor_candidates(pair: PQPair, lo: int, hi: int) -> List[int]:
    """Integer-root candidates in [lo, hi] by divisor pruning: the
    polynomial is monic with constant term -p^10 q^10, so integer roots
    divide p^10 q^10 = d1 * d2 with d1 | p^10 and d2 | q^10."""
    p_divs = _divisors_of_tenth_power(pair.p, hi)
    q_divs = _divisors_of_tenth_power(pair.q, hi)
    out = set()
    for d1 in p_divs:
        for d2 in q_divs:
            t = d1 * d2
            if t > hi:
                break
            if t >= lo:
                out.add(t)
    return sorted(out)


@dataclass(frozen=True)
class PairScan:
    t_tested: int
    sieve_rejections: int
    hits: tuple


def scan_pair(pair: PQPair, config: SearchConfig, evaluate: bool = True) -> PairScan:
    """Scan one pair for cuboid candidates.

    SCAN mode walks the whole t range; DIVISOR mode tests only divisors of
    p^10 q^10 in range.  Both modes apply the sieve first and produce
    identical hit lists.  With evaluate=False only the counters are
    produced (used for exact stat reconstruction on resume; any hits in the
    replayed region are already on disk).
    """
    p, q = pair.p, pair.q
    if config.faithful:
        lo = max(p * p, p * q, q * q) + 1
        hi = 61 * p * p - 1
        bounds = (lo, hi) if lo <= hi else None
    else:
        bounds = t_bounds(pair)
    if bounds is None:
        return PairScan(0, 0, ())
    lo, hi = bounds
    sieves = [(m, modular_sieve(pair, m)) for m in config.sieve_moduli]
    if config.mode == "divisor":
        candidates = divisor_candidates(pair, lo, hi)
    else:
        candidates = range(lo, hi + 1)
    poly = build_qpq(pair)
    tested = 0
    rejected = 0
    hits = []
    for t in candidates:
        if any(t % m not in residues for m, residues in sieves):
            rejected += 1
            continue
        tested += 1
        if not evaluate:
            continue
        if poly.eval_int(t) != 0:
            continue
        if t <= p * p or t <= p * q or t <= q * q:
            continue
        if (p * p + t) * (p * q + t) <= 2 * t * t:
            continue
        for tag in CaseTag:
            hits.append(reconstruct_cuboid(p, q, t, tag))
    return PairScan(tested, rejected, tuple(hits))


def pairs_for_p(p: int) -> List[PQPair]:
    """All admissible q for a fixed p: 1 <= q <= 59p - 1, q != p, coprime."""
    return [
        PQPair(p, q)
        for q in range(1, 59 * p)
        if q != p and math.gcd(p, q) == 1
    ]


def _scan_p(args) -> Tuple[int, int, int, int, tuple]:
    """Worker: scan every pair for one p.  Returns (p, pairs, tested,
    rejected, hits)."""
    p, config, evaluate = args
    pairs = tested = rejected = 0
    hits: List[CuboidWitness] = []
    for pair in pairs_for_p(p):
        pairs += 1
        result = scan_pair(pair, config, evaluate=evaluate)
        tested += result.t_tested
        rejected += result.sieve_rejections
        hits.extend(result.hits)
    hits.sort(key=lambda w: (w.p, w.q, w.t, w.case_tag.value))
    return p, pairs, tested, rejected, tuple(hits)


def _json_line(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":")) + "\n"


def _load_resume_state(config: SearchConfig) -> Tuple[int, int, float, List[str]]:
    """Validate the checkpoint and salvage output lines for completed p.

    Returns (last_completed_p, candidates_found, prior_elapsed, kept_lines).
    Lines for p beyond the checkpoint (interrupted mid-p) and any stale
    summary line are dropped so the final file is byte-identical to an
    uninterrupted run.
    """
    ckpt = SearchCheckpoint.read(config.checkpoint_path)
    if ckpt.version != CHECKPOINT_VERSION or ckpt.config_digest != config.digest():
        raise ResumeMismatch(
            f"checkpoint digest {ckpt.config_digest} does not match "
            f"configuration digest {config.digest()}"
        )
    kept = []
    if os.path.exists(config.output_path):
        with open(config.output_path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                obj = json.loads(line)
                if "summary" in obj:
                    continue
                if obj["p"] <= ckpt.last_completed_p:
                    kept.append(line if line.endswith("\n") else line + "\n")
    if len(kept) != ckpt.candidates_found:
        raise ResumeMismatch(
            f"output holds {len(kept)} hits for p <= {ckpt.last_completed_p} "
            f"but checkpoint recorded {ckpt.candidates_found}"
        )
    return ckpt.last_completed_p, ckpt.candidates_found, ckpt.elapsed_seconds, kept


ProgressFn = Callable[[int, int, int, int], None]


def run_search(
    config: SearchConfig,
    progress: Optional[ProgressFn] = None,
    abort_after_p: Optional[int] = None,
) -> SearchReport:
    """Run the full search over [p_min, p_max].

    Results are merged in p order, the checkpoint is rewritten atomically
    after each completed p, and the JSONL output (hit lines plus one final
    summary line of counters) is deterministic for any worker count.
    `abort_after_p` simulates an interruption right after that p completes
    (test hook for the resume contract).
    """
    start = time.monotonic()
    report = SearchReport()
    prior_elapsed = 0.0
    resume_from = config.p_min
    kept_lines: List[str] = []

    resuming = config.checkpoint_path and os.path.exists(config.checkpoint_path)
    if resuming:
        last_p, found, prior_elapsed, kept_lines = _load_resume_state(config)
        resume_from = max(config.p_min, last_p + 1)
        # replay counters for the completed prefix without re-evaluating
        for p in range(config.p_min, resume_from):
            _, pairs, tested, rejected, _ = _scan_p((p, config, False))
            report.pairs_examined += pairs
            report.t_values_tested += tested
            report.sieve_rejections += rejected
        report.hits = []  # witnesses for the prefix live in kept_lines

    out = open(config.output_path, "w", encoding="utf-8")
    try:
        out.writelines(kept_lines)
        out.flush()
        hit_count = len(kept_lines)

        todo = list(range(resume_from, config.p_max + 1))
        if config.worker_count > 1 and len(todo) > 1:
            executor = ProcessPoolExecutor(max_workers=config.worker_count)
            results = executor.map(_scan_p, [(p, config, True) for p in todo])
        else:
            executor = None
            results = map(_scan_p, ((p, config, True) for p in todo))
        try:
            for p, pairs, tested, rejected, hits in results:
                report.pairs_examined += pairs
                report.t_values_tested += tested
                report.sieve_rejections += rejected
                for witness in hits:
                    report.hits.append(witness)
                    out.write(_json_line(witness.to_json_dict()))
                hit_count += len(hits)
                out.flush()
                if config.checkpoint_path:
                    SearchCheckpoint(
                        version=CHECKPOINT_VERSION,
                        config_digest=config.digest(),
                        last_completed_p=p,
                        candidates_found=hit_count,
                        elapsed_seconds=prior_elapsed + time.monotonic() - start,
                    ).write(config.checkpoint_path)
                if progress:
                    progress(p, pairs, tested, len(hits))
                if abort_after_p is not None and p >= abort_after_p:
                    raise KeyboardInterrupt("simulated interruption")
        finally:
            if executor is not None:
                executor.shutdown(cancel_futures=True)

        out.write(_json_line({
            "summary": True,
            "pairs_examined": report.pairs_examined,
            "t_values_tested": report.t_values_tested,
            "sieve_rejections": report.sieve_rejections,
            "hits": hit_count,
        }))
    finally:
        out.close()
    report.wall_time = prior_elapsed + time.monotonic() - start
    return report
