"""Channel simulation and trial statistics.

Randomness comes from numpy's PCG64.  Trial ``i`` of a run seeded with
``s`` draws everything (information, error pattern) from
``Generator(PCG64(SeedSequence([s, i])))``, so results do not depend on
how trials are split across workers.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import oracle
from .decoder import decode, invocation_budget
from .errors import SamplingError, UsageError
from .formats import code_from_spec
from .galois import Field
from .pum import PumCode

RNG_RECIPE = "numpy PCG64, SeedSequence([seed, trial_index])"
MAX_ATTEMPTS = 10_000
# block-decoder calls attributed to any single depth may not exceed
# (ell+1) * d_alpha * COMPLEXITY_CONSTANT
COMPLEXITY_CONSTANT = 8


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, trial])))


@dataclass(frozen=True)
class ErrorPattern:
    """Per block, a tuple of (position, nonzero value) pairs."""

    n: int
    blocks: tuple[tuple[tuple[int, int], ...], ...]

    def __post_init__(self) -> None:
        for b in self.blocks:
            seen = set()
            for pos, val in b:
                if not 0 <= pos < self.n:
                    raise UsageError(f"error position {pos} outside a block of length {self.n}")
                if pos in seen:
                    raise UsageError(f"error position {pos} repeated within a block")
                if val == 0:
                    raise UsageError("error values must be nonzero")
                seen.add(pos)

    @classmethod
    def empty(cls, n: int, nblocks: int) -> "ErrorPattern":
        return cls(n, tuple(() for _ in range(nblocks)))

    @classmethod
    def from_dense(cls, blocks: Sequence[Sequence[int]]) -> "ErrorPattern":
        n = len(blocks[0])
        return cls(n, tuple(tuple((p, int(v)) for p, v in enumerate(b) if v) for b in blocks))

    def dense(self) -> list[list[int]]:
        out = []
        for b in self.blocks:
            row = [0] * self.n
            for pos, val in b:
                row[pos] = val
            out.append(row)
        return out

    def weights(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def __len__(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class ChannelSpec:
    """``iid`` (symbol error probability), ``weights`` (fixed per-block
    weights, repeated cyclically), ``guaranteed`` (rejection sampling until
    every window stays under half the designed row distance) or
    ``block-guaranteed`` (the sequence condition fails but one block's
    condition holds).  The last two use a per-block weight cap and density."""

    kind: str
    epsilon: Fraction = Fraction(0)
    weights: tuple[int, ...] = ()
    max_block_weight: int | None = None
    density: float = 0.5

    def __post_init__(self) -> None:
        if self.kind not in ("iid", "weights", "guaranteed", "block-guaranteed"):
            raise UsageError(f"unknown channel kind {self.kind!r}")
        if not 0 <= self.epsilon <= 1:
            raise UsageError("epsilon must lie in [0, 1]")
        if not 0 <= self.density <= 1:
            raise UsageError("density must lie in [0, 1]")

    def describe(self) -> str:
        if self.kind == "iid":
            return f"iid epsilon={self.epsilon}"
        if self.kind == "weights":
            return "weights=" + ",".join(map(str, self.weights))
        cap = "auto" if self.max_block_weight is None else self.max_block_weight
        return f"{self.kind} max_block_weight={cap} density={self.density}"


def _random_block(rng: np.random.Generator, f: Field, n: int, weight: int) -> tuple[tuple[int, int], ...]:
    if weight > n:
        raise UsageError(f"block weight {weight} exceeds n={n}")
    positions = sorted(int(x) for x in rng.choice(n, size=weight, replace=False))
    return tuple((p, int(rng.integers(1, f.q))) for p in positions)


def random_pattern(rng: np.random.Generator, f: Field, n: int, nblocks: int, spec: ChannelSpec) -> ErrorPattern:
    if spec.kind == "iid":
        p = float(spec.epsilon)
        blocks = []
        for _ in range(nblocks):
            hits = rng.random(n) < p
            blocks.append(tuple((int(pos), int(rng.integers(1, f.q))) for pos in np.flatnonzero(hits)))
        return ErrorPattern(n, tuple(blocks))
    if spec.kind == "weights":
        if not spec.weights:
            raise UsageError("weights channel needs at least one weight")
        ws = [spec.weights[j % len(spec.weights)] for j in range(nblocks)]
        return ErrorPattern(n, tuple(_random_block(rng, f, n, w) for w in ws))
    raise UsageError(f"{spec.kind} patterns are drawn with sample_guaranteed")


def inject(f: Field, codeword: Sequence[Sequence[int]], pattern: ErrorPattern) -> list[list[int]]:
    """r = c + e blockwise."""
    if len(codeword) != len(pattern):
        raise UsageError(f"pattern has {len(pattern)} blocks, codeword has {len(codeword)}")
    out = []
    for block, errs in zip(codeword, pattern.blocks):
        if len(block) != pattern.n:
            raise UsageError("block length does not match the pattern")
        row = list(block)
        for pos, val in errs:
            row[pos] = f.add(row[pos], val)
        out.append(row)
    return out


def subtract(f: Field, received: Sequence[Sequence[int]], pattern: ErrorPattern) -> list[list[int]]:
    out = []
    for block, errs in zip(received, pattern.blocks):
        row = list(block)
        for pos, val in errs:
            row[pos] = f.sub(row[pos], val)
        out.append(row)
    return out


@dataclass
class SampleStats:
    attempts: int = 0
    accepted: int = 0

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.attempts if self.attempts else 1.0


def _budget_weights(rng: np.random.Generator, code: PumCode, nblocks: int, spec: ChannelSpec) -> list[int]:
    cap = spec.max_block_weight
    if cap is None:
        cap = (code.profile.d01 - 1) // 2
    cap = min(cap, code.n)
    if cap == 0:
        return [0] * nblocks
    hits = rng.random(nblocks) < spec.density
    return [int(rng.integers(1, cap + 1)) if h else 0 for h in hits]


def sample_guaranteed(
    code: PumCode,
    nblocks: int,
    spec: ChannelSpec,
    rng: np.random.Generator,
    stats: SampleStats | None = None,
) -> ErrorPattern:
    """Rejection-sample a pattern whose weights satisfy the sequence BMD condition."""
    stats = stats if stats is not None else SampleStats()
    for _ in range(MAX_ATTEMPTS):
        stats.attempts += 1
        ws = _budget_weights(rng, code, nblocks, spec)
        if oracle.bmd_condition(code, ws):
            stats.accepted += 1
            return ErrorPattern(code.n, tuple(_random_block(rng, code.field, code.n, w) for w in ws))
    raise SamplingError(
        f"no pattern satisfied the BMD condition in {MAX_ATTEMPTS} attempts "
        f"({spec.describe()}, {nblocks} blocks, {stats.accepted}/{stats.attempts} accepted overall)"
    )


def sample_block_guaranteed(
    code: PumCode,
    nblocks: int,
    spec: ChannelSpec,
    rng: np.random.Generator,
    stats: SampleStats | None = None,
) -> tuple[ErrorPattern, int]:
    """A pattern that violates the sequence condition but satisfies the
    single-block condition at the returned information block."""
    stats = stats if stats is not None else SampleStats()
    for _ in range(MAX_ATTEMPTS):
        stats.attempts += 1
        ws = _budget_weights(rng, code, nblocks, spec)
        if oracle.bmd_condition(code, ws):
            continue
        good = [j for j in range(nblocks - 1) if oracle.bmd_block_condition(code, ws, j)]
        if not good:
            continue
        stats.accepted += 1
        j = good[int(rng.integers(len(good)))]
        return ErrorPattern(code.n, tuple(_random_block(rng, code.field, code.n, w) for w in ws)), j
    raise SamplingError(f"no block-guaranteed pattern found in {MAX_ATTEMPTS} attempts ({spec.describe()})")


@dataclass
class TrialOutcome:
    index: int
    weights: list[int]
    frame_error: bool
    block_errors: int
    ml_mismatch: bool | None
    metric: Fraction
    oracle_metric: int | None
    decode_seconds: float
    invocations: int
    max_invocations_at_depth: int
    budget_ok: bool
    max_gap_after_step2: int
    max_true_gap_after_step2: int
    used_erasure: bool
    attempts: int


@dataclass
class TrialReport:
    code: str
    channel: str
    seed: int
    trials: int = 0
    frame_errors: int = 0
    block_errors: int = 0
    ml_mismatches: int | None = None
    decode_seconds: float = 0.0
    invocations: int = 0
    max_invocations_per_block: Fraction = Fraction(0)
    max_invocations_at_depth: int = 0
    budget_violations: int = 0
    budget_per_block: int = 0
    gap_violations: int = 0
    erasure_paths: int = 0
    sampling_attempts: int = 0
    outcomes: list[TrialOutcome] = field(default_factory=list)

    @property
    def mean_decode_seconds(self) -> float:
        return self.decode_seconds / self.trials if self.trials else 0.0

    def add(self, o: TrialOutcome, nblocks: int) -> None:
        self.trials += 1
        self.frame_errors += o.frame_error
        self.block_errors += o.block_errors
        if o.ml_mismatch is not None:
            self.ml_mismatches = (self.ml_mismatches or 0) + o.ml_mismatch
        self.decode_seconds += o.decode_seconds
        self.invocations += o.invocations
        self.max_invocations_per_block = max(self.max_invocations_per_block, Fraction(o.invocations, nblocks))
        self.max_invocations_at_depth = max(self.max_invocations_at_depth, o.max_invocations_at_depth)
        self.budget_violations += not o.budget_ok
        self.gap_violations += max(o.max_gap_after_step2, o.max_true_gap_after_step2) > 1
        self.erasure_paths += o.used_erasure
        self.sampling_attempts += o.attempts
        self.outcomes.append(o)

    def to_text(self) -> str:
        rows = [
            ("code", self.code),
            ("channel", self.channel),
            ("seed", self.seed),
            ("rng", RNG_RECIPE),
            ("trials", self.trials),
            ("frame_errors", self.frame_errors),
            ("block_errors", self.block_errors),
            ("ml_mismatches", "off" if self.ml_mismatches is None else self.ml_mismatches),
            ("mean_decode_ms", f"{1000 * self.mean_decode_seconds:.3f}"),
            ("block_decoder_invocations", self.invocations),
            ("max_invocations_per_block", f"{float(self.max_invocations_per_block):.4f}"),
            ("max_invocations_at_depth", self.max_invocations_at_depth),
            ("invocation_budget_per_depth", self.budget_per_block),
            ("budget_violations", self.budget_violations),
            ("gap_violations", self.gap_violations),
            ("erasure_paths", self.erasure_paths),
            ("sampling_attempts", self.sampling_attempts),
        ]
        return "".join(f"{k}={v}\n" for k, v in rows)

    def log_tsv(self) -> str:
        head = "trial\tweights\tframe_error\tblock_errors\tml_mismatch\tmetric\toracle_metric\tinvocations\tdecode_ms\n"
        lines = [
            f"{o.index}\t{','.join(map(str, o.weights))}\t{int(o.frame_error)}\t{o.block_errors}\t"
            f"{'' if o.ml_mismatch is None else int(o.ml_mismatch)}\t{o.metric}\t"
            f"{'' if o.oracle_metric is None else o.oracle_metric}\t{o.invocations}\t{1000 * o.decode_seconds:.3f}\n"
            for o in self.outcomes
        ]
        return head + "".join(lines)


def run_trial(
    code: PumCode,
    length: int,
    spec: ChannelSpec,
    seed: int,
    index: int,
    use_oracle: bool = False,
    erasure_mode: str = "corrected",
) -> TrialOutcome:
    rng = trial_rng(seed, index)
    f = code.field
    nblocks = length + 1
    info = [[int(x) for x in rng.integers(0, f.q, size=code.k)] for _ in range(length)]
    stats = SampleStats()
    if spec.kind == "guaranteed":
        pattern = sample_guaranteed(code, nblocks, spec, rng, stats)
    elif spec.kind == "block-guaranteed":
        pattern, _ = sample_block_guaranteed(code, nblocks, spec, rng, stats)
    else:
        pattern = random_pattern(rng, f, code.n, nblocks, spec)
    received = inject(f, code.encode(info).tolist(), pattern)
    start = time.perf_counter()
    result = decode(code, received, erasure_mode)
    elapsed = time.perf_counter() - start
    mismatch, ml_metric = None, None
    if use_oracle:
        ml_info, ml_metric = oracle.ml_decode(code, received)
        mismatch = ml_info != result.information or Fraction(ml_metric) != result.metric
    wrong = sum(1 for a, b in zip(info, result.information) if a != b)
    true_gap = longest_missing_run(code, info, result.step2_edge_keys)
    return TrialOutcome(
        index=index,
        weights=pattern.weights(),
        frame_error=wrong > 0,
        block_errors=wrong,
        ml_mismatch=mismatch,
        metric=result.metric,
        oracle_metric=ml_metric,
        decode_seconds=elapsed,
        invocations=result.invocations,
        max_invocations_at_depth=max(result.invocations_by_depth),
        budget_ok=max(result.invocations_by_depth) <= invocation_budget(code, COMPLEXITY_CONSTANT),
        max_gap_after_step2=max(result.step2_empty_runs, default=0),
        max_true_gap_after_step2=true_gap,
        used_erasure=result.used_erasure,
        attempts=stats.attempts,
    )


def longest_missing_run(code: PumCode, info: Sequence[Sequence[int]], edge_keys: Sequence) -> int:
    """Longest run of blocks whose transmitted edge is absent from ``edge_keys``."""
    states = code.states(info)
    blocks = [tuple(b) for b in info] + [tuple([0] * code.k)]
    best = cur = 0
    for t, keys in enumerate(edge_keys):
        if (states[t], blocks[t]) in keys:
            cur = 0
        else:
            cur += 1
            best = max(best, cur)
    return best


def _code_key(code: PumCode) -> dict:
    return {
        "p": code.field.p,
        "m": code.field.m,
        "modulus": code.field.modulus,
        "n": code.n,
        "k": code.k,
        "k1": code.k1,
        "phi": code.phi,
        "points": list(code.points),
    }


def _run_chunk(args) -> list[TrialOutcome]:
    key, length, spec, seed, indices, use_oracle, mode = args
    code = code_from_spec(key)
    return [run_trial(code, length, spec, seed, i, use_oracle, mode) for i in indices]


def run_trials(
    code: PumCode,
    length: int,
    spec: ChannelSpec,
    trials: int,
    use_oracle: bool = False,
    seed: int = 0,
    parallel: int = 1,
    erasure_mode: str = "corrected",
) -> TrialReport:
    """Deterministic given the seed; parallelism does not change the report."""
    if length < 1:
        raise UsageError("need at least one information block")
    if trials < 0:
        raise UsageError("trial count must be nonnegative")
    if parallel < 1:
        raise UsageError("parallelism must be >= 1")
    if use_oracle:
        oracle.full_trellis(code)  # raises early when the oracle cannot run
    report = TrialReport(
        code=f"q={code.field.q} n={code.n} k={code.k} k1={code.k1} phi={code.phi} L={length}",
        channel=spec.describe(),
        seed=seed,
        budget_per_block=invocation_budget(code, COMPLEXITY_CONSTANT),
    )
    if parallel == 1 or trials < 2:
        outcomes = [run_trial(code, length, spec, seed, i, use_oracle, erasure_mode) for i in range(trials)]
    else:
        key = _code_key(code)
        chunks = [list(range(w, trials, parallel)) for w in range(parallel)]
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            parts = pool.map(_run_chunk, [(key, length, spec, seed, c, use_oracle, erasure_mode) for c in chunks])
            outcomes = sorted((o for part in parts for o in part), key=lambda o: o.index)
    for o in outcomes:
        report.add(o, length + 1)
    return report
