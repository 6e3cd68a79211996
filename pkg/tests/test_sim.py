from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pumcode import SamplingError, UsageError
from pumcode import oracle
from pumcode.sim import (
    ChannelSpec,
    ErrorPattern,
    inject,
    random_pattern,
    run_trials,
    sample_block_guaranteed,
    sample_guaranteed,
    subtract,
    trial_rng,
)

from conftest import random_info


def _timing_free(report):
    return [line for line in report.to_text().splitlines() if not line.startswith("mean_decode_ms")]


def test_trial_rng_is_reproducible():
    a, b = trial_rng(5, 3), trial_rng(5, 3)
    assert a.integers(0, 1000, 10).tolist() == b.integers(0, 1000, 10).tolist()
    assert trial_rng(5, 4).integers(0, 1000, 10).tolist() != trial_rng(5, 3).integers(0, 1000, 10).tolist()


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([Fraction(0), Fraction(1, 7), Fraction(1, 2), Fraction(1)]))
def test_inject_and_subtract_roundtrip(seed, eps):
    from conftest import make_code

    code = make_code(2, 3, 7, 3, 2, 1)
    rng = trial_rng(seed, 0)
    cw = code.encode(random_info(code, 4, rng)).tolist()
    pattern = random_pattern(rng, code.field, code.n, 5, ChannelSpec("iid", epsilon=eps))
    received = inject(code.field, cw, pattern)
    assert subtract(code.field, received, pattern) == cw
    assert oracle.block_weights([[a ^ b for a, b in zip(x, y)] for x, y in zip(cw, received)]) == pattern.weights()
    if eps == 0:
        assert received == cw
    if eps == 1:
        assert pattern.weights() == [7] * 5


def test_error_pattern_validation():
    assert ErrorPattern.empty(7, 3).weights() == [0, 0, 0]
    dense = [[0, 3, 0], [1, 0, 0]]
    assert ErrorPattern.from_dense(dense).dense() == dense
    with pytest.raises(UsageError):
        ErrorPattern(3, (((3, 1),),))
    with pytest.raises(UsageError):
        ErrorPattern(3, (((0, 0),),))
    with pytest.raises(UsageError):
        ErrorPattern(3, (((1, 1), (1, 2)),))


def test_weights_channel_cycles(ref1, rng):
    pattern = random_pattern(rng, ref1.field, 7, 5, ChannelSpec("weights", weights=(2, 0)))
    assert pattern.weights() == [2, 0, 2, 0, 2]
    with pytest.raises(UsageError):
        random_pattern(rng, ref1.field, 7, 2, ChannelSpec("weights", weights=(8,)))


def test_channel_validation():
    with pytest.raises(UsageError):
        ChannelSpec("gaussian")
    with pytest.raises(UsageError):
        ChannelSpec("iid", epsilon=Fraction(3, 2))
    with pytest.raises(UsageError):
        ChannelSpec("guaranteed", density=2.0)


def test_guaranteed_samples_satisfy_condition(ref1):
    for i in range(100):
        pattern = sample_guaranteed(ref1, 9, ChannelSpec("guaranteed"), trial_rng(1, i))
        assert oracle.bmd_condition(ref1, pattern.weights())


def test_block_guaranteed_samples(ref1):
    for i in range(50):
        pattern, j = sample_block_guaranteed(ref1, 9, ChannelSpec("block-guaranteed"), trial_rng(2, i))
        assert 0 <= j < 8
        assert not oracle.bmd_condition(ref1, pattern.weights())
        assert oracle.bmd_block_condition(ref1, pattern.weights(), j)


def test_impossible_sampling_raises(ref1):
    spec = ChannelSpec("guaranteed", max_block_weight=7, density=1.0)
    with pytest.raises(SamplingError, match="no pattern"):
        sample_guaranteed(ref1, 200, spec, trial_rng(0, 0))


def test_noiseless_trials(ref1):
    report = run_trials(ref1, 4, ChannelSpec("iid"), 20, use_oracle=True)
    assert report.trials == 20
    assert report.frame_errors == report.ml_mismatches == report.budget_violations == 0


def test_reports_are_reproducible_and_parallel_safe(ref1):
    spec = ChannelSpec("guaranteed")
    serial = run_trials(ref1, 6, spec, 30, use_oracle=True, seed=11)
    again = run_trials(ref1, 6, spec, 30, use_oracle=True, seed=11)
    parallel = run_trials(ref1, 6, spec, 30, use_oracle=True, seed=11, parallel=2)
    assert _timing_free(serial) == _timing_free(again) == _timing_free(parallel)
    assert [o.weights for o in serial.outcomes] == [o.weights for o in parallel.outcomes]
    other = run_trials(ref1, 6, spec, 30, seed=12)
    assert [o.weights for o in other.outcomes] != [o.weights for o in serial.outcomes]


def test_report_text_and_log(ref1):
    report = run_trials(ref1, 3, ChannelSpec("iid", epsilon=Fraction(1, 10)), 5, seed=4)
    keys = [line.split("=", 1)[0] for line in report.to_text().splitlines()]
    assert keys[:4] == ["code", "channel", "seed", "rng"]
    assert "ml_mismatches" in keys and "budget_violations" in keys
    assert "ml_mismatches=off" in report.to_text()
    log = report.log_tsv().splitlines()
    assert len(log) == 6 and log[0].startswith("trial\tweights")


def test_run_trials_validation(ref1, ref2):
    with pytest.raises(UsageError):
        run_trials(ref1, 0, ChannelSpec("iid"), 1)
    with pytest.raises(UsageError):
        run_trials(ref1, 2, ChannelSpec("iid"), -1)
    with pytest.raises(UsageError):
        run_trials(ref1, 2, ChannelSpec("iid"), 1, parallel=0)
    from pumcode import ScaleGuardError

    with pytest.raises(ScaleGuardError):
        run_trials(ref2, 2, ChannelSpec("iid"), 1, use_oracle=True)
