import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pumcode import RsEvalCode, ScaleGuardError, get_field
from pumcode import oracle

from conftest import random_info


def _hamming(a, b):
    return sum(x != y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def test_all_vectors_big_endian():
    v = oracle.all_vectors(3, 2)
    assert v.tolist()[:4] == [[0, 0], [0, 1], [0, 2], [1, 0]]
    assert oracle.vector_index(3, [1, 0]) == 3


def test_ml_decode_noiseless(ref1, phi0, rng):
    for code in (ref1, phi0):
        info = random_info(code, 5, rng)
        got, metric = oracle.ml_decode(code, code.encode(info).tolist())
        assert got == info and metric == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.0, 0.5))
def test_ml_decode_is_optimal(seed, eps):
    from conftest import make_code

    code = make_code(2, 3, 7, 3, 2, 1)
    rng = np.random.default_rng(seed)
    info = random_info(code, 4, rng)
    sent = code.encode(info).tolist()
    received = [[x ^ int(rng.integers(1, 8)) if rng.random() < eps else x for x in b] for b in sent]
    got, metric = oracle.ml_decode(code, received)
    assert metric == _hamming(code.encode(got).tolist(), received)
    assert metric <= _hamming(sent, received)


def test_ml_decode_guard(ref2):
    with pytest.raises(ScaleGuardError):
        oracle.ml_decode(ref2, [[0] * 7] * 3)


def test_phi_zero_distances_meet_design(phi0):
    d = oracle.extended_distances(phi0, 6)
    prof = phi0.profile
    for j in range(1, 7):
        assert d.row[j - 1] >= prof.drdes(j)
        assert d.column[j - 1] >= prof.dcdes(j)
        assert d.reverse_column[j - 1] >= prof.drcdes(j)
    assert d.dfree == 7


def test_ref1_distance_profile(ref1):
    d = oracle.extended_distances(ref1, 6)
    assert d.row == [7, 10, 12, 15, 16, 19]
    assert d.column == [5, 6, 9, 10, 13, 14]
    assert d.reverse_column == [5, 6, 9, 10, 13, 14]
    assert d.dfree == 7
    assert all(a <= b for a, b in zip(d.column, d.column[1:]))


def test_ref1_column_distance_witness(ref1):
    # a weight-6 first block followed by a zero block: two blocks, weight 6 < d0 + alpha
    blocks = ref1.encode([[1, 0, 1], [0, 1, 0]]).tolist()
    weights = [sum(1 for x in b if x) for b in blocks]
    assert weights[:2] == [6, 0]
    assert sum(weights[:2]) < ref1.dcdes(2)


def test_bmd_conditions(ref1):
    n = ref1.n
    assert oracle.bmd_condition(ref1, [0] * 9)
    # one block at half the single-block row distance is already too much
    assert not oracle.bmd_condition(ref1, [0, 0, 0, 4, 0, 0, 0, 0, 0])
    assert oracle.bmd_condition(ref1, [0, 0, 0, 3, 0, 0, 0, 0, 0])
    # windows of two blocks: 3 + 2 = 5 reaches drdes(2)/2 = 5
    assert not oracle.bmd_condition(ref1, [0, 0, 3, 2, 0, 0, 0, 0, 0])
    assert oracle.bmd_condition(ref1, [2, 0, 2, 0, 2, 0, 2, 0, 2])
    errs = [[0] * n for _ in range(9)]
    errs[3][:3] = [1, 2, 3]
    assert oracle.block_weights(errs) == [0, 0, 0, 3, 0, 0, 0, 0, 0]


def test_block_condition_is_implied_by_sequence_condition(ref1):
    rng = np.random.default_rng(4)
    for _ in range(300):
        ws = [int(w) for w in rng.integers(0, 4, size=9)]
        if oracle.bmd_condition(ref1, ws):
            assert all(oracle.bmd_block_condition(ref1, ws, j) for j in range(8))


def test_nearest_codeword_and_distance():
    f = get_field(2, 3)
    code = RsEvalCode(f, f.nonzero_elements()[:7], 3, 1)
    cw = code.encode([1, 2, 3])
    r = list(cw)
    r[0] ^= 5
    got, dist = oracle.nearest_codeword(code, r)
    assert got == cw and dist == 1
    assert oracle.minimum_distance(code) == 5
