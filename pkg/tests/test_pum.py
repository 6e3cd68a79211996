from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pumcode import ConstructionError, DomainError, PumCode, SymbolBlockSequence, UsageError, get_field
from pumcode.linalg import rank, vstack
from pumcode.pum import ReconstructionError

from conftest import random_info

F8 = get_field(2, 3)


@pytest.mark.parametrize(
    "params,ell,d_alpha,d0,d01,alpha,dfree",
    [
        ((7, 3, 2, 1), 1, 4, 5, 7, Fraction(2), 7),
        ((7, 5, 4, 3), 3, 2, 3, 7, Fraction(1, 2), 6),
        ((7, 3, 2, 0), 0, 3, 5, 7, Fraction(3), 7),
    ],
)
def test_distance_profile(params, ell, d_alpha, d0, d01, alpha, dfree):
    prof = PumCode(F8, *params).profile
    assert (prof.ell, prof.d_alpha, prof.d0, prof.d1, prof.d01) == (ell, d_alpha, d0, d0, d01)
    assert prof.alpha == alpha
    assert prof.dfree_designed == dfree
    assert prof.drdes(1) == d01
    assert prof.drdes(3) == d0 + alpha + d0
    assert prof.dcdes(2) == d0 + alpha
    assert prof.drcdes(1) == d0


def test_designed_orders_start_at_one(ref1):
    with pytest.raises(UsageError):
        ref1.drdes(0)


@pytest.mark.parametrize(
    "params,message",
    [
        ((7, 3, 0, 0), "k1 >= 1"),
        ((7, 3, 3, 1), "k1 < k"),
        ((7, 7, 2, 1), "k < n"),
        ((7, 3, 2, -1), "phi >= 0"),
        ((7, 3, 2, 2), "phi < k1"),
        ((7, 5, 4, 1), r"k \+ k1 - phi <= n"),
        ((8, 3, 2, 1), "n <= q - 1"),
    ],
)
def test_construction_constraints(params, message):
    with pytest.raises(ConstructionError, match=message):
        PumCode(F8, *params)


def test_custom_points_validated():
    with pytest.raises(ConstructionError):
        PumCode(F8, 7, 3, 2, 1, points=[1, 2, 3, 4, 5, 6, 6])
    with pytest.raises(ConstructionError):
        PumCode(F8, 7, 3, 2, 1, points=[0, 1, 2, 3, 4, 5, 6])
    code = PumCode(F8, 6, 3, 2, 1, points=[7, 6, 5, 4, 3, 2])
    assert code.points == (7, 6, 5, 4, 3, 2)


@pytest.mark.parametrize("params", [(7, 3, 2, 1), (7, 5, 4, 3), (7, 3, 2, 0), (7, 4, 3, 1)])
def test_generator_partition(params):
    code = PumCode(F8, *params)
    k, k1, phi = code.k, code.k1, code.phi
    assert code.check_ranks() == (k, k1, k + k1 - phi)
    assert code.G0 == code.c0.generator
    assert code.G_tot == code.calpha.generator
    assert code.G01 == code.c01.generator
    c1_rows = (code.Phi, code.G01, code.B) if phi else (code.G01, code.B)
    assert code.c1.generator == vstack(*c1_rows)
    assert code.G00 == (vstack(code.A, code.Phi) if phi else code.A)
    assert rank(code.G_alpha) == k + k1 - phi


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([(7, 3, 2, 1), (7, 5, 4, 3), (7, 3, 2, 0)]), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_encoding_is_linear_and_terminated(params, length, seed):
    code = PumCode(F8, *params)
    rng = np.random.default_rng(seed)
    a, b = random_info(code, length, rng), random_info(code, length, rng)
    total = [F8.vec_add(x, y) for x, y in zip(a, b)]
    ca, cb = code.encode(a).tolist(), code.encode(b).tolist()
    assert code.encode(total).tolist() == [F8.vec_add(x, y) for x, y in zip(ca, cb)]
    assert len(ca) == length + 1
    assert code.c0.is_codeword(ca[0])
    assert code.c1.is_codeword(ca[-1])
    assert all(code.calpha.is_codeword(c) for c in ca)


def test_coefficients_of_a_block(ref1):
    f = ref1.field
    state, info = (3, 5), (1, 6, 2)
    v = ref1.coefficients(ref1.block(state, info))
    # (A | Phi | G01 | B) coefficients: (i_A, i_Phi + s_Phi, i_01, s_B)
    assert v == [1, f.add(6, 3), 2, 5]


def test_states_follow_information(ref1):
    info = [[1, 2, 3], [4, 5, 6]]
    assert ref1.states(info) == [(0, 0), (1, 2), (4, 5), (0, 0)]


def test_reconstruction_boundary_and_interior(ref1, phi0):
    rng = np.random.default_rng(1)
    for code in (ref1, phi0):
        info = random_info(code, 5, rng)
        blocks = code.encode(info).tolist()
        states = code.states(info)
        first = code.reconstruct_information(blocks[:1], 0, 6)
        assert first == {0: (states[0], tuple(info[0]))}
        last = code.reconstruct_information(blocks[-1:], 5, 6)
        assert last == {5: (states[5], tuple([0] * code.k))}
        middle = code.reconstruct_information(blocks[2:3], 2, 6)
        if code.ell == 0:
            assert middle == {2: (states[2], tuple(info[2]))}
        else:
            # one interior block cannot separate i_Phi from s_Phi
            assert middle == {}
        pair = code.reconstruct_information(blocks[2:4], 2, 6)
        assert pair == {2: (states[2], tuple(info[2])), 3: (states[3], tuple(info[3]))}


def test_reconstruction_rejects_non_codewords(ref1):
    blocks = ref1.encode([[1, 2, 3], [4, 5, 6]]).tolist()
    bad = list(blocks[1])
    bad[0] ^= 1
    with pytest.raises(ReconstructionError):
        ref1.reconstruct_information([blocks[0], bad], 0, 3)


def test_reconstruction_rejects_inconsistent_window(ref1):
    # block 0 ends in state (1, 2) while block 1 was produced from state (7, 7)
    b0 = ref1.block((0, 0), (1, 2, 3))
    b1 = ref1.block((7, 7), (4, 5, 6))
    b2 = ref1.block((4, 5), (0, 0, 0))
    with pytest.raises(ReconstructionError):
        ref1.reconstruct_information([b0, b1, b2], 0, 3)


def test_zero_run_witness_errors(ref1, phi0):
    with pytest.raises(DomainError):
        phi0.zero_run_witness([1])
    with pytest.raises(UsageError):
        ref1.zero_run_witness([1, 1])
    with pytest.raises(UsageError):
        ref1.zero_run_witness([0])


def test_witness_shape(ref2):
    info = ref2.zero_run_witness([3]).tolist()
    assert len(info) == ref2.ell + 1
    blocks = ref2.encode(info).tolist()
    assert [any(b) for b in blocks] == [True, False, False, False, True]


def test_encode_validation(ref1):
    with pytest.raises(UsageError):
        ref1.encode([])
    with pytest.raises(UsageError):
        ref1.encode([[1, 2]])
    with pytest.raises(UsageError):
        ref1.encode([[1, 2, 8]])


def test_symbol_block_sequence():
    seq = SymbolBlockSequence.of([[1, 2], [3, 4]], role="information")
    assert len(seq) == 2 and seq[1] == (3, 4) and seq.flat() == [1, 2, 3, 4]
    with pytest.raises(UsageError):
        SymbolBlockSequence.of([[1, 2], [3]])
    with pytest.raises(UsageError):
        SymbolBlockSequence.of([])
