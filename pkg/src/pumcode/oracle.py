"""Exhaustive ground truth: full-trellis ML decoding, extended distances,
nearest-codeword search and the bounded-distance condition checkers.

Everything here enumerates; nothing reuses the decoder's algebra.  Code
blocks are produced directly as ``i . G0 + s . G1`` over all states and
inputs, so the oracle shares only the generator matrices with the path it
checks.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .blockcodes import RsEvalCode
from .errors import ScaleGuardError, UsageError
from .galois import Field
from .linalg import MatrixGF
from .pum import PumCode

ML_STATE_LIMIT = 1 << 12
ML_EDGE_LIMIT = 1 << 20
DIST_EDGE_LIMIT = 1 << 28
NEAREST_LIMIT = 1 << 16
INF = np.iinfo(np.int32).max // 4


def all_vectors(q: int, length: int) -> np.ndarray:
    """Every vector of F_q^length, row r is r written in base q (first symbol most significant)."""
    if length == 0:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.arange(q**length, dtype=np.int64)
    out = np.empty((q**length, length), dtype=np.int64)
    for pos in range(length - 1, -1, -1):
        idx, out[:, pos] = np.divmod(idx, q)
    return out


def vectors_times(field: Field, vecs: np.ndarray, m: MatrixGF) -> np.ndarray:
    """Row-wise vecs . m for a stack of vectors."""
    mul = field.mul_table
    g = np.array(m.entries, dtype=np.int64).reshape(m.rows, m.cols)
    out = np.zeros((vecs.shape[0], m.cols), dtype=np.int64)
    for r in range(m.rows):
        out = field.np_add(out, mul[vecs[:, r][:, None], g[r][None, :]])
    return out


def vector_index(q: int, vec: Sequence[int]) -> int:
    idx = 0
    for x in vec:
        idx = idx * q + int(x)
    return idx


# -- full-trellis ML decoding ---------------------------------------------


@dataclass
class FullTrellis:
    """All q^k1 states and all q^k transitions of one trellis section."""

    code: PumCode
    states: np.ndarray  # (q^k1, k1)
    inputs: np.ndarray  # (q^k, k)
    next_state: np.ndarray  # (q^k,) index of i[:k1]
    unique_blocks: np.ndarray  # (U, n)
    block_index: np.ndarray  # (q^k1, q^k) -> row of unique_blocks


def _ml_guard(code: PumCode) -> None:
    q = code.field.q
    if q**code.k1 > ML_STATE_LIMIT or q ** (code.k1 + code.k) > ML_EDGE_LIMIT:
        raise ScaleGuardError(
            f"full trellis with q^k1={q**code.k1} states and q^(k+k1)={q**(code.k + code.k1)} edges exceeds the oracle limits"
        )


@lru_cache(maxsize=8)
def full_trellis(code: PumCode) -> FullTrellis:
    _ml_guard(code)
    f, q = code.field, code.field.q
    states = all_vectors(q, code.k1)
    inputs = all_vectors(q, code.k)
    by_input = vectors_times(f, inputs, code.G0)
    padded = np.concatenate([states, np.zeros((states.shape[0], code.k - code.k1), dtype=np.int64)], axis=1)
    by_state = vectors_times(f, padded, code.G1)
    blocks = f.np_add(by_state[:, None, :], by_input[None, :, :])
    uniq, inv = np.unique(blocks.reshape(-1, code.n), axis=0, return_inverse=True)
    next_state = np.arange(q**code.k) // q ** (code.k - code.k1)
    return FullTrellis(code, states, inputs, next_state, uniq, inv.reshape(q**code.k1, q**code.k))


def ml_decode(code: PumCode, received: Sequence[Sequence[int]]) -> tuple[list[list[int]], int]:
    """Minimum-Hamming-distance terminated path; ties go to the lexicographically smallest information."""
    trellis = full_trellis(code)
    nblocks = len(received)
    if nblocks < 2:
        raise ValueError("a terminated sequence has at least two blocks")
    weights = []
    for r in received:
        dist = (trellis.unique_blocks != np.asarray(r, dtype=np.int64)[None, :]).sum(axis=1)
        weights.append(dist[trellis.block_index])
    nstates = trellis.states.shape[0]
    ns = trellis.next_state
    # cost_to_go[t][s]: best weight of blocks t..N-1 starting in state s at depth t
    cost = [None] * (nblocks + 1)
    cost[nblocks] = np.full(nstates, INF, dtype=np.int64)
    cost[nblocks][0] = 0
    last = np.full(nstates, INF, dtype=np.int64)
    last[:] = weights[nblocks - 1][:, 0]
    cost[nblocks - 1] = last
    for t in range(nblocks - 2, -1, -1):
        total = weights[t] + cost[t + 1][ns][None, :]
        cost[t] = total.min(axis=1)
    state = 0
    info = []
    for t in range(nblocks - 1):
        total = weights[t][state] + cost[t + 1][ns]
        choice = int(np.flatnonzero(total == cost[t][state])[0])
        info.append([int(x) for x in trellis.inputs[choice]])
        state = int(ns[choice])
    return info, int(cost[0][0])


# -- extended distances ------------------------------------------------------


@dataclass
class ExtendedDistances:
    row: list[int]
    column: list[int]
    reverse_column: list[int]
    dfree: int
    dfree_order: int

    def as_dict(self) -> dict:
        return {
            "row": self.row,
            "column": self.column,
            "reverse_column": self.reverse_column,
            "dfree": self.dfree,
        }


def _transition_minima(code: PumCode) -> tuple[np.ndarray, int]:
    """M[s, s'] = min over the free symbols x of wt(s'.G00 + x.G01 + s.G10).

    Also returns the weight of the lightest nonzero edge from the zero
    state back to the zero state.
    """
    f, q = code.field, code.field.q
    k, k1 = code.k, code.k1
    if q**k1 > ML_STATE_LIMIT or q ** (k + k1) > DIST_EDGE_LIMIT:
        raise ScaleGuardError(f"distance search over q^(k+k1)={q**(k + k1)} edges exceeds the oracle limit")
    nstates, nfree = q**k1, q ** (k - k1)
    by_input = vectors_times(f, all_vectors(q, k), code.G0)
    states = all_vectors(q, k1)
    padded = np.concatenate([states, np.zeros((nstates, k - k1), dtype=np.int64)], axis=1)
    by_state = vectors_times(f, padded, code.G1)
    minima = np.empty((nstates, nstates), dtype=np.int32)
    chunk = max(1, (1 << 22) // (q**k * code.n))
    for lo in range(0, nstates, chunk):
        hi = min(nstates, lo + chunk)
        blocks = f.np_add(by_state[lo:hi, None, :], by_input[None, :, :])
        wt = np.count_nonzero(blocks, axis=2).reshape(hi - lo, nstates, nfree)
        minima[lo:hi] = wt.min(axis=2)
    zero_loop = int(np.count_nonzero(by_input[1:nfree], axis=1).min())
    return minima, zero_loop


@lru_cache(maxsize=8)
def extended_distances(code: PumCode, jmax: int, dfree_horizon: int = 256) -> ExtendedDistances:
    """Exact d^r_j, d^c_j, d^rc_j for j = 1..jmax and the free distance."""
    if jmax < 1:
        raise ValueError("jmax must be >= 1")
    m, zero_loop = _transition_minima(code)
    m = m.astype(np.int64)
    nz = np.arange(m.shape[0]) != 0

    row = [zero_loop]
    column = [min(zero_loop, int(m[0, nz].min()))]
    reverse = [min(zero_loop, int(m[nz, 0].min()))]

    fwd = np.where(nz, m[0], INF)  # from the zero state, intermediate states nonzero
    rev = np.where(nz, m.min(axis=0), INF)  # from any state
    dfree = zero_loop
    order = 1
    for j in range(2, max(jmax, 2) + dfree_horizon):
        back_to_zero = int((fwd[nz] + m[nz, 0]).min())
        step = (fwd[nz][:, None] + m[nz]).min(axis=0)
        fwd_next = np.where(nz, step, INF)
        if back_to_zero < dfree:
            dfree, order = back_to_zero, j
        if j <= jmax:
            row.append(back_to_zero)
            column.append(min(back_to_zero, int(fwd_next[nz].min())))
            rstep = (rev[nz][:, None] + m[nz]).min(axis=0)
            reverse.append(int((rev[nz] + m[nz, 0]).min()))
            rev = np.where(nz, rstep, INF)
        fwd = fwd_next
        if j >= jmax and int(fwd[nz].min()) >= dfree:
            break
    else:
        raise ScaleGuardError("free distance search did not converge")
    return ExtendedDistances(row[:jmax], column[:jmax], reverse[:jmax], dfree, order)


# -- bounded-distance conditions ---------------------------------------------


def block_weights(errors) -> list[int]:
    """Hamming weight per block; accepts blocks of symbols or plain weights."""
    out = []
    for e in errors:
        if isinstance(e, (int, np.integer)):
            out.append(int(e))
        else:
            out.append(sum(1 for x in e if x))
    return out


def bmd_condition(code: PumCode, errors) -> bool:
    """Every window of i consecutive blocks carries fewer than drdes(i)/2 errors."""
    w = block_weights(errors)
    prof = code.profile
    for j in range(len(w)):
        acc = 0
        for i in range(1, len(w) - j + 1):
            acc += w[j + i - 1]
            if 2 * acc >= prof.drdes(i):
                return False
    return True


def bmd_block_condition(code: PumCode, errors, j: int) -> bool:
    """The window condition restricted to windows that cover block j."""
    w = block_weights(errors)
    if not 0 <= j < len(w):
        raise UsageError(f"block {j} outside a sequence of {len(w)} blocks")
    prof = code.profile
    for start in range(0, j + 1):
        acc = sum(w[start:j])
        for end in range(j, len(w)):
            acc += w[end]
            if 2 * acc >= prof.drdes(end - start + 1):
                return False
    return True


# -- block-code ground truth ------------------------------------------------


@lru_cache(maxsize=32)
def _codebook(code: RsEvalCode) -> tuple[np.ndarray, np.ndarray]:
    q = code.field.q
    if q**code.dim > NEAREST_LIMIT:
        raise ScaleGuardError(f"q^dim={q**code.dim} codewords exceeds the exhaustive-search limit")
    msgs = all_vectors(q, code.dim)
    return msgs, vectors_times(code.field, msgs, code.generator)


def nearest_codeword(code: RsEvalCode, received: Sequence[int]) -> tuple[list[int], int]:
    """Closest codeword by exhaustive search; ties go to the smallest message."""
    _, words = _codebook(code)
    dist = (words != np.asarray(received, dtype=np.int64)[None, :]).sum(axis=1)
    best = int(np.argmin(dist))
    return [int(x) for x in words[best]], int(dist[best])


def minimum_distance(code: RsEvalCode) -> int:
    _, words = _codebook(code)
    return int(np.count_nonzero(words[1:], axis=1).min())
