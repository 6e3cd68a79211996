"""Arbitrary-rate partial unit memory codes built from one RS generator.

The rows of the C_alpha generator (monomials x^0 .. x^(k+k1-phi-1)) are
partitioned top to bottom into A, Phi, G01, B of sizes k1-phi, phi,
k-k1, k1-phi, and

    G0 = (A; Phi; G01)        G1 = (Phi; B; 0) = (G10; 0)

A code block is ``c_j = i_j . G0 + s_j . G10`` where the state ``s_j`` is
the first k1 symbols of ``i_{j-1}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .blockcodes import derived_codes
from .errors import ConstructionError, DomainError, InconsistentSystemError, UsageError
from .galois import Field
from .linalg import MatrixGF, Solver, mat_vec, rank, rref, vstack


class ReconstructionError(InconsistentSystemError):
    """Decoded blocks in a window do not fit a single code path."""


@dataclass(frozen=True)
class DistanceProfile:
    n: int
    k: int
    k1: int
    phi: int
    ell: int
    d_alpha: int
    d0: int
    d1: int
    d01: int
    alpha: Fraction
    dfree: int

    @classmethod
    def of(cls, n: int, k: int, k1: int, phi: int) -> "DistanceProfile":
        ell = math.ceil(phi / (k1 - phi))
        d_alpha = n - k - k1 + phi + 1
        return cls(
            n=n,
            k=k,
            k1=k1,
            phi=phi,
            ell=ell,
            d_alpha=d_alpha,
            d0=n - k + 1,
            d1=n - k + 1,
            d01=n - k + k1 + 1,
            alpha=Fraction(d_alpha, math.ceil(k1 / (k1 - phi))),
            dfree=min(n - k + k1 + 1, 2 * (n - k + 1)),
        )

    def drdes(self, j: int) -> Fraction:
        """Designed extended row distance."""
        _check_order(j)
        if j == 1:
            return Fraction(self.d01)
        return self.d0 + (j - 2) * self.alpha + self.d1

    def dcdes(self, j: int) -> Fraction:
        """Designed extended column distance."""
        _check_order(j)
        return self.d0 + (j - 1) * self.alpha

    def drcdes(self, j: int) -> Fraction:
        """Designed extended reverse column distance."""
        _check_order(j)
        return (j - 1) * self.alpha + self.d1

    @property
    def slope_lower_bound(self) -> Fraction:
        return self.alpha

    @property
    def dfree_designed(self) -> int:
        return self.dfree


def _check_order(j: int) -> None:
    if j < 1:
        raise UsageError(f"distance order must be >= 1, got {j}")


@dataclass(frozen=True)
class SymbolBlockSequence:
    """N blocks of equal length; role is 'information', 'codeword', 'received' or 'error'."""

    blocks: tuple[tuple[int, ...], ...]
    block_length: int
    role: str = "codeword"

    @classmethod
    def of(cls, blocks: Iterable[Sequence[int]], block_length: int | None = None, role: str = "codeword"):
        rows = tuple(tuple(int(x) for x in b) for b in blocks)
        if block_length is None:
            if not rows:
                raise UsageError("empty sequence needs an explicit block length")
            block_length = len(rows[0])
        for b in rows:
            if len(b) != block_length:
                raise UsageError(f"block of length {len(b)} in a sequence of length-{block_length} blocks")
        return cls(rows, block_length, role)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.blocks)

    def __getitem__(self, idx):
        return self.blocks[idx]

    def tolist(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    def flat(self) -> list[int]:
        return [x for b in self.blocks for x in b]


class PumCode:
    """(n, k | k1) PUM code with phi rows shared between G0 and G1."""

    def __init__(self, field: Field, n: int, k: int, k1: int, phi: int, points: Sequence[int] | None = None):
        _validate(field, n, k, k1, phi, points)
        if points is None:
            points = field.nonzero_elements()[:n]
        self.field = field
        self.n, self.k, self.k1, self.phi = n, k, k1, phi
        self.points = tuple(points)
        self.profile = DistanceProfile.of(n, k, k1, phi)

        self.c0, self.c1, self.c01, self.calpha = derived_codes(self)
        rows = self.calpha.generator.entries
        s = k1 - phi
        self.A = MatrixGF(field, rows[0:s], n)
        self.Phi = MatrixGF(field, rows[s:k1], n)
        self.G01 = MatrixGF(field, rows[k1:k], n)
        self.B = MatrixGF(field, rows[k:k + s], n)
        self.G_tot = self.calpha.generator
        self.G00 = MatrixGF(field, rows[0:k1], n)
        self.G10 = MatrixGF(field, rows[s:k1] + rows[k:k + s], n)
        self.G0 = MatrixGF(field, rows[0:k], n)
        self.G1 = vstack(self.G10, MatrixGF.zeros(field, k - k1, n))
        self.G_alpha = vstack(self.G00, self.G01, self.G10)
        self._tot_solver = Solver(self.G_tot)

    def __repr__(self) -> str:
        return f"PumCode(q={self.field.q}, n={self.n}, k={self.k}, k1={self.k1}, phi={self.phi})"

    @property
    def ell(self) -> int:
        return self.profile.ell

    # -- encoding ----------------------------------------------------------

    def block(self, state: Sequence[int], info: Sequence[int]) -> list[int]:
        """Code block produced by information ``info`` leaving ``state``."""
        f = self.field
        return f.vec_add(mat_vec(self.G0, info), mat_vec(self.G10, state))

    def encode(self, info: Iterable[Sequence[int]]) -> SymbolBlockSequence:
        """Zero-terminated encoding: L information blocks give L+1 code blocks."""
        blocks = [list(b) for b in info]
        if not blocks:
            raise UsageError("need at least one information block")
        for b in blocks:
            if len(b) != self.k:
                raise UsageError(f"information block of length {len(b)}, expected k={self.k}")
            for x in b:
                self.field.check(x)
        out = []
        state = [0] * self.k1
        for b in blocks:
            out.append(self.block(state, b))
            state = b[: self.k1]
        out.append(self.block(state, [0] * self.k))
        return SymbolBlockSequence.of(out, self.n, "codeword")

    def states(self, info: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
        """Encoder states s_0 .. s_N for a terminated information sequence."""
        out = [tuple([0] * self.k1)]
        for b in info:
            out.append(tuple(b[: self.k1]))
        out.append(tuple([0] * self.k1))
        return out

    # -- reconstruction ----------------------------------------------------

    def coefficients(self, codeword: Sequence[int]) -> list[int]:
        """The vector v with codeword = v . G_tot."""
        try:
            return self._tot_solver.solve(codeword)
        except InconsistentSystemError as exc:
            raise ReconstructionError("block is not a codeword of C_alpha") from exc

    def reconstruct_information(
        self,
        window: Sequence[Sequence[int]],
        start: int,
        total_blocks: int | None = None,
    ) -> dict[int, tuple[tuple[int, ...], tuple[int, ...]]]:
        """Recover (state, information) edges from consecutive decoded blocks.

        ``window`` holds decoded code blocks at depths start, start+1, ...
        When ``start == 0`` the zero start state is used; when the window
        reaches ``total_blocks - 1`` the forced zero tail is used.  Returns
        every depth whose edge is uniquely determined.
        """
        w = len(window)
        if w == 0:
            return {}
        at_start = start == 0
        at_end = total_blocks is not None and start + w == total_blocks
        system = _window_system(self.field, self.k, self.k1, self.phi, w, at_start, at_end)
        rhs: list[int] = []
        for block in window:
            rhs.extend(self.coefficients(block))
        rhs.extend([0] * system.boundary_rows)
        values = system.solve(self.field, rhs)
        out = {}
        k, k1 = self.k, self.k1
        for t in range(w):
            svars = system.state_vars(t)
            ivars = range(k1 + t * k, k1 + (t + 1) * k)
            if all(v in values for v in svars) and all(v in values for v in ivars):
                out[start + t] = (
                    tuple(values[v] for v in svars),
                    tuple(values[v] for v in ivars),
                )
        return out

    # -- zero-block witness ------------------------------------------------

    @property
    def witness_payload_length(self) -> int:
        return self.phi - (self.ell - 1) * (self.k1 - self.phi)

    def zero_run_witness(self, payload: Sequence[int]) -> SymbolBlockSequence:
        """Information blocks whose encoding contains ``ell`` zero code blocks.

        ``payload`` (``witness_payload_length`` symbols, not all zero) starts
        in the A-part of the first block and is shifted right by k1 - phi
        positions per block, negated on every second block, until it leaves
        the state.  The length keeps every shifted copy but the last inside
        the Phi rows, which is what forces the intermediate blocks to zero.
        """
        if self.ell == 0:
            raise DomainError("phi = 0: no zero run exists")
        s = self.k1 - self.phi
        size = self.witness_payload_length
        if len(payload) != size:
            raise UsageError(f"payload must have {size} symbols")
        if not any(payload):
            raise UsageError("payload must be nonzero")
        f = self.field
        blocks = []
        for h in range(self.ell + 1):
            state = [0] * self.k1
            sym = list(payload) if h % 2 == 0 else [f.neg(x) for x in payload]
            state[h * s:h * s + size] = sym
            blocks.append(state[: self.k1] + [0] * (self.k - self.k1))
        return SymbolBlockSequence.of(blocks, self.k, "information")

    # -- designed distances -------------------------------------------------

    def drdes(self, j: int) -> Fraction:
        return self.profile.drdes(j)

    def dcdes(self, j: int) -> Fraction:
        return self.profile.dcdes(j)

    def drcdes(self, j: int) -> Fraction:
        return self.profile.drcdes(j)

    def check_ranks(self) -> tuple[int, int, int]:
        return rank(self.G0), rank(self.G1), rank(self.G_tot)


def _validate(field: Field, n: int, k: int, k1: int, phi: int, points) -> None:
    if not 1 <= k1:
        raise ConstructionError(f"k1 >= 1 violated (k1={k1})")
    if not k1 < k:
        raise ConstructionError(f"k1 < k violated (k1={k1}, k={k})")
    if not k < n:
        raise ConstructionError(f"k < n violated (k={k}, n={n})")
    if not 0 <= phi:
        raise ConstructionError(f"phi >= 0 violated (phi={phi})")
    if not phi < k1:
        raise ConstructionError(f"phi < k1 violated (phi={phi}, k1={k1})")
    if not k + k1 - phi <= n:
        raise ConstructionError(f"k + k1 - phi <= n violated ({k} + {k1} - {phi} > {n})")
    if points is None:
        if n > field.q - 1:
            raise ConstructionError(f"n <= q - 1 violated (n={n}, q={field.q})")
        return
    if len(points) != n:
        raise ConstructionError(f"expected {n} evaluation points, got {len(points)}")
    if len(set(points)) != n:
        raise ConstructionError("evaluation points must be distinct")
    for x in points:
        if not 0 < x < field.q:
            raise ConstructionError(f"evaluation point {x} must be a nonzero field element")


def construct(field: Field, n: int, k: int, k1: int, phi: int, points: Sequence[int] | None = None) -> PumCode:
    return PumCode(field, n, k, k1, phi, points)


@dataclass
class _WindowSystem:
    """Cached elimination for the coefficient structure of a window.

    Rows of ``transform`` map the stacked right-hand side to the reduced
    system; ``determined`` lists (variable, reduced row) pairs, and
    ``check_rows`` are reduced rows that must vanish for consistency.
    """

    k: int
    k1: int
    w: int
    boundary_rows: int
    transform: list[list[int]]
    determined: dict[int, int]
    check_rows: list[int] = dc_field(default_factory=list)

    def state_vars(self, t: int) -> range:
        if t == 0:
            return range(0, self.k1)
        base = self.k1 + (t - 1) * self.k
        return range(base, base + self.k1)

    def solve(self, field: Field, rhs: Sequence[int]) -> dict[int, int]:
        reduced = {}
        need = set(self.determined.values()) | set(self.check_rows)
        for r in need:
            acc = 0
            for c, b in zip(self.transform[r], rhs):
                if c and b:
                    acc = field.add(acc, field.mul(c, b))
            reduced[r] = acc
        if any(reduced[r] for r in self.check_rows):
            raise ReconstructionError("decoded blocks are inconsistent")
        return {v: reduced[r] for v, r in self.determined.items()}


@lru_cache(maxsize=None)
def _window_system(field: Field, k: int, k1: int, phi: int, w: int, at_start: bool, at_end: bool) -> _WindowSystem:
    s = k1 - phi
    nvars = k1 + w * k

    def state_var(t: int, idx: int) -> int:
        if t == 0:
            return idx
        return k1 + (t - 1) * k + idx

    def info_var(t: int, idx: int) -> int:
        return k1 + t * k + idx

    eqs: list[list[int]] = []
    for t in range(w):
        def row(*vars_: int) -> list[int]:
            r = [0] * nvars
            for v in vars_:
                r[v] = 1
            return r

        for a in range(s):
            eqs.append(row(info_var(t, a)))
        for a in range(phi):
            eqs.append(row(info_var(t, s + a), state_var(t, a)))
        for a in range(k - k1):
            eqs.append(row(info_var(t, k1 + a)))
        for a in range(s):
            eqs.append(row(state_var(t, phi + a)))
    boundary = 0
    if at_start:
        for a in range(k1):
            eqs.append([int(v == state_var(0, a)) for v in range(nvars)])
            boundary += 1
    if at_end:
        for a in range(k):
            eqs.append([int(v == info_var(w - 1, a)) for v in range(nvars)])
            boundary += 1
    neq = len(eqs)
    aug = [eqs[i] + [int(i == j) for j in range(neq)] for i in range(neq)]
    red, pivots = rref(aug, field, ncols=nvars)
    pivot_set = set(pivots)
    free = [c for c in range(nvars) if c not in pivot_set]
    determined = {}
    for r, c in enumerate(pivots):
        if all(red[r][f] == 0 for f in free):
            determined[c] = r
    transform = [row[nvars:] for row in red]
    check_rows = list(range(len(pivots), neq))
    return _WindowSystem(k, k1, w, boundary, transform, determined, check_rows)
