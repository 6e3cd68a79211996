"""Offset Reed-Solomon evaluation codes and their bounded-distance decoder.

A codeword of ``RsEvalCode(points, dim, offset)`` is the evaluation of
``x**offset * f(x)`` with ``deg f < dim`` at the (nonzero, distinct)
points.  Dividing each symbol by ``point**offset`` maps the code onto an
ordinary evaluation RS code, so decoding is: unscale, syndrome-decode the
generalized RS code, rescale.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import UsageError
from .galois import Field
from .linalg import MatrixGF, Solver


@dataclass(frozen=True)
class BlockDecodeOutcome:
    decoded: bool
    codeword: tuple[int, ...] | None = None
    message: tuple[int, ...] | None = None
    error_weight: int | None = None

    @property
    def status(self) -> str:
        return "decoded" if self.decoded else "failure"


FAILURE = BlockDecodeOutcome(False)


def _poly_eval(f: Field, poly: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(poly):
        acc = f.add(f.mul(acc, x), c)
    return acc


def berlekamp_massey(f: Field, syndromes: Sequence[int]) -> list[int]:
    """Shortest LFSR connection polynomial (lowest degree first) for the sequence."""
    conn = [1]
    prev = [1]
    length = 0
    shift = 1
    prev_disc = 1
    for step, s in enumerate(syndromes):
        disc = s
        for i in range(1, length + 1):
            if i < len(conn):
                disc = f.add(disc, f.mul(conn[i], syndromes[step - i]))
        if disc == 0:
            shift += 1
            continue
        coef = f.div(disc, prev_disc)
        update = [0] * shift + f.vec_scale(coef, prev)
        new = conn + [0] * max(0, len(update) - len(conn))
        for i, u in enumerate(update):
            new[i] = f.sub(new[i], u)
        if 2 * length <= step:
            prev, prev_disc = conn, disc
            length = step + 1 - length
            shift = 1
        else:
            shift += 1
        conn = new
    while len(conn) > 1 and conn[-1] == 0:
        conn.pop()
    return conn


class RsEvalCode:
    def __init__(self, field: Field, points: Sequence[int], dim: int, offset: int = 0):
        n = len(points)
        if len(set(points)) != n:
            raise UsageError("evaluation points must be distinct")
        if any(x == 0 for x in points):
            raise UsageError("evaluation points must be nonzero")
        for x in points:
            field.check(x)
        if dim < 1 or offset < 0 or dim + offset > n:
            raise UsageError(f"need 1 <= dim and dim + offset <= n, got dim={dim}, offset={offset}, n={n}")
        self.field = field
        self.points = tuple(points)
        self.n = n
        self.dim = dim
        self.offset = offset
        self.d = n - dim + 1
        self.t = (self.d - 1) // 2

        f = field
        self._scale = [f.pow(x, offset) for x in points]
        self._inv_points = [f.inv(x) for x in points]
        # column multipliers of the dual GRS code
        mult = []
        for i, xi in enumerate(points):
            prod = 1
            for j, xj in enumerate(points):
                if i != j:
                    prod = f.mul(prod, f.sub(xi, xj))
            mult.append(f.inv(prod))
        self._dual_mult = mult
        nsyn = n - dim
        self._parity = [[f.mul(mult[t], f.pow(points[t], l)) for t in range(n)] for l in range(nsyn)]
        self.generator = MatrixGF(
            f, [[f.pow(x, offset + r) for x in points] for r in range(dim)], n
        )
        self._solver = Solver(self.generator)

    def __repr__(self) -> str:
        return f"RsEvalCode(n={self.n}, dim={self.dim}, offset={self.offset}, d={self.d})"

    def generator_matrix(self) -> MatrixGF:
        return self.generator

    def encode(self, message: Sequence[int]) -> list[int]:
        if len(message) != self.dim:
            raise UsageError(f"message length {len(message)} != dim {self.dim}")
        f = self.field
        out = [0] * self.n
        for coef, row in zip(message, self.generator.entries):
            if coef:
                out = f.vec_add(out, f.vec_scale(coef, row))
        return out

    def message_of(self, codeword: Sequence[int]) -> list[int]:
        return self._solver.solve(codeword, check=False)

    def syndromes(self, word: Sequence[int]) -> list[int]:
        f = self.field
        y = [f.div(r, s) for r, s in zip(word, self._scale)]
        out = []
        for row in self._parity:
            acc = 0
            for h, v in zip(row, y):
                if v:
                    acc = f.add(acc, f.mul(h, v))
            out.append(acc)
        return out

    def is_codeword(self, word: Sequence[int]) -> bool:
        return not any(self.syndromes(word))

    def bmd_decode(self, received: Sequence[int]) -> BlockDecodeOutcome:
        """Correct up to floor((d-1)/2) errors, otherwise report failure."""
        if len(received) != self.n:
            raise UsageError(f"received word of length {len(received)} != n {self.n}")
        f = self.field
        word = list(received)
        syn = self.syndromes(word)
        if not any(syn):
            return BlockDecodeOutcome(True, tuple(word), tuple(self.message_of(word)), 0)
        locator = berlekamp_massey(f, syn)
        nerr = len(locator) - 1
        if nerr > self.t or nerr == 0:
            return FAILURE
        positions = [i for i, xinv in enumerate(self._inv_points) if _poly_eval(f, locator, xinv) == 0]
        if len(positions) != nerr:
            return FAILURE
        # evaluator = locator * S mod x^(n-dim)
        nsyn = len(syn)
        evaluator = [0] * nsyn
        for i, a in enumerate(locator):
            if a:
                for j in range(nsyn - i):
                    evaluator[i + j] = f.add(evaluator[i + j], f.mul(a, syn[j]))
        deriv = []
        for i in range(1, len(locator)):
            c = locator[i]
            for _ in range(1, i):
                c = f.add(c, locator[i])
            deriv.append(c)
        for pos in positions:
            x, xinv = self.points[pos], self._inv_points[pos]
            denom = _poly_eval(f, deriv, xinv)
            if denom == 0:
                return FAILURE
            num = f.mul(x, _poly_eval(f, evaluator, xinv))
            value = f.neg(f.div(num, denom))
            err = f.div(value, self._dual_mult[pos])
            if err == 0:
                return FAILURE
            word[pos] = f.sub(word[pos], f.mul(err, self._scale[pos]))
        if not self.is_codeword(word):
            return FAILURE
        return BlockDecodeOutcome(True, tuple(word), tuple(self.message_of(word)), nerr)


def derived_codes(pum) -> tuple[RsEvalCode, RsEvalCode, RsEvalCode, RsEvalCode]:
    """(C0, C1, C01, C_alpha) over the evaluation points of ``pum``."""
    f, pts = pum.field, pum.points
    k, k1, phi = pum.k, pum.k1, pum.phi
    c0 = RsEvalCode(f, pts, k, 0)
    c1 = RsEvalCode(f, pts, k, k1 - phi)
    c01 = RsEvalCode(f, pts, k - k1, k1)
    calpha = RsEvalCode(f, pts, k + k1 - phi, 0)
    return c0, c1, c01, calpha
