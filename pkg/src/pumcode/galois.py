"""Arithmetic in GF(p^m) on integer-encoded elements.

An element is an integer in ``[0, q)`` holding the coefficient vector of a
polynomial over GF(p) in base p (coefficient of x^i is digit i).  The hot
paths (decoders, trellis search) work on plain ints through the methods of
:class:`Field`; :class:`FieldElement` is a thin typed wrapper for callers
that want operator syntax and mixed-field checking.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import DomainError, UsageError

MAX_ORDER = 1 << 16

# Conway polynomials for characteristic 2, packed base 2 (bit i = coeff of x^i).
CONWAY_P2 = {
    1: 0b10,  # x, i.e. plain GF(2)
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1011011,
    7: 0b10000011,
    8: 0b100011101,
}


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _unpack(value: int, p: int) -> list[int]:
    coeffs = []
    while value:
        value, r = divmod(value, p)
        coeffs.append(r)
    return coeffs


def _pack(coeffs: Sequence[int], p: int) -> int:
    value = 0
    for c in reversed(coeffs):
        value = value * p + c
    return value


def _trim(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a by monic-or-not b over GF(p)."""
    a = _trim(list(a))
    b = _trim(list(b))
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        factor = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * c) % p
        _trim(a)
    return a


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    f = _trim(list(coeffs))
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    for deg in range(1, m // 2 + 1):
        for low in range(p**deg):
            divisor = _unpack(low, p)
            divisor += [0] * (deg - len(divisor)) + [1]
            if not _poly_mod(f, divisor, p):
                return False
    return True


def default_modulus(p: int, m: int) -> int:
    """Packed default modulus: Conway table for p=2, else the smallest irreducible."""
    if m == 1:
        return p
    if p == 2 and m in CONWAY_P2:
        return CONWAY_P2[m]
    for low in range(1, p**m):
        coeffs = _unpack(low, p)
        coeffs += [0] * (m - len(coeffs)) + [1]
        if is_irreducible(coeffs, p):
            return _pack(coeffs, p)
    raise DomainError(f"no irreducible polynomial of degree {m} over GF({p})")


class Field:
    """GF(p^m) with an explicit modulus; immutable after construction."""

    def __init__(self, p: int, m: int = 1, modulus: int | None = None):
        if not _is_prime(p):
            raise UsageError(f"characteristic {p} is not prime")
        if m < 1:
            raise UsageError("extension degree must be >= 1")
        q = p**m
        if q > MAX_ORDER:
            raise UsageError(f"field order {q} exceeds the cap {MAX_ORDER}")
        if modulus is None:
            modulus = default_modulus(p, m)
        coeffs = _unpack(modulus, p)
        if len(coeffs) != m + 1 or coeffs[-1] != 1:
            raise UsageError(f"modulus {modulus} is not a monic degree-{m} polynomial over GF({p})")
        if m > 1 and not is_irreducible(coeffs, p):
            raise UsageError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.m = m
        self.q = q
        self.modulus = modulus
        self._mod_coeffs = coeffs
        self._build_tables()

    def __repr__(self) -> str:
        return f"Field(p={self.p}, m={self.m}, modulus={self.modulus})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and (self.p, self.m, self.modulus) == (
            other.p,
            other.m,
            other.modulus,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    # -- construction -------------------------------------------------------

    def _slow_mul(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        if m == 1:
            return a * b % p
        prod = [0] * (2 * m)
        for i, x in enumerate(_unpack(a, p)):
            if x:
                for j, y in enumerate(_unpack(b, p)):
                    prod[i + j] = (prod[i + j] + x * y) % p
        return _pack(_poly_mod(prod, self._mod_coeffs, p), p)

    def _build_tables(self) -> None:
        q = self.q
        primitive = None
        for g in range(1, q):
            x, order = g, 1
            while x != 1:
                x = self._slow_mul(x, g)
                order += 1
            if order == q - 1:
                primitive = g
                break
        assert primitive is not None
        self.primitive = primitive
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, primitive)
        for i in range(q - 1, 2 * (q - 1)):
            exp[i] = exp[i - (q - 1)]
        self._exp = exp
        self._log = log
        if self.p == 2:
            self._neg = None
        else:
            self._neg = [self._digitwise(0, a, -1) for a in range(q)]

    def _digitwise(self, a: int, b: int, sign: int) -> int:
        p = self.p
        if self.m == 1:
            return (a + sign * b) % p
        out, scale = 0, 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            out += ((da + sign * db) % p) * scale
            scale *= p
        return out

    # -- scalar arithmetic on ints -----------------------------------------

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise UsageError(f"symbol {a} is outside GF({self.q})")
        return a

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self._digitwise(a, b, 1)

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self._digitwise(a, b, -1)

    def neg(self, a: int) -> int:
        if self._neg is None:
            return a
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DomainError("zero has no multiplicative inverse")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise DomainError("division by zero")
        if a == 0:
            return 0
        return self._exp[self._log[a] - self._log[b] + self.q - 1]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise DomainError("zero has no multiplicative inverse")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def log(self, a: int) -> int:
        if a == 0:
            raise DomainError("log of zero")
        return self._log[a]

    def alpha_pow(self, e: int) -> int:
        return self._exp[e % (self.q - 1)]

    def nonzero_elements(self) -> list[int]:
        """alpha^0, alpha^1, ..., alpha^(q-2) for the smallest primitive alpha."""
        return self._exp[: self.q - 1]

    def elements(self) -> Iterator[int]:
        return iter(range(self.q))

    # -- vectors ------------------------------------------------------------

    def vec_add(self, u: Sequence[int], v: Sequence[int]) -> list[int]:
        if self.p == 2:
            return [a ^ b for a, b in zip(u, v)]
        return [self._digitwise(a, b, 1) for a, b in zip(u, v)]

    def vec_sub(self, u: Sequence[int], v: Sequence[int]) -> list[int]:
        if self.p == 2:
            return [a ^ b for a, b in zip(u, v)]
        return [self._digitwise(a, b, -1) for a, b in zip(u, v)]

    def vec_scale(self, c: int, v: Sequence[int]) -> list[int]:
        if c == 0:
            return [0] * len(v)
        exp, log = self._exp, self._log
        lc = log[c]
        return [exp[lc + log[a]] if a else 0 for a in v]

    # -- numpy helpers for the brute-force oracle ---------------------------

    @cached_property
    def add_table(self) -> np.ndarray:
        """q x q addition table; only built on demand."""
        q = self.q
        if self.p == 2:
            a = np.arange(q)
            return np.bitwise_xor.outer(a, a)
        if q > 4096:
            raise UsageError("addition table too large for this field")
        return np.array([[self.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)

    def np_add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return self.add_table[a, b]

    @cached_property
    def mul_table(self) -> np.ndarray:
        q = self.q
        if q > 4096:
            raise UsageError("multiplication table too large for this field")
        return np.array([[self.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)

    # -- serialization -------------------------------------------------------

    def to_spec_lines(self) -> list[str]:
        return [f"p={self.p}", f"m={self.m}", f"modulus={self.modulus}"]

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self, self.check(value))


@dataclass(frozen=True)
class FieldElement:
    field: Field
    value: int

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.field.q:
            raise UsageError(f"value {self.value} is outside GF({self.field.q})")

    def _same(self, other: "FieldElement") -> Field:
        if not isinstance(other, FieldElement):
            return NotImplemented  # type: ignore[return-value]
        if other.field != self.field:
            raise UsageError("operands belong to different fields")
        return self.field

    def __add__(self, other: "FieldElement") -> "FieldElement":
        f = self._same(other)
        return FieldElement(f, f.add(self.value, other.value))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        f = self._same(other)
        return FieldElement(f, f.sub(self.value, other.value))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        f = self._same(other)
        return FieldElement(f, f.mul(self.value, other.value))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        f = self._same(other)
        return FieldElement(f, f.div(self.value, other.value))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int) -> "FieldElement":
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"GF({self.field.q})({self.value})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def nonzero_elements(field: Field) -> list[FieldElement]:
    return [FieldElement(field, v) for v in field.nonzero_elements()]


_CACHE: dict[tuple[int, int, int | None], Field] = {}


def get_field(p: int, m: int = 1, modulus: int | None = None) -> Field:
    """Cached constructor; table building is the expensive part."""
    key = (p, m, modulus)
    if key not in _CACHE:
        _CACHE[key] = Field(p, m, modulus)
    return _CACHE[key]
