"""Text formats: code-spec files (key=value) and block sequence files."""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

from .errors import UsageError
from .galois import get_field
from .pum import PumCode

REQUIRED_KEYS = ("p", "m", "n", "k", "k1", "phi")
OPTIONAL_KEYS = ("modulus", "points")


class FormatError(UsageError):
    """Malformed input file."""


def parse_code_spec(text: str) -> dict:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in REQUIRED_KEYS + OPTIONAL_KEYS:
            raise FormatError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise FormatError(f"line {lineno}: duplicate key {key!r}")
        try:
            if key == "points":
                values[key] = [int(x) for x in value.split(",")]
            else:
                values[key] = int(value)
        except ValueError:
            raise FormatError(f"line {lineno}: {key} must be an integer (list), got {value!r}") from None
    missing = [k for k in REQUIRED_KEYS if k not in values]
    if missing:
        raise FormatError(f"code spec is missing {', '.join(missing)}")
    return values


def code_from_spec(values: dict) -> PumCode:
    field = get_field(values["p"], values["m"], values.get("modulus"))
    return PumCode(field, values["n"], values["k"], values["k1"], values["phi"], values.get("points"))


def load_code(path: str | Path) -> PumCode:
    return code_from_spec(parse_code_spec(Path(path).read_text()))


def format_code_spec(code: PumCode) -> str:
    lines = code.field.to_spec_lines() + [
        f"n={code.n}",
        f"k={code.k}",
        f"k1={code.k1}",
        f"phi={code.phi}",
        "points=" + ",".join(str(x) for x in code.points),
    ]
    return "\n".join(lines) + "\n"


def parse_sequence(text: str, width: int | None = None, q: int | None = None) -> list[list[int]]:
    """One block per line, decimal symbols separated by single spaces."""
    blocks = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip():
            continue
        parts = raw.strip().split(" ")
        try:
            block = [int(x) for x in parts]
        except ValueError:
            raise FormatError(f"line {lineno}: symbols must be decimal integers separated by single spaces") from None
        if width is not None and len(block) != width:
            raise FormatError(f"line {lineno}: expected {width} symbols, got {len(block)}")
        if q is not None:
            for x in block:
                if not 0 <= x < q:
                    raise FormatError(f"line {lineno}: symbol {x} outside GF({q})")
        blocks.append(block)
    if not blocks:
        raise FormatError("sequence file contains no blocks")
    return blocks


def format_sequence(blocks: Sequence[Sequence[int]]) -> str:
    return "".join(" ".join(str(int(x)) for x in b) + "\n" for b in blocks)


def read_sequence(path: str | Path, width: int | None = None, q: int | None = None) -> list[list[int]]:
    return parse_sequence(Path(path).read_text(), width, q)


def write_sequence(path: str | Path, blocks: Sequence[Sequence[int]]) -> None:
    Path(path).write_text(format_sequence(blocks))
