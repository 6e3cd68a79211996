"""Arbitrary-rate partial unit memory codes over GF(q) and their BMD decoder."""
from .blockcodes import BlockDecodeOutcome, RsEvalCode
from .decoder import DecodeResult, ReducedTrellis, StepMetrics, decode
from .errors import (
    ConstructionError,
    DomainError,
    InconsistentSystemError,
    PumError,
    SamplingError,
    ScaleGuardError,
    UsageError,
)
from .galois import Field, FieldElement, get_field
from .linalg import MatrixGF
from .pum import DistanceProfile, PumCode, SymbolBlockSequence, construct

__all__ = [
    "BlockDecodeOutcome",
    "ConstructionError",
    "DecodeResult",
    "DistanceProfile",
    "DomainError",
    "Field",
    "FieldElement",
    "InconsistentSystemError",
    "MatrixGF",
    "PumCode",
    "PumError",
    "ReducedTrellis",
    "RsEvalCode",
    "SamplingError",
    "ScaleGuardError",
    "StepMetrics",
    "SymbolBlockSequence",
    "UsageError",
    "construct",
    "decode",
    "get_field",
]
