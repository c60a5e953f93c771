from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator

from ..arith import parse_rational


def _rational_text(value: Optional[str]) -> Optional[str]:
    if value is not None:
        parse_rational(value)
    return value


class TermModel(BaseModel):
    """One term: a printed word and its exact coefficient as ``p/q``."""

    word: str
    coefficient: str

    @field_validator("coefficient")
    @classmethod
    def check_coefficient(cls, value: str) -> str:
        return _rational_text(value)


class RelationDocument(BaseModel):
    family: str
    n: int
    indices: List[List[int]] = Field(default_factory=list)
    weight: int
    strategy: str = "canonical"
    by_degree: Dict[str, List[TermModel]]
    remainder: Optional[str] = None
    kernel_ok: bool
    passes: int = 0

    @field_validator("remainder")
    @classmethod
    def check_remainder(cls, value: Optional[str]) -> Optional[str]:
        return _rational_text(value)


class DecouplingDocument(BaseModel):
    family: str
    n: int
    m: int
    expression: List[TermModel]


class AppendixReport(BaseModel):
    kernel_ok: bool
    remainder: str
    expected: str
    remainder_ok: bool
    residual_terms: Dict[str, int] = Field(default_factory=dict)
    component_terms: Dict[str, int] = Field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.kernel_ok and self.remainder_ok


class RemainderReport(BaseModel):
    family: str
    n: int
    method: str
    indices: List[List[int]]
    value: str
