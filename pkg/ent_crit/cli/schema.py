'''
JSON documents read and written by the command line tool.
'''
from __future__ import annotations

import datetime as dt
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ent_crit import __version__
from ent_crit.config import Tolerances
from ent_crit.core import DensityMatrix
from ent_crit.criteria import CriterionReport
from ent_crit.errors import StateFileError


class StateFile(BaseModel):
    '''
    ``{"dim_a": int, "dim_b": int, "matrix": [[[re, im], ...], ...]}``, row
    major, ``(d_A d_B) x (d_A d_B)`` entries.
    '''
    model_config = ConfigDict(extra='forbid')

    dim_a: int = Field(ge=1)
    dim_b: int = Field(ge=1)
    matrix: list[list[tuple[float, float]]]

    @model_validator(mode='after')
    def _check_shape(self) -> StateFile:
        n = self.dim_a * self.dim_b
        if len(self.matrix) != n or any(len(row) != n for row in self.matrix):
            raise ValueError(f"matrix must be {n}x{n} for dims ({self.dim_a}, {self.dim_b})")
        return self

    def to_array(self) -> np.ndarray:
        arr = np.asarray(self.matrix, dtype=np.float64)
        return arr[..., 0] + 1j * arr[..., 1]

    def to_density(self, *, tol: Tolerances | None = None) -> DensityMatrix:
        return DensityMatrix.from_matrix(self.to_array(), self.dim_a, self.dim_b, tol=tol)

    @classmethod
    def from_density(cls, rho: DensityMatrix) -> StateFile:
        return cls(
            dim_a=rho.dim_a,
            dim_b=rho.dim_b,
            matrix=[[(float(z.real), float(z.imag)) for z in row] for row in rho.mat],
        )

    @classmethod
    def read(cls, path: str | Path) -> StateFile:
        '''
        Parse a state file.

        Raises
        ------
        StateFileError
            Unreadable file, malformed JSON or schema violation.
        '''
        try:
            text = Path(path).read_text(encoding='utf-8')
        except OSError as e:
            raise StateFileError(str(path), f"cannot read file: {e.strerror or e}") from e
        try:
            return cls.model_validate_json(text)
        except ValidationError as e:
            first = e.errors()[0]
            location = '.'.join(str(part) for part in first.get('loc', ()))
            detail = f"{first.get('msg', 'invalid document')}" + (f" at {location}" if location else '')
            raise StateFileError(str(path), detail) from e


class ReportModel(BaseModel):
    criterion: str
    value: float
    detected: bool
    details: dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_report(cls, report: CriterionReport) -> ReportModel:
        return cls(**report.as_dict())


class Meta(BaseModel):
    toolkit: str = 'py-entanglement-criteria'
    version: str = __version__
    seed: int | None = None
    tolerances: dict[str, float]
    created: str

    @classmethod
    def now(cls, *, seed: int | None, tol: Tolerances) -> Meta:
        return cls(
            seed=seed,
            tolerances=tol.as_dict(),
            created=dt.datetime.now(dt.timezone.utc).isoformat(),
        )


class _Document(BaseModel):
    meta: Meta | None = None

    def dump(self) -> str:
        exclude = {'meta'} if self.meta is None else None
        return self.model_dump_json(indent=2, exclude=exclude)


class CheckDocument(_Document):
    reports: list[ReportModel]


class ScanDocument(_Document):
    family: str
    criterion: str
    threshold: float
    bracket: tuple[float, float]
    tolerance: float
    evaluations: int
    monotonicity_warning: bool


class DemoRow(BaseModel):
    name: str
    expected: str
    observed: float | int | bool | str
    passed: bool


class DemoDocument(_Document):
    rows: list[DemoRow]
    passed: bool


class ErrorDocument(BaseModel):
    error: str
    message: str
    details: dict[str, Any] = Field(default_factory=dict)

    def dump(self) -> str:
        return self.model_dump_json(indent=2)
