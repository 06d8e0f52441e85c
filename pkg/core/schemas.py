# core/schemas.py
import math
from typing import Any, Dict, List, Literal, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from core.models import SpectralModel


class FrameFile(BaseModel):
    """Файл фрейма: m векторов длины n, элементы как пары [re, im]"""
    model_config = ConfigDict(extra="forbid")

    n: int = Field(ge=1)
    m: int = Field(ge=1)
    vectors: List[List[Tuple[float, float]]]

    @model_validator(mode="after")
    def check_shape(self) -> "FrameFile":
        if len(self.vectors) != self.m:
            raise ValueError(f"expected {self.m} vectors, got {len(self.vectors)}")
        for i, vector in enumerate(self.vectors):
            if len(vector) != self.n:
                raise ValueError(f"vector {i} has length {len(vector)}, expected {self.n}")
            for re, im in vector:
                if not (math.isfinite(re) and math.isfinite(im)):
                    raise ValueError(f"vector {i} has a non-finite entry")
        return self

    def to_synthesis(self) -> np.ndarray:
        """Синтезирующая матрица n x m (столбцы - векторы)"""
        pairs = np.array(self.vectors, dtype=np.float64).reshape(self.m, self.n, 2)
        return (pairs[..., 0] + 1j * pairs[..., 1]).T

    @classmethod
    def from_synthesis(cls, matrix) -> "FrameFile":
        matrix = np.asarray(matrix, dtype=np.complex128)
        n, m = matrix.shape
        vectors = [
            [(float(z.real), float(z.imag)) for z in matrix[:, i]]
            for i in range(m)
        ]
        return cls(n=n, m=m, vectors=vectors)


class SpectralModelFile(BaseModel):
    """Файл спектральной модели |F|"""
    model_config = ConfigDict(extra="forbid")

    ess: Tuple[float, float]
    above: List[Tuple[float, int]] = []
    below: List[Tuple[float, int]] = []
    excess: Union[int, Literal["inf"]]
    cluster_at_me: bool = False

    @field_validator("excess", mode="before")
    @classmethod
    def parse_excess(cls, v):
        if isinstance(v, str):
            value = v.strip().lower()
            if value in {"inf", "infinite", "infinity"}:
                return "inf"
            return int(value)
        return v

    def to_model(self) -> SpectralModel:
        return SpectralModel(
            ess_lo=self.ess[0],
            ess_hi=self.ess[1],
            above=tuple(self.above),
            below=tuple(self.below),
            excess=None if self.excess == "inf" else self.excess,
            cluster_at_me=self.cluster_at_me,
        )


def _check_finite(value: Any, path: str) -> None:
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return
    if isinstance(value, (int, float)):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value at {path}")
    elif isinstance(value, dict):
        for key, item in value.items():
            _check_finite(item, f"{path}.{key}")
    elif isinstance(value, (list, tuple)):
        for i, item in enumerate(value):
            _check_finite(item, f"{path}[{i}]")


class Report(BaseModel):
    """JSON-отчет команды: входные данные, результат, допуски и версия"""
    command: str
    version: str
    tolerances: Dict[str, float]
    input: Dict[str, Any]
    result: Dict[str, Any]

    @model_validator(mode="after")
    def check_finite(self) -> "Report":
        _check_finite(self.tolerances, "tolerances")
        _check_finite(self.input, "input")
        _check_finite(self.result, "result")
        return self
