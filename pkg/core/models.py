# core/models.py
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from core.errors import InvalidModel, InvalidP, InvalidSpec

ComplexMatrix = NDArray[np.complex128]
RealVector = NDArray[np.float64]


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class Tolerances:
    """Набор допусков, с которым выполняются все вычисления"""
    tol_herm: float = 1e-10
    tol_eig: float = 1e-10
    tol_dual: float = 1e-8
    tol_fp: float = 1e-8
    tol_tie: float = 1e-10
    tol_one: float = 1e-8
    tol_cert: float = 1e-8
    max_sweeps: int = 100

    def as_dict(self) -> Dict[str, float]:
        return {k: float(v) for k, v in asdict(self).items()}


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    eigenvalues: RealVector
    eigenvectors: ComplexMatrix

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", _frozen(self.eigenvalues))
        object.__setattr__(self, "eigenvectors", _frozen(self.eigenvectors))


@dataclass(frozen=True, eq=False)
class Frame:
    """
    Конечный фрейм в C^n, хранится синтезирующей матрицей n x m.
    Столбцы матрицы - векторы фрейма.
    """
    synthesis: ComplexMatrix

    def __post_init__(self):
        object.__setattr__(
            self, "synthesis", _frozen(np.asarray(self.synthesis, dtype=np.complex128))
        )

    @property
    def n(self) -> int:
        return self.synthesis.shape[0]

    @property
    def m(self) -> int:
        return self.synthesis.shape[1]

    @property
    def vectors(self) -> Tuple[np.ndarray, ...]:
        return tuple(self.synthesis[:, i] for i in range(self.m))


@dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float


class NormKind(Enum):
    SCHATTEN = "schatten"
    KYFAN = "kyfan"
    OPERATOR = "operator"


@dataclass(frozen=True)
class UINormSpec:
    """Унитарно-инвариантная норма, заданная симметричной калибровочной функцией"""
    kind: NormKind
    p: Optional[float] = None
    k: Optional[int] = None

    def __post_init__(self):
        if self.kind == NormKind.SCHATTEN:
            if self.p is None or math.isnan(self.p) or self.p < 1:
                raise InvalidP(f"Schatten exponent must satisfy p >= 1, got {self.p}")
        elif self.kind == NormKind.KYFAN:
            if self.k is None or int(self.k) != self.k or self.k < 1:
                raise InvalidSpec(f"Ky Fan index must be an integer >= 1, got {self.k}")

    @classmethod
    def schatten(cls, p: float) -> "UINormSpec":
        return cls(NormKind.SCHATTEN, p=float(p))

    @classmethod
    def kyfan(cls, k: int) -> "UINormSpec":
        return cls(NormKind.KYFAN, k=k)

    @classmethod
    def operator(cls) -> "UINormSpec":
        return cls(NormKind.OPERATOR)

    @classmethod
    def from_flag(cls, flag: str) -> "UINormSpec":
        """
        Разбор значения флага --norm: op, s1, s2, sinf, s<p>, kf<k>
        """
        value = flag.strip().lower()
        try:
            if value == "op":
                return cls.operator()
            if value.startswith("kf"):
                return cls.kyfan(int(value[2:]))
            if value.startswith("s"):
                body = value[1:]
                return cls.schatten(math.inf if body == "inf" else float(body))
        except ValueError as e:
            if isinstance(e, InvalidSpec):
                raise
            raise InvalidSpec(f"Cannot parse norm flag {flag!r}") from e
        raise InvalidSpec(f"Unknown norm flag {flag!r}")

    @property
    def flag(self) -> str:
        if self.kind == NormKind.OPERATOR:
            return "op"
        if self.kind == NormKind.KYFAN:
            return f"kf{self.k}"
        if math.isinf(self.p):
            return "sinf"
        return f"s{self.p:g}"


@dataclass(frozen=True, eq=False)
class InterlacingChain:
    # уровни m, m-1, ..., n
    spectra: Tuple[RealVector, ...]


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    basis: ComplexMatrix

    def __post_init__(self):
        object.__setattr__(self, "basis", _frozen(self.basis))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def projection(self) -> ComplexMatrix:
        return self.basis @ self.basis.conj().T


@dataclass(frozen=True, eq=False)
class OptimalSpectrum:
    d: RealVector
    r: int
    lam: RealVector

    def __post_init__(self):
        object.__setattr__(self, "d", _frozen(self.d))
        object.__setattr__(self, "lam", _frozen(self.lam))

    @property
    def deviations(self) -> RealVector:
        return np.abs(1.0 - np.sqrt(self.d))


@dataclass(frozen=True)
class DeviationCheck:
    values: Tuple[float, ...]
    r: int
    branch: str
    consistent: bool


@dataclass(frozen=True, eq=False)
class QuasiDualResult:
    X: ComplexMatrix
    subspace: SubspaceBasis
    d: OptimalSpectrum
    alpha_value: float
    norm: UINormSpec
    achieved: float

    def __post_init__(self):
        object.__setattr__(self, "X", _frozen(self.X))


@dataclass(frozen=True, eq=False)
class Dilation:
    Q: ComplexMatrix
    embedding: ComplexMatrix


class Attainment(Enum):
    YES = "yes"
    YES_WITH_FXSTAR_SCALAR = "yes_with_FXstar_scalar"
    CONDITIONAL = "conditional"
    UNKNOWN = "unknown"


def _expand(pairs: Tuple[Tuple[float, int], ...], reverse: bool) -> Tuple[float, ...]:
    values = []
    for value, mult in pairs:
        values.extend([float(value)] * int(mult))
    return tuple(sorted(values, reverse=reverse))


@dataclass(frozen=True)
class SpectralModel:
    """
    Символьное описание спектра |F| для фрейма бесконечномерного пространства.
    excess=None означает бесконечный избыток.
    """
    ess_lo: float
    ess_hi: float
    above: Tuple[Tuple[float, int], ...] = ()
    below: Tuple[Tuple[float, int], ...] = ()
    excess: Optional[int] = None
    cluster_at_me: bool = False

    def __post_init__(self):
        object.__setattr__(self, "above", tuple((float(v), int(k)) for v, k in self.above))
        object.__setattr__(self, "below", tuple((float(v), int(k)) for v, k in self.below))
        self._validate()

    def _validate(self) -> None:
        values = [self.ess_lo, self.ess_hi] + [v for v, _ in self.above + self.below]
        if not all(math.isfinite(v) for v in values):
            raise InvalidModel("Spectral data must be finite")
        if self.ess_lo < 0 or self.ess_hi < self.ess_lo:
            raise InvalidModel(f"Invalid essential interval [{self.ess_lo}, {self.ess_hi}]")
        for value, mult in self.above + self.below:
            if mult < 1:
                raise InvalidModel(f"Multiplicity must be >= 1, got {mult}")
        for value, _ in self.above:
            if value <= self.ess_hi:
                raise InvalidModel(f"Eigenvalue {value} above must exceed ess_hi={self.ess_hi}")
        for value, _ in self.below:
            if not 0 <= value < self.ess_lo:
                raise InvalidModel(f"Eigenvalue {value} below must lie in [0, {self.ess_lo})")
        if self.ess_lo == 0 and not any(value > 0 for value, _ in self.below):
            raise InvalidModel("Model has no positive spectral point: A_F would be 0")
        zeros = sum(mult for value, mult in self.below if value == 0)
        if self.excess is None:
            if zeros:
                raise InvalidModel("Infinite-excess models keep the kernel implicit; drop 0 from 'below'")
        else:
            if self.excess < 0:
                raise InvalidModel(f"Excess must be >= 0, got {self.excess}")
            if self.ess_lo > 0 and zeros != self.excess:
                raise InvalidModel(
                    f"Finite excess {self.excess} requires eigenvalue 0 with multiplicity "
                    f"{self.excess} in 'below', found {zeros}"
                )

    @property
    def infinite_excess(self) -> bool:
        return self.excess is None

    @property
    def above_values(self) -> Tuple[float, ...]:
        """Собственные значения выше ess_hi с учетом кратности, по убыванию"""
        return _expand(self.above, reverse=True)

    @property
    def below_values(self) -> Tuple[float, ...]:
        """Собственные значения ниже ess_lo с учетом кратности, по возрастанию"""
        return _expand(self.below, reverse=False)


@dataclass(frozen=True)
class AlphaReport:
    alpha: float
    attained: Attainment
    beta: Optional[float]
    branch: str
    bounds: Optional[Tuple[float, float]] = None
    attainment_conditions: Optional[bool] = None


@dataclass(frozen=True)
class CertificationReport:
    samples: int
    min_error_sampled: float
    alpha_claimed: float
    violations: int
    seed: int
    norm: UINormSpec
    refined_error: float = field(default=math.nan)

    @property
    def passed(self) -> bool:
        return self.violations == 0
