"""
Парсевалевы квазидвойственные фреймы: оптимальный спектр d, величина α
для унитарно-инвариантных норм, явное построение X, существование
парсевалевой двойственной системы и дилатация.
"""
import logging
import math
from typing import Optional

import numpy as np

from core.errors import (
    DimensionMismatch,
    InvalidP,
    NoParsevalDual,
    NotParseval,
    NotSorted,
    NumericalError,
    RankTooLow,
)
from core.models import (
    DEFAULT_TOLERANCES,
    DeviationCheck,
    Dilation,
    Frame,
    OptimalSpectrum,
    QuasiDualResult,
    Tolerances,
    UINormSpec,
)
from services.fanpall.fanpall import build_compression_subspace
from services.frames.frame_service import gramian, gramian_eigen, gramian_spectrum, is_parseval
from services.linalg.linalg_core import adjoint, op_norm, polar, rank_tolerance, singular_values
from services.norms.uin import gauge, uin_norm

logger = logging.getLogger(__name__)


def _check_spectrum(lam, n: int, tol: Tolerances) -> np.ndarray:
    lam = np.asarray(lam, dtype=np.float64).ravel()
    m = lam.size
    if n < 1 or m < n:
        raise DimensionMismatch(f"Gramian spectrum of length {m} cannot serve n={n}")
    slack = tol.tol_fp * max(float(np.max(np.abs(lam))), 1.0)
    if m > 1 and np.any(np.diff(lam) > slack):
        raise NotSorted("Gramian spectrum must be sorted in non-increasing order")
    # порог на шкале сингулярных чисел F, как в numerical_rank
    cutoff = rank_tolerance((m, m), math.sqrt(max(float(lam[0]), 0.0)))
    if math.sqrt(max(float(lam[n - 1]), 0.0)) <= cutoff:
        raise RankTooLow(f"lambda_{n} = {lam[n - 1]:.3e} is not above the rank threshold")
    return lam


def optimal_spectrum(lam, n: int, tol: Tolerances = DEFAULT_TOLERANCES) -> OptimalSpectrum:
    """
    Оптимальный спектр d сжатия матрицы Грама

    Args:
        lam: спектр F*F длины m по невозрастанию
        n: размерность пространства

    Returns:
        OptimalSpectrum: d_j = λ_{m-n+j}, если λ_{m-n+j} >= 1;
        d_j = 1, если λ_{m-n+j} < 1 <= λ_j; иначе d_j = λ_j
    """
    lam = _check_spectrum(lam, n, tol)
    m = lam.size
    low = lam[m - n:]
    high = lam[:n]
    d = np.where(low >= 1.0, low, np.where(high >= 1.0, 1.0, high))
    r = int(np.count_nonzero(lam >= 1.0))
    return OptimalSpectrum(d=d, r=r, lam=lam)


def _nonzero_deviations(values: np.ndarray, tol: Tolerances) -> np.ndarray:
    values = np.abs(values)
    return np.sort(values[values > tol.tol_one])[::-1]


def optimal_spectrum_via_r(lam, n: int, tol: Tolerances = DEFAULT_TOLERANCES) -> DeviationCheck:
    """
    Ненулевые отклонения |1 - d_j^{1/2}| по разбиению на случаи через r
    (наибольший индекс с λ_r >= 1) и сверка с optimal_spectrum.
    При расхождении или на границе r = m-n+1 >= n возвращаются
    отклонения optimal_spectrum с consistent=False.
    """
    reference = optimal_spectrum(lam, n, tol)
    lam = reference.lam
    m, r = lam.size, reference.r
    pivot = m - n + 1

    if r <= pivot and r < n:
        branch = "below_one"
        values = 1.0 - np.sqrt(lam[r:n])
    elif r > pivot:
        branch = "above_one"
        values = np.sqrt(lam[m - n:max(r, n)]) - 1.0
    elif n <= r < pivot:
        branch = "all_one"
        values = np.zeros(0)
    else:
        branch = "boundary"
        values = None

    expected = _nonzero_deviations(1.0 - np.sqrt(reference.d), tol)
    if values is not None:
        values = _nonzero_deviations(values, tol)
        consistent = values.size == expected.size and np.allclose(
            values, expected, rtol=0.0, atol=tol.tol_fp
        )
    else:
        consistent = False

    if not consistent:
        logger.warning(
            f"Case split by r disagrees with the optimal spectrum "
            f"(r={r}, m={m}, n={n}, branch={branch}); using optimal-spectrum deviations"
        )
        values = expected
    return DeviationCheck(
        values=tuple(float(v) for v in values), r=r, branch=branch, consistent=bool(consistent)
    )


def alpha(F: Frame, norm: UINormSpec, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """α(F) = Φ((1 - d_j^{1/2})_j)"""
    d = optimal_spectrum(gramian_spectrum(F), F.n, tol)
    return gauge(norm, 1.0 - np.sqrt(d.d))


def alpha_p(F: Frame, p: float, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """
    α для нормы Шаттена-p; при p = ∞ используется явная формула
    max{1 - λ_n^{1/2}, λ_{m-n+1}^{1/2} - 1, 0}
    """
    if p is None or math.isnan(p) or p < 1:
        raise InvalidP(f"Schatten exponent must satisfy p >= 1, got {p}")
    lam = gramian_spectrum(F)
    n, m = F.n, F.m
    if math.isinf(p):
        _check_spectrum(lam, n, tol)
        return float(max(1.0 - math.sqrt(lam[n - 1]), math.sqrt(lam[m - n]) - 1.0, 0.0))
    d = optimal_spectrum(lam, n, tol)
    return float(np.linalg.norm(1.0 - np.sqrt(d.d), ord=p))


def construct(
    F: Frame,
    norm: Optional[UINormSpec] = None,
    tol: Tolerances = DEFAULT_TOLERANCES
) -> QuasiDualResult:
    """
    Построение парсевалевой квазидвойственной системы X

    Args:
        F: фрейм
        norm: норма для заполнения alpha_value (X от нормы не зависит)
        tol: набор допусков

    Returns:
        QuasiDualResult: X = V*, где P_S F* = V |P_S F*|, а S - подпространство
        с оптимальным спектром сжатия d
    """
    norm = norm or UINormSpec.operator()
    eigen = gramian_eigen(F)
    d = optimal_spectrum(eigen.eigenvalues, F.n, tol)
    subspace = build_compression_subspace(gramian(F), d.d, tol, eigen=eigen)

    compressed = subspace.projection @ adjoint(F.synthesis)
    V, _ = polar(compressed)
    X = adjoint(V)

    alpha_value = gauge(norm, 1.0 - np.sqrt(d.d))
    achieved = uin_norm(norm, F.synthesis @ V - np.eye(F.n))
    if abs(achieved - alpha_value) > tol.tol_dual * max(1.0, alpha_value):
        raise NumericalError(
            f"Constructed quasi-dual reaches {achieved:.12g}, closed form gives {alpha_value:.12g}"
        )
    logger.info(
        f"Quasi-dual constructed: n={F.n}, m={F.m}, norm={norm.flag}, alpha={alpha_value:.6g}"
    )
    return QuasiDualResult(
        X=X, subspace=subspace, d=d, alpha_value=alpha_value, norm=norm, achieved=achieved
    )


def parseval_dual_exists(F: Frame, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """
    Критерий существования парсевалевой двойственной системы:
    λ_min(S_F) >= 1 и 2n - m <= dim N(S_F - I)
    """
    spectrum = singular_values(F.synthesis) ** 2
    if spectrum[-1] < 1.0 - tol.tol_fp:
        return False
    ones = int(np.count_nonzero(np.abs(spectrum - 1.0) <= tol.tol_one))
    return 2 * F.n - F.m <= ones


def dilation(F: Frame, tol: Tolerances = DEFAULT_TOLERANCES) -> Dilation:
    """
    Косой проектор Q = X*F в C^m и изометрия X*, для которых Q e_i = X* f_i
    """
    if not parseval_dual_exists(F, tol):
        raise NoParsevalDual("Frame has no Parseval dual")
    X = construct(F, UINormSpec.operator(), tol).X
    embedding = adjoint(X)
    return Dilation(Q=embedding @ F.synthesis, embedding=embedding)


def _check_same_shape(F: Frame, X: Frame) -> None:
    if F.synthesis.shape != X.synthesis.shape:
        raise DimensionMismatch(
            f"Frames have different shapes {F.synthesis.shape} and {X.synthesis.shape}"
        )


def reconstruction_error(F: Frame, X: Frame, norm: UINormSpec) -> float:
    """|||F X* - I|||"""
    _check_same_shape(F, X)
    return uin_norm(norm, F.synthesis @ adjoint(X.synthesis) - np.eye(F.n))


def worst_case_error(F: Frame, X: Frame) -> float:
    """sup_{||f||=1} ||Σ<f, x_i> f_i - f|| = ||F X* - I||"""
    _check_same_shape(F, X)
    return op_norm(F.synthesis @ adjoint(X.synthesis) - np.eye(F.n))


def is_quasidual(
    F: Frame,
    X: Frame,
    norm: UINormSpec,
    tol: Tolerances = DEFAULT_TOLERANCES
) -> bool:
    _check_same_shape(F, X)
    if not is_parseval(X, tol):
        raise NotParseval("Candidate is not a Parseval frame")
    return reconstruction_error(F, X, norm) <= alpha(F, norm, tol) + tol.tol_fp


def reconstruct(F: Frame, X: Frame, f) -> np.ndarray:
    """Восстановление Σ<f, x_i> f_i = F X* f"""
    _check_same_shape(F, X)
    return F.synthesis @ (adjoint(X.synthesis) @ np.asarray(f, dtype=np.complex128))


def frame_distance(F: Frame, X: Frame) -> float:
    """||F - X|| в операторной норме"""
    _check_same_shape(F, X)
    return op_norm(F.synthesis - X.synthesis)


def tight_dual_bound(F: Frame, tol: Tolerances = DEFAULT_TOLERANCES) -> Optional[float]:
    """(1 - α_op)^{-1}, если α_op < 1"""
    value = alpha(F, UINormSpec.operator(), tol)
    if value >= 1.0:
        return None
    return 1.0 / (1.0 - value)
