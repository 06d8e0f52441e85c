"""
Конструктивная теорема Фан-Палла: проверка неравенств перемежаемости и
построение n-мерного подпространства S в C^m, сжатие положительной матрицы
на которое имеет заданный спектр.

Построение: цепочка перемежающихся спектров ν^(m) = λ, ..., ν^(n) = μ и
последовательные одношаговые дефляции (классические рациональные веса).
"""
import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy.linalg import null_space

from core.errors import DimensionMismatch, FanPallViolated, InterlacingViolated, NotSorted
from core.models import (
    DEFAULT_TOLERANCES,
    ComplexMatrix,
    EigenDecomposition,
    InterlacingChain,
    RealVector,
    SubspaceBasis,
    Tolerances,
)
from services.linalg.linalg_core import (
    adjoint,
    as_complex_matrix,
    hermitian_eigen,
    orthonormalize_columns,
)

logger = logging.getLogger(__name__)


def _as_spectrum(values) -> RealVector:
    return np.asarray(values, dtype=np.float64).ravel()


def _scale(values: RealVector) -> float:
    top = float(np.max(np.abs(values))) if values.size else 0.0
    return top if top > 0 else 1.0


def _check_sorted(values: RealVector, slack: float, name: str) -> None:
    if values.size > 1 and np.any(np.diff(values) > slack):
        raise NotSorted(f"{name} must be sorted in non-increasing order")


def check_fan_pall(lam, mu, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """
    Проверка неравенств Фан-Палла: λ_i >= μ_i и λ_{m-n+i} <= μ_i

    Args:
        lam: спектр длины m по невозрастанию
        mu: спектр длины n по невозрастанию

    Returns:
        bool: выполняются ли неравенства (с допуском tol_fp)
    """
    lam, mu = _as_spectrum(lam), _as_spectrum(mu)
    m, n = lam.size, mu.size
    if n > m:
        raise DimensionMismatch(f"Compression spectrum length {n} exceeds {m}")
    slack = tol.tol_fp * _scale(lam)
    _check_sorted(lam, slack, "lambda")
    _check_sorted(mu, slack, "mu")
    upper_ok = np.all(lam[:n] >= mu - slack)
    lower_ok = np.all(lam[m - n:] <= mu + slack)
    return bool(upper_ok and lower_ok)


def _interlaces(outer: RealVector, inner: RealVector, slack: float) -> bool:
    """outer_j >= inner_j >= outer_{j+1}"""
    return bool(
        np.all(outer[:-1] >= inner - slack) and np.all(inner >= outer[1:] - slack)
    )


def interlace_chain(lam, mu, tol: Tolerances = DEFAULT_TOLERANCES) -> InterlacingChain:
    """
    Цепочка спектров ν^(k)_j = max(μ_j, λ_{j+m-k}) для j <= n,
    ν^(k)_j = λ_{j+m-k} для j > n; уровни k = m, m-1, ..., n
    """
    lam, mu = _as_spectrum(lam), _as_spectrum(mu)
    if not check_fan_pall(lam, mu, tol):
        raise FanPallViolated("Fan-Pall inequalities do not hold")
    m, n = lam.size, mu.size
    # прижимаем μ к коробке Фан-Палла, чтобы концы цепочки были точными
    mu = np.clip(mu, lam[m - n:], lam[:n])

    spectra: List[RealVector] = []
    for k in range(m, n - 1, -1):
        shift = m - k
        head = np.maximum(mu, lam[shift:shift + n])
        tail = lam[shift + n:shift + k]
        spectra.append(np.concatenate([head, tail]))

    slack = tol.tol_fp * _scale(lam)
    for outer, inner in zip(spectra, spectra[1:]):
        if not _interlaces(outer, inner, slack):
            raise FanPallViolated("Constructed chain does not interlace")
    return InterlacingChain(tuple(spectra))


def _tie_groups(lam: RealVector, tie: float) -> List[Tuple[int, int]]:
    """Группы подряд идущих равных (в пределах tie) значений: (начало, конец)"""
    groups = []
    start = 0
    for i in range(1, lam.size):
        if lam[i - 1] - lam[i] > tie:
            groups.append((start, i - 1))
            start = i
    groups.append((start, lam.size - 1))
    return groups


def deflate_once(lam, nu, tol: Tolerances = DEFAULT_TOLERANCES) -> RealVector:
    """
    Единичный вектор w, такой что сжатие diag(λ) на гиперплоскость w^⊥
    имеет спектр ν

    Args:
        lam: спектр длины k по невозрастанию
        nu: спектр длины k-1, перемежающийся с lam

    Returns:
        RealVector: w_i^2 = Π_j(ν_j - λ_i) / Π_{j≠i}(λ_j - λ_i)
    """
    lam, nu = _as_spectrum(lam), _as_spectrum(nu)
    k = lam.size
    if nu.size != k - 1:
        raise DimensionMismatch(f"Expected {k - 1} target values, got {nu.size}")
    scale = _scale(lam)
    slack = tol.tol_fp * scale
    _check_sorted(lam, slack, "lambda")
    if k == 1:
        return np.ones(1)
    if not _interlaces(lam, nu, slack):
        raise InterlacingViolated("Target spectrum does not interlace with lambda")
    nu = np.clip(nu, lam[1:], lam[:-1])
    tie = tol.tol_tie * scale

    # в каждой группе равных λ вес получает последний представитель,
    # остальные собственные векторы остаются в w^⊥ вместе с g-1 значениями ν
    groups = _tie_groups(lam, tie)
    representatives = [end for _, end in groups]
    consumed = {j for start, end in groups for j in range(start, end)}
    lam_r = lam[representatives]
    nu_r = np.array([value for j, value in enumerate(nu) if j not in consumed])

    weights = np.zeros(k)
    for t, index in enumerate(representatives):
        gaps = nu_r - lam_r[t]
        if np.any(np.abs(gaps) <= tie):
            continue
        others = np.delete(lam_r, t) - lam_r[t]
        weights[index] = max(float(np.prod(gaps / others)), 0.0)

    total = weights.sum()
    if total <= 0:
        raise InterlacingViolated("Deflation weights vanish")
    return np.sqrt(weights / total)


def compression_spectrum(H, basis) -> RealVector:
    """Спектр сжатия B* H B по невозрастанию"""
    B = as_complex_matrix(basis)
    C = adjoint(B) @ as_complex_matrix(H) @ B
    return np.sort(np.linalg.eigvalsh(0.5 * (C + adjoint(C))))[::-1]


def build_compression_subspace(
    H,
    mu,
    tol: Tolerances = DEFAULT_TOLERANCES,
    eigen: Optional[EigenDecomposition] = None
) -> SubspaceBasis:
    """
    Построение подпространства S, сжатие H на которое имеет спектр μ

    Args:
        H: положительная эрмитова матрица m x m
        mu: целевой спектр длины n по невозрастанию
        tol: набор допусков
        eigen: готовое спектральное разложение H (если уже посчитано)

    Returns:
        SubspaceBasis: ортонормированный базис S (m x n)
    """
    matrix = as_complex_matrix(H)
    if eigen is None:
        eigen = hermitian_eigen(matrix, tol)
    chain = interlace_chain(eigen.eigenvalues, mu, tol)

    basis: ComplexMatrix = np.array(eigen.eigenvectors, dtype=np.complex128)
    current = np.array(eigen.eigenvalues)
    for level in chain.spectra[1:]:
        w = deflate_once(current, level, tol)
        hyperplane = null_space(w[None, :])
        basis = basis @ hyperplane
        compressed = adjoint(basis) @ matrix @ basis
        step = hermitian_eigen(0.5 * (compressed + adjoint(compressed)), tol)
        basis = orthonormalize_columns(basis @ step.eigenvectors)
        current = step.eigenvalues

    logger.debug(
        f"Compression subspace built: m={matrix.shape[0]}, n={basis.shape[1]}, "
        f"steps={len(chain.spectra) - 1}"
    )
    return SubspaceBasis(basis)
