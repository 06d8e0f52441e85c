"""
Модель данных конечного фрейма: операторы синтеза, анализа и фрейма,
матрица Грама, оптимальные границы, избыток, каноническая двойственная
система и предикаты двойственности и парсевалевости.
"""
import logging
from typing import Sequence

import numpy as np

from core.errors import DimensionMismatch, InvalidMatrix, NoConvergence, NotAFrame
from core.models import (
    DEFAULT_TOLERANCES,
    ComplexMatrix,
    EigenDecomposition,
    Frame,
    FrameBounds,
    RealVector,
    Tolerances,
)
from services.linalg.linalg_core import (
    adjoint,
    as_complex_matrix,
    numerical_rank,
    op_norm,
    polar,
    singular_values,
)

logger = logging.getLogger(__name__)


def from_synthesis(matrix) -> Frame:
    """
    Создание фрейма по синтезирующей матрице n x m с проверкой ранга

    Args:
        matrix: матрица, столбцы которой - векторы фрейма

    Returns:
        Frame: проверенный фрейм
    """
    try:
        synthesis = as_complex_matrix(matrix)
    except InvalidMatrix as e:
        raise NotAFrame(str(e)) from e
    n, m = synthesis.shape
    if m < n:
        raise NotAFrame(f"{m} vectors cannot span C^{n}")
    rank = numerical_rank(synthesis)
    if rank < n:
        raise NotAFrame(f"Vectors span a subspace of dimension {rank} < {n}")
    return Frame(synthesis)


def from_vectors(vectors: Sequence[Sequence[complex]]) -> Frame:
    """
    Создание фрейма из списка векторов одинаковой длины

    Args:
        vectors: m векторов длины n

    Returns:
        Frame: фрейм, столбцы синтезирующей матрицы совпадают с входными векторами
    """
    if len(vectors) == 0:
        raise NotAFrame("A frame needs at least one vector")
    lengths = {len(v) for v in vectors}
    if len(lengths) != 1:
        raise DimensionMismatch(f"Vectors have different lengths: {sorted(lengths)}")
    if lengths == {0}:
        raise NotAFrame("Vectors must have length >= 1")
    return from_synthesis(np.array(vectors, dtype=np.complex128).T)


def frame_operator(F: Frame) -> ComplexMatrix:
    """S_F = F F*"""
    return F.synthesis @ adjoint(F.synthesis)


def gramian(F: Frame) -> ComplexMatrix:
    """F* F"""
    return adjoint(F.synthesis) @ F.synthesis


def analysis(F: Frame, f) -> np.ndarray:
    """Коэффициенты (<f, f_i>)"""
    return adjoint(F.synthesis) @ np.asarray(f, dtype=np.complex128)


def synthesis_apply(F: Frame, coefficients) -> np.ndarray:
    """Σ c_i f_i"""
    return F.synthesis @ np.asarray(coefficients, dtype=np.complex128)


def gramian_spectrum(F: Frame) -> RealVector:
    """
    Спектр матрицы Грама по невозрастанию: квадраты сингулярных чисел F,
    дополненные m - n нулями
    """
    s = singular_values(F.synthesis)
    return np.concatenate([s ** 2, np.zeros(F.m - s.size)])


def gramian_eigen(F: Frame) -> EigenDecomposition:
    """
    Спектральное разложение матрицы Грама через полное SVD синтезирующей
    матрицы: F*F = V diag(s^2, 0, ..., 0) V*
    """
    try:
        _, s, Vh = np.linalg.svd(F.synthesis, full_matrices=True)
    except np.linalg.LinAlgError as e:
        raise NoConvergence(f"SVD did not converge: {e}") from e
    eigenvalues = np.concatenate([s ** 2, np.zeros(F.m - s.size)])
    return EigenDecomposition(eigenvalues, adjoint(Vh))


def frame_bounds(F: Frame) -> FrameBounds:
    """Оптимальные границы: A_F = γ(F)^2, B_F = ||F||^2"""
    s = singular_values(F.synthesis)
    return FrameBounds(lower=float(s[F.n - 1] ** 2), upper=float(s[0] ** 2))


def excess(F: Frame) -> int:
    return F.m - F.n


def canonical_dual(F: Frame) -> Frame:
    """Каноническая двойственная система {S_F^{-1} f_i}"""
    dual = np.linalg.solve(frame_operator(F), F.synthesis)
    return Frame(dual)


def _check_same_shape(F: Frame, G: Frame) -> None:
    if F.synthesis.shape != G.synthesis.shape:
        raise DimensionMismatch(
            f"Frames have different shapes {F.synthesis.shape} and {G.synthesis.shape}"
        )


def is_dual_pair(F: Frame, G: Frame, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Проверка F G* = I"""
    _check_same_shape(F, G)
    residual = F.synthesis @ adjoint(G.synthesis) - np.eye(F.n)
    return op_norm(residual) <= tol.tol_dual


def coisometry_residual(F: Frame) -> float:
    """||F F* - I||"""
    return op_norm(frame_operator(F) - np.eye(F.n))


def is_parseval(F: Frame, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    return coisometry_residual(F) <= tol.tol_dual


def polar_coisometry(F: Frame) -> Frame:
    """
    Коизометрия W правого полярного разложения F = S_F^{1/2} W.
    Ошибка ||F W* - I|| = ||S_F^{1/2} - I|| оценивает α сверху.
    """
    V, _ = polar(adjoint(F.synthesis))
    return Frame(adjoint(V))


def unitary_rotation(F: Frame, U) -> Frame:
    """Фрейм с синтезирующей матрицей F U (U - унитарная m x m)"""
    matrix = as_complex_matrix(U)
    if matrix.shape != (F.m, F.m):
        raise DimensionMismatch(f"Expected a {F.m}x{F.m} unitary, got {matrix.shape}")
    return Frame(F.synthesis @ matrix)


def scaled(F: Frame, c: float) -> Frame:
    return Frame(c * F.synthesis)
