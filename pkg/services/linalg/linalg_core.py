"""
Ядро плотной комплексной линейной алгебры:
эрмитово спектральное разложение (циклический метод Якоби), SVD,
полярное разложение, нормы и приведенный минимальный модуль.
"""
import logging
from typing import Tuple

import numpy as np

from core.errors import InvalidMatrix, NoConvergence, NotHermitian, RankDeficient
from core.models import DEFAULT_TOLERANCES, ComplexMatrix, EigenDecomposition, RealVector, Tolerances

logger = logging.getLogger(__name__)

EPS = np.finfo(np.float64).eps


def as_complex_matrix(data) -> ComplexMatrix:
    """
    Приведение входных данных к комплексной матрице с проверкой инвариантов

    Args:
        data: массив или вложенные списки

    Returns:
        ComplexMatrix: двумерный массив complex128
    """
    matrix = np.asarray(data, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] < 1 or matrix.shape[1] < 1:
        raise InvalidMatrix(f"Expected a non-empty 2-D matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise InvalidMatrix("Matrix entries must be finite")
    return matrix


def adjoint(matrix: ComplexMatrix) -> ComplexMatrix:
    return matrix.conj().T


def rank_tolerance(shape: Tuple[int, int], largest: float) -> float:
    """Порог численного ранга: max(rows, cols) * eps * s_max"""
    return max(shape) * EPS * largest


def _jacobi_rotation(a_pp: float, a_qq: float, a_pq: complex) -> np.ndarray:
    """
    Унитарное вращение 2x2, обнуляющее внедиагональный элемент
    эрмитова блока [[a_pp, a_pq], [conj(a_pq), a_qq]]
    """
    modulus = abs(a_pq)
    phase = a_pq / modulus
    theta = (a_qq - a_pp) / (2.0 * modulus)
    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    if theta == 0:
        t = 1.0
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    # сначала снимаем фазу, затем вещественное вращение
    return np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=np.complex128)


def _off_diagonal_norm(A: ComplexMatrix) -> float:
    """Норма Фробениуса внедиагональной части"""
    return float(np.linalg.norm(A - np.diag(np.diag(A))))


def hermitian_eigen(H, tol: Tolerances = DEFAULT_TOLERANCES) -> EigenDecomposition:
    """
    Спектральное разложение эрмитовой матрицы циклическим методом Якоби

    Args:
        H: квадратная эрмитова матрица
        tol: набор допусков

    Returns:
        EigenDecomposition: собственные значения по невозрастанию и
        ортонормированные собственные векторы (столбцы)
    """
    original = as_complex_matrix(H)
    A = original.copy()
    size = A.shape[0]
    if A.shape[1] != size:
        raise InvalidMatrix(f"Expected a square matrix, got shape {A.shape}")

    scale = np.linalg.norm(A)
    if np.linalg.norm(A - adjoint(A)) > tol.tol_herm * max(scale, EPS):
        raise NotHermitian("Matrix is not Hermitian within tolerance")
    A = 0.5 * (A + adjoint(A))
    V = np.eye(size, dtype=np.complex128)

    if scale == 0 or size == 1:
        return EigenDecomposition(np.real(np.diag(A)).copy(), V)

    off_target = size * EPS * scale
    threshold = EPS * scale / size
    for sweep in range(tol.max_sweeps + 1):
        off = _off_diagonal_norm(A)
        if off <= off_target:
            break
        if sweep == tol.max_sweeps:
            raise NoConvergence(f"Jacobi sweeps exhausted ({tol.max_sweeps}) for size {size}")
        for p in range(size - 1):
            for q in range(p + 1, size):
                a_pq = A[p, q]
                if abs(a_pq) <= threshold:
                    continue
                G = _jacobi_rotation(A[p, p].real, A[q, q].real, a_pq)
                idx = [p, q]
                A[:, idx] = A[:, idx] @ G
                A[idx, :] = adjoint(G) @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                V[:, idx] = V[:, idx] @ G

    eigenvalues = np.real(np.diag(A))
    order = np.argsort(-eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    V = V[:, order]

    residual = np.linalg.norm(V @ np.diag(eigenvalues) @ adjoint(V) - original)
    if residual > tol.tol_eig * max(scale, EPS) * max(1.0, np.sqrt(size)):
        raise NoConvergence(f"Eigen reconstruction residual {residual:.3e} exceeds tolerance")
    logger.debug(f"Jacobi converged after {sweep} sweeps (size={size})")
    return EigenDecomposition(eigenvalues, V)


def svd(M) -> Tuple[ComplexMatrix, RealVector, ComplexMatrix]:
    """
    Экономное сингулярное разложение M = U diag(s) V*

    Returns:
        (U, s, V): s по невозрастанию, U и V с ортонормированными столбцами
    """
    matrix = as_complex_matrix(M)
    try:
        U, s, Vh = np.linalg.svd(matrix, full_matrices=False)
    except np.linalg.LinAlgError as e:
        raise NoConvergence(f"SVD did not converge: {e}") from e
    return U, s, adjoint(Vh)


def singular_values(M) -> RealVector:
    matrix = as_complex_matrix(M)
    try:
        return np.linalg.svd(matrix, compute_uv=False)
    except np.linalg.LinAlgError as e:
        raise NoConvergence(f"SVD did not converge: {e}") from e


def op_norm(M) -> float:
    return float(singular_values(M)[0])


def gamma(M) -> float:
    """
    Приведенный минимальный модуль: наименьшее ненулевое сингулярное число.
    Для нулевой матрицы по соглашению 0.
    """
    matrix = as_complex_matrix(M)
    s = singular_values(matrix)
    cutoff = rank_tolerance(matrix.shape, s[0])
    nonzero = s[s > cutoff]
    return float(nonzero[-1]) if nonzero.size else 0.0


def numerical_rank(M) -> int:
    matrix = as_complex_matrix(M)
    s = singular_values(matrix)
    if s[0] == 0:
        return 0
    return int(np.count_nonzero(s > rank_tolerance(matrix.shape, s[0])))


def polar(M) -> Tuple[ComplexMatrix, ComplexMatrix]:
    """
    Полярное разложение M = V P для матрицы m x n полного столбцового ранга

    Returns:
        (V, P): V*V = I, P = (M*M)^{1/2} положительно определена
    """
    matrix = as_complex_matrix(M)
    rows, cols = matrix.shape
    if rows < cols:
        raise RankDeficient(f"Matrix {rows}x{cols} cannot have full column rank")
    W, s, Vc = svd(matrix)
    if s[-1] <= rank_tolerance(matrix.shape, s[0]):
        raise RankDeficient(f"Smallest singular value {s[-1]:.3e} is below the rank threshold")
    V = W @ adjoint(Vc)
    P = (Vc * s) @ adjoint(Vc)
    return V, 0.5 * (P + adjoint(P))


def orthonormalize_columns(B) -> ComplexMatrix:
    """Модифицированный процесс Грама-Шмидта по столбцам"""
    Q = as_complex_matrix(B).copy()
    for j in range(Q.shape[1]):
        for i in range(j):
            Q[:, j] -= np.vdot(Q[:, i], Q[:, j]) * Q[:, i]
        norm = np.linalg.norm(Q[:, j])
        if norm <= EPS:
            raise RankDeficient(f"Column {j} is linearly dependent on the previous ones")
        Q[:, j] /= norm
    return Q


def is_unitary_columns(B, atol: float) -> bool:
    matrix = as_complex_matrix(B)
    return bool(np.linalg.norm(adjoint(matrix) @ matrix - np.eye(matrix.shape[1]), 2) <= atol)
