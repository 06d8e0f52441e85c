"""
Модуль содержит функции для форматирования результатов в отчетах.
Включает преобразование матриц и спектров в JSON-совместимые значения,
описание норм и краткие сводки отчетов для логов.
"""
import math
from typing import Any, Dict, List, Optional

import numpy as np

from core.models import NormKind, Tolerances, UINormSpec
from core.schemas import Report


def format_vectors(matrix) -> List[List[List[float]]]:
    """
    Столбцы синтезирующей матрицы как списки пар [re, im]

    Args:
        matrix: синтезирующая матрица n x m

    Returns:
        List: m векторов длины n
    """
    matrix = np.asarray(matrix, dtype=np.complex128)
    return [
        [[float(z.real), float(z.imag)] for z in matrix[:, i]]
        for i in range(matrix.shape[1])
    ]


def format_spectrum(values) -> List[float]:
    return [float(v) for v in np.asarray(values, dtype=np.float64).ravel()]


def format_optional(value: Optional[float]) -> Optional[float]:
    """None для отсутствующих и бесконечных значений"""
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def format_norm(spec: UINormSpec) -> str:
    """
    Описание нормы для вывода

    Returns:
        str: например "Schatten-2", "Ky Fan 3", "operator"
    """
    if spec.kind == NormKind.OPERATOR:
        return "operator"
    if spec.kind == NormKind.KYFAN:
        return f"Ky Fan {spec.k}"
    if math.isinf(spec.p):
        return "Schatten-inf"
    return f"Schatten-{spec.p:g}"


def format_tolerances(tol: Tolerances) -> Dict[str, float]:
    return tol.as_dict()


def format_summary(report: Report) -> str:
    """Однострочная сводка отчета для логов"""
    result = report.result
    parts = [f"{report.command}"]
    for key in ("n", "m", "alpha", "parseval_dual_exists", "attained", "violations"):
        if key in result:
            value = result[key]
            if isinstance(value, float):
                value = f"{value:.6g}"
            parts.append(f"{key}={value}")
    return " ".join(parts)


def format_report_json(report: Report) -> str:
    return report.model_dump_json(indent=2)


def jsonable(value: Any) -> Any:
    """Рекурсивное приведение numpy-значений к типам JSON"""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value
