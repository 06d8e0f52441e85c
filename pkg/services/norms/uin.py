"""
Унитарно-инвариантные нормы через симметричные калибровочные функции:
Шаттен-p, Ки Фан k и операторная норма.
"""
import math

import numpy as np

from core.errors import InvalidSpec
from core.models import NormKind, UINormSpec
from services.linalg.linalg_core import singular_values


def gauge(spec: UINormSpec, v) -> float:
    """
    Значение симметричной калибровочной функции нормы на векторе

    Args:
        spec: описание нормы
        v: вещественный вектор

    Returns:
        float: Φ(|v| по невозрастанию)
    """
    values = np.sort(np.abs(np.asarray(v, dtype=np.float64).ravel()))[::-1]
    if not np.all(np.isfinite(values)):
        raise InvalidSpec("Gauge arguments must be finite")
    if values.size == 0:
        return 0.0

    if spec.kind == NormKind.OPERATOR:
        return float(values[0])
    if spec.kind == NormKind.KYFAN:
        if spec.k is None or spec.k < 1:
            raise InvalidSpec(f"Invalid Ky Fan index {spec.k}")
        return float(np.sum(values[: spec.k]))
    if spec.kind == NormKind.SCHATTEN:
        p = spec.p
        if p is None or p < 1:
            raise InvalidSpec(f"Invalid Schatten exponent {p}")
        if math.isinf(p):
            return float(values[0])
        top = values[0]
        if top == 0:
            return 0.0
        # масштабирование против переполнения при больших p
        return float(top * np.sum((values / top) ** p) ** (1.0 / p))
    raise InvalidSpec(f"Unsupported norm kind {spec.kind}")


def uin_norm(spec: UINormSpec, M) -> float:
    """Норма матрицы: калибровочная функция от сингулярных чисел"""
    return gauge(spec, singular_values(M))
