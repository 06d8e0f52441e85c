"""
Вычисление α для фреймов бесконечномерного пространства по символьной
спектральной модели |F|: u_n/l_n, оптимальные границы, формулы для
бесконечного и конечного избытка, оценки, условия достижимости,
расстояние Роджерса до унитарных операторов и β(F).
"""
import logging
import math
from dataclasses import replace
from typing import Optional, Tuple, Union

from core.errors import HypothesisNotMet, InvalidModel, InvalidSpectralData, WrongExcess
from core.models import (
    DEFAULT_TOLERANCES,
    AlphaReport,
    Attainment,
    FrameBounds,
    SpectralModel,
    Tolerances,
)

logger = logging.getLogger(__name__)

BRANCH_INFINITE = "infinite_excess"
BRANCH_CAP = "cap"
BRANCH_UPPER = "upper"
BRANCH_LOWER = "lower"


def u_n(model: SpectralModel, n: int) -> float:
    """
    u_n(|F|): n-е по убыванию собственное значение выше ess_hi
    (с учетом кратности), иначе ||F||_e
    """
    if n < 1:
        raise InvalidModel(f"Index must be >= 1, got {n}")
    values = model.above_values
    return values[n - 1] if len(values) >= n else model.ess_hi


def l_n(model: SpectralModel, n: int) -> float:
    """l_n(|F|): n-е по возрастанию собственное значение ниже ess_lo, иначе m_e"""
    if n < 1:
        raise InvalidModel(f"Index must be >= 1, got {n}")
    values = model.below_values
    return values[n - 1] if len(values) >= n else model.ess_lo


def _root_bounds(model: SpectralModel) -> Tuple[float, float]:
    """(A_F^{1/2}, B_F^{1/2}) прямо по данным |F|"""
    candidates = [v for v in model.below_values if v > 0]
    if model.ess_lo > 0:
        candidates.append(model.ess_lo)
    if not candidates:
        raise InvalidModel("Model has no positive spectral point: A_F would be 0")
    lower = min(candidates)
    upper = max([model.ess_hi, *model.above_values])
    return lower, upper


def frame_bounds_model(model: SpectralModel) -> FrameBounds:
    """
    Оптимальные границы фрейма по модели

    Returns:
        FrameBounds: A_F = (min σ(|F|)\\{0})^2, B_F = (max σ(|F|))^2
    """
    lower, upper = _root_bounds(model)
    return FrameBounds(lower=lower ** 2, upper=upper ** 2)


def alpha_infinite_excess(model: SpectralModel) -> AlphaReport:
    """α(F) = 1 - min{A_F^{1/2}, 1}; оптимум FX* = min{A_F^{1/2}, 1} I"""
    if not model.infinite_excess:
        raise WrongExcess(f"Model has finite excess {model.excess}")
    root_a, _ = _root_bounds(model)
    value = 1.0 - min(root_a, 1.0)
    return AlphaReport(
        alpha=value,
        attained=Attainment.YES_WITH_FXSTAR_SCALAR,
        beta=max(1.0 / root_a, 1.0),
        branch=BRANCH_INFINITE,
    )


def alpha_finite_excess(model: SpectralModel) -> AlphaReport:
    """
    α(F) = min{max{u_{n+1} - 1, 1 - A_F^{1/2}}, 1 + m_e} для избытка n,
    где A_F^{1/2} = l_{n+1}(|F|)
    """
    if model.infinite_excess:
        raise WrongExcess("Model has infinite excess")
    n = model.excess
    upper_term = u_n(model, n + 1) - 1.0
    lower_term = 1.0 - l_n(model, n + 1)
    inner = max(upper_term, lower_term)
    cap = 1.0 + model.ess_lo

    if inner >= cap:
        value, branch = cap, BRANCH_CAP
    elif upper_term >= lower_term:
        value, branch = inner, BRANCH_UPPER
    else:
        value, branch = inner, BRANCH_LOWER

    if value < 1.0:
        attained = Attainment.YES
    elif branch == BRANCH_CAP and model.cluster_at_me:
        attained = Attainment.YES
    else:
        attained = Attainment.UNKNOWN

    return AlphaReport(
        alpha=value,
        attained=attained,
        beta=1.0 / (1.0 - value) if value < 1.0 else None,
        branch=branch,
    )


def alpha_bounds(
    model: SpectralModel,
    tol: Tolerances = DEFAULT_TOLERANCES
) -> Tuple[float, float]:
    """
    |1 - A_F^{1/2}| <= α(F) <= max{1 - A_F^{1/2}, B_F^{1/2} - 1}

    Raises:
        HypothesisNotMet: A_F = 1 или A_F > 1 при бесконечном избытке
    """
    root_a, root_b = _root_bounds(model)
    if abs(root_a ** 2 - 1.0) <= tol.tol_fp:
        raise HypothesisNotMet("Bounds are not asserted for A_F = 1")
    if root_a > 1.0 and model.infinite_excess:
        raise HypothesisNotMet("Bounds are not asserted for A_F > 1 with infinite excess")
    return abs(1.0 - root_a), max(1.0 - root_a, root_b - 1.0)


def attainment_conditions(
    model: SpectralModel,
    tol: Tolerances = DEFAULT_TOLERANCES
) -> bool:
    """
    Достаточные условия α(F) = 1 - A_F^{1/2} с достижением инфимума:
    число точек спектра, отличных от A_F^{1/2}, не больше избытка,
    либо A_F^{1/2} + B_F^{1/2} <= 2
    """
    root_a, root_b = _root_bounds(model)
    if root_a >= 1.0:
        raise HypothesisNotMet(f"Attainment conditions need A_F < 1, got {root_a ** 2}")
    if root_a + root_b <= 2.0 + tol.tol_fp:
        return True
    if model.infinite_excess:
        return True
    if model.ess_lo != root_a or model.ess_hi != root_a:
        # существенный спектр вне A_F^{1/2} дает бесконечную размерность
        return False
    away = sum(mult for value, mult in model.above + model.below if value > 0 and value != root_a)
    return away <= model.excess


def rogers_distance(
    norm_T: float,
    m_T: float,
    m_e_T: float,
    index: Union[int, float]
) -> float:
    """
    Расстояние от T до множества унитарных операторов

    Args:
        norm_T: ||T||
        m_T: m(T)
        m_e_T: m_e(T) (для ind(T) > 0 передаются данные T*)
        index: индекс Фредгольма, целое или ±inf

    Returns:
        float: max{||T|| - 1, 1 - m(T)} при ind = 0, иначе max{||T|| - 1, 1 + m_e(T)}
    """
    values = (norm_T, m_T, m_e_T)
    if not all(math.isfinite(v) for v in values):
        raise InvalidSpectralData("Spectral data must be finite")
    if not 0 <= m_T <= m_e_T <= norm_T:
        raise InvalidSpectralData(
            f"Expected 0 <= m(T) <= m_e(T) <= ||T||, got {m_T}, {m_e_T}, {norm_T}"
        )
    if isinstance(index, float) and math.isnan(index):
        raise InvalidSpectralData("Index must be an integer or +-inf")
    if index == 0:
        return max(norm_T - 1.0, 1.0 - m_T)
    return max(norm_T - 1.0, 1.0 + m_e_T)


def polar_distances(model: SpectralModel) -> Tuple[float, float]:
    """
    (||F - Y||, ||F - W||) для Y с FY* = A_F^{1/2} I и полярной коизометрии W:
    ((B_F + 1 - 2 A_F^{1/2})^{1/2}, max{1 - A_F^{1/2}, B_F^{1/2} - 1})
    """
    root_a, root_b = _root_bounds(model)
    return (
        math.sqrt(root_b ** 2 + 1.0 - 2.0 * root_a),
        max(1.0 - root_a, root_b - 1.0),
    )


def distances_coincide(model: SpectralModel, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Совпадение расстояний из polar_distances (эквивалентно A_F = B_F)"""
    scalar, polar = polar_distances(model)
    return abs(scalar - polar) <= tol.tol_fp


def evaluate(model: SpectralModel, tol: Tolerances = DEFAULT_TOLERANCES) -> AlphaReport:
    """
    Полный отчет по модели: α по формуле для соответствующего избытка,
    оценки и условия достижимости (когда выполнены их предположения)
    """
    if model.infinite_excess:
        report = alpha_infinite_excess(model)
    else:
        report = alpha_finite_excess(model)

    bounds: Optional[Tuple[float, float]] = None
    try:
        bounds = alpha_bounds(model, tol)
    except HypothesisNotMet as e:
        logger.debug(f"Bounds skipped: {e}")

    conditions: Optional[bool] = None
    root_a, _ = _root_bounds(model)
    if root_a < 1.0:
        conditions = attainment_conditions(model, tol)

    logger.info(
        f"Spectral model evaluated: excess={model.excess if model.excess is not None else 'inf'}, "
        f"alpha={report.alpha:.6g}, branch={report.branch}, attained={report.attained.value}"
    )
    return replace(report, bounds=bounds, attainment_conditions=conditions)
