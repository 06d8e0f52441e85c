"""
Рандомизированный оракул: выборка коизометрий, вычисление ошибок
восстановления, локальное уточнение лучшего образца и сертификат α
как эмпирической нижней огибающей.

Каждый образец порождается генератором default_rng([seed, index]),
поэтому отчет не зависит от порядка и разбиения на пакеты.
"""
import asyncio
import functools
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from anyio import CapacityLimiter, to_thread

from config.config import Config
from core.errors import DimensionMismatch, UsageError
from core.models import (
    DEFAULT_TOLERANCES,
    CertificationReport,
    ComplexMatrix,
    Frame,
    Tolerances,
    UINormSpec,
)
from services.norms.uin import gauge
from services.quasidual.quasidual import alpha

logger = logging.getLogger(__name__)

REFINE_STEPS = 50
REFINE_STEP = 0.1
REFINE_DECAY = 0.5
BATCH_SIZE = 1000


def _gaussian(rng: np.random.Generator, n: int, m: int) -> ComplexMatrix:
    """Стандартная комплексная гауссова матрица n x m"""
    return (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / np.sqrt(2.0)


def _orthonormal_rows(stack: np.ndarray) -> np.ndarray:
    """
    Ортонормализация строк (пакетно по первой оси) через QR сопряженной
    матрицы с фазовой нормировкой диагонали R
    """
    Q, R = np.linalg.qr(np.conj(np.swapaxes(stack, -1, -2)))
    diagonal = np.diagonal(R, axis1=-2, axis2=-1)
    modulus = np.abs(diagonal)
    phases = np.where(modulus > 0, diagonal / np.where(modulus > 0, modulus, 1.0), 1.0)
    Q = Q * phases[..., None, :]
    return np.conj(np.swapaxes(Q, -1, -2))


def _check_shape(n: int, m: int) -> None:
    if n < 1 or m < n:
        raise DimensionMismatch(f"A coisometry needs 1 <= n <= m, got n={n}, m={m}")


def _coisometries(n: int, m: int, seed: int, indices: Sequence[int]) -> np.ndarray:
    gaussians = np.stack(
        [_gaussian(np.random.default_rng([seed, index]), n, m) for index in indices]
    )
    return _orthonormal_rows(gaussians)


def sample_coisometry(n: int, m: int, seed: int, index: int = 0) -> ComplexMatrix:
    """
    Случайная коизометрия n x m с хааровски распределенным пространством строк

    Args:
        n: число строк
        m: число столбцов (m >= n)
        seed: зерно генератора
        index: номер образца внутри серии

    Returns:
        ComplexMatrix: X с X X* = I
    """
    _check_shape(n, m)
    return _coisometries(n, m, seed, [index])[0]


def _errors(synthesis: ComplexMatrix, norm: UINormSpec, stack: np.ndarray) -> np.ndarray:
    """|||F X_k* - I||| для пакета коизометрий"""
    n = synthesis.shape[0]
    residuals = synthesis @ np.conj(np.swapaxes(stack, -1, -2)) - np.eye(n)
    singular = np.linalg.svd(residuals, compute_uv=False)
    return np.array([gauge(norm, row) for row in singular])


def evaluate_batch(
    synthesis: ComplexMatrix,
    norm: UINormSpec,
    seed: int,
    start: int,
    count: int
) -> np.ndarray:
    """Ошибки образцов с номерами start, ..., start + count - 1"""
    n, m = synthesis.shape
    stack = _coisometries(n, m, seed, range(start, start + count))
    return _errors(synthesis, norm, stack)


def refine(
    F: Frame,
    norm: UINormSpec,
    X0,
    steps: int = REFINE_STEPS,
    step: float = REFINE_STEP,
    decay: float = REFINE_DECAY,
    seed: int = 0
) -> Tuple[float, ComplexMatrix]:
    """
    Локальный поиск вокруг X0: аддитивное гауссово возмущение масштаба step
    с ортонормализацией строк; при неудаче шаг умножается на decay

    Returns:
        (error, X): лучшая найденная ошибка и коизометрия
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1,)))
    current = _orthonormal_rows(np.asarray(X0, dtype=np.complex128))
    best = float(_errors(F.synthesis, norm, current[None])[0])
    accepted = 0
    for _ in range(steps):
        candidate = _orthonormal_rows(current + step * _gaussian(rng, F.n, F.m))
        error = float(_errors(F.synthesis, norm, candidate[None])[0])
        if error < best:
            current, best = candidate, error
            accepted += 1
        else:
            step *= decay
    logger.debug(f"Refinement finished: error={best:.12g}, accepted={accepted}/{steps}")
    return best, current


def _batches(samples: int, batch_size: int) -> List[Tuple[int, int]]:
    return [
        (start, min(batch_size, samples - start))
        for start in range(0, samples, batch_size)
    ]


def _check_samples(samples: int) -> None:
    if samples < 1:
        raise UsageError(f"Sample count must be >= 1, got {samples}")


def _finalize(
    F: Frame,
    norm: UINormSpec,
    errors: np.ndarray,
    claimed: float,
    seed: int,
    tol: Tolerances,
    steps: int,
    step: float,
    decay: float
) -> CertificationReport:
    best_index = int(np.argmin(errors))
    start = sample_coisometry(F.n, F.m, seed, best_index)
    refined_error, _ = refine(F, norm, start, steps, step, decay, seed)

    threshold = claimed - tol.tol_cert
    violations = int(np.count_nonzero(errors < threshold))
    if refined_error < threshold:
        violations += 1
    return CertificationReport(
        samples=int(errors.size),
        min_error_sampled=float(min(errors.min(), refined_error)),
        alpha_claimed=float(claimed),
        violations=violations,
        seed=seed,
        norm=norm,
        refined_error=float(refined_error),
    )


def certify_alpha(
    F: Frame,
    norm: UINormSpec,
    samples: int,
    seed: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
    steps: int = REFINE_STEPS,
    step: float = REFINE_STEP,
    decay: float = REFINE_DECAY,
    batch_size: int = BATCH_SIZE
) -> CertificationReport:
    """
    Последовательная сертификация α: выборка, уточнение лучшего образца и
    подсчет образцов с ошибкой ниже α - tol_cert
    """
    _check_samples(samples)
    claimed = alpha(F, norm, tol)
    errors = np.concatenate([
        evaluate_batch(F.synthesis, norm, seed, start, count)
        for start, count in _batches(samples, batch_size)
    ])
    return _finalize(F, norm, errors, claimed, seed, tol, steps, step, decay)


class CertificationService:
    """Сервис сертификации с выполнением пакетов в рабочих потоках"""

    def __init__(self, config: Config, log_service=None):
        """
        Инициализация сервиса

        Args:
            config: конфигурация (допуски, размер пакета, число потоков)
            log_service: сервис логирования для записи отчетов
        """
        self.config = config
        self.tol = config.tolerances()
        self.log_service = log_service
        self.logger = logging.getLogger(__name__)

    async def certify(
        self,
        F: Frame,
        norm: UINormSpec,
        samples: Optional[int] = None,
        seed: int = 0
    ) -> CertificationReport:
        """
        Сертификация α с параллельной обработкой пакетов

        Args:
            F: фрейм
            norm: норма
            samples: число образцов (по умолчанию из конфигурации)
            seed: зерно

        Returns:
            CertificationReport: тот же отчет, что и certify_alpha
        """
        samples = self.config.default_samples if samples is None else samples
        _check_samples(samples)
        claimed = alpha(F, norm, self.tol)

        limiter = CapacityLimiter(self.config.certify_workers)
        batches = _batches(samples, self.config.certify_batch_size)
        results = await asyncio.gather(*[
            to_thread.run_sync(
                functools.partial(evaluate_batch, F.synthesis, norm, seed, start, count),
                limiter=limiter,
            )
            for start, count in batches
        ])
        errors = np.concatenate(results)

        report = await to_thread.run_sync(
            functools.partial(
                _finalize, F, norm, errors, claimed, seed, self.tol,
                self.config.refine_steps, self.config.refine_step, self.config.refine_decay,
            )
        )
        self.logger.info(
            f"Certification finished: samples={report.samples}, batches={len(batches)}, "
            f"min={report.min_error_sampled:.6g}, alpha={report.alpha_claimed:.6g}, "
            f"violations={report.violations}"
        )
        if self.log_service is not None:
            self.log_service.log_certification(report)
        return report
