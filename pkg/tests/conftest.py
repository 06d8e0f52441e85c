import json
from pathlib import Path
from typing import Callable

import numpy as np
import pytest

from config.config import Config
from core.models import DEFAULT_TOLERANCES, Frame, SpectralModel, Tolerances
from core.schemas import FrameFile
from services.frames.frame_service import from_synthesis


# Фикстуры с допусками и генератором
@pytest.fixture
def tol() -> Tolerances:
    return DEFAULT_TOLERANCES


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240517)


# Фабрики случайных объектов
@pytest.fixture
def random_unitary(rng) -> Callable[[int], np.ndarray]:
    """Случайная унитарная матрица k x k (QR комплексной гауссовой)"""
    def make(k: int) -> np.ndarray:
        G = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        Q, R = np.linalg.qr(G)
        return Q * (np.diag(R) / np.abs(np.diag(R)))
    return make


@pytest.fixture
def random_frame(rng) -> Callable[[int, int], Frame]:
    """Случайный фрейм n x m с комплексными гауссовыми элементами"""
    def make(n: int, m: int) -> Frame:
        return from_synthesis(rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m)))
    return make


@pytest.fixture
def diagonal_frame() -> Callable[..., Frame]:
    """Фрейм с векторами √a_i e_i, дополненный нулевыми векторами до m"""
    def make(spectrum, m: int) -> Frame:
        n = len(spectrum)
        synthesis = np.zeros((n, m), dtype=np.complex128)
        synthesis[np.arange(n), np.arange(n)] = np.sqrt(spectrum)
        return from_synthesis(synthesis)
    return make


# Эталонные фреймы
@pytest.fixture
def onb_frame() -> Frame:
    return from_synthesis(np.eye(2))


@pytest.fixture
def frame_4_1() -> Frame:
    """Столбцы 2e1, e2, 0: спектр Грама (4, 1, 0)"""
    return from_synthesis(np.array([[2.0, 0.0, 0.0], [0.0, 1.0, 0.0]]))


@pytest.fixture
def frame_small() -> Frame:
    """Столбцы 0.5e1, 0.4e2, 0: спектр Грама (0.25, 0.16, 0)"""
    return from_synthesis(np.array([[0.5, 0.0, 0.0], [0.0, 0.4, 0.0]]))


@pytest.fixture
def frame_9_4() -> Frame:
    """Столбцы 3e1, 2e2, 0: спектр Грама (9, 4, 0)"""
    return from_synthesis(np.array([[3.0, 0.0, 0.0], [0.0, 2.0, 0.0]]))


@pytest.fixture
def mercedes_frame() -> Frame:
    """Три равноугольных единичных вектора в R^2: S_F = 3/2 I"""
    h = np.sqrt(3.0) / 2.0
    return from_synthesis(np.array([[0.0, -h, h], [1.0, -0.5, -0.5]]))


# Спектральные модели
@pytest.fixture
def model_infinite() -> SpectralModel:
    """Бесконечный избыток, A_F = 0.25, B_F = 4"""
    return SpectralModel(ess_lo=0.5, ess_hi=2.0)


@pytest.fixture
def model_finite() -> SpectralModel:
    """Избыток 1, ess = [1, 2], сверху 3 и 2.5"""
    return SpectralModel(
        ess_lo=1.0, ess_hi=2.0, above=((3.0, 1), (2.5, 1)), below=((0.0, 1),), excess=1
    )


@pytest.fixture
def model_small_ess() -> SpectralModel:
    """Избыток 2, ess = [0.2, 0.2] на шкале |F|"""
    return SpectralModel(ess_lo=0.2, ess_hi=0.2, below=((0.0, 2),), excess=2)


# Конфигурация и файлы
@pytest.fixture
def config(tmp_path, monkeypatch) -> Config:
    monkeypatch.setenv("QD_LOG_PATH", str(tmp_path / "logs"))
    return Config(certify_batch_size=250, certify_workers=2)


@pytest.fixture
def write_frame_file(tmp_path) -> Callable[[str, np.ndarray], Path]:
    def write(name: str, synthesis) -> Path:
        path = tmp_path / name
        path.write_text(FrameFile.from_synthesis(synthesis).model_dump_json())
        return path
    return write


@pytest.fixture
def write_model_file(tmp_path) -> Callable[[str, dict], Path]:
    def write(name: str, document: dict) -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(document))
        return path
    return write
