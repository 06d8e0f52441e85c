"""
Чтение и запись файлов фреймов (JSON, CSV) и спектральных моделей
"""
import logging
from pathlib import Path
from typing import Union

import numpy as np
from pydantic import ValidationError

from core.errors import ParseError
from core.models import Frame, SpectralModel
from core.schemas import FrameFile, SpectralModelFile
from services.frames.frame_service import from_synthesis

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"Cannot read {path}: {e}") from e


def read_frame_file(path: PathLike) -> FrameFile:
    try:
        return FrameFile.model_validate_json(_read_text(path))
    except ValidationError as e:
        raise ParseError(f"Invalid frame file {path}: {e}") from e


def read_csv_frame(path: PathLike) -> Frame:
    """Вещественный фрейм из CSV: один вектор на строку"""
    try:
        data = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
    except (OSError, ValueError) as e:
        raise ParseError(f"Cannot parse CSV frame {path}: {e}") from e
    if data.size == 0:
        raise ParseError(f"CSV frame {path} is empty")
    return from_synthesis(data.T)


def read_frame(path: PathLike, csv: bool = False) -> Frame:
    """
    Чтение фрейма из файла

    Args:
        path: путь к файлу
        csv: читать вещественный CSV вместо JSON

    Returns:
        Frame: проверенный фрейм
    """
    if csv:
        frame = read_csv_frame(path)
    else:
        frame = from_synthesis(read_frame_file(path).to_synthesis())
    logger.debug(f"Frame read from {path}: n={frame.n}, m={frame.m}")
    return frame


def write_frame(path: PathLike, synthesis) -> None:
    """Запись синтезирующей матрицы как FrameFile"""
    document = FrameFile.from_synthesis(synthesis)
    try:
        Path(path).write_text(document.model_dump_json(indent=2), encoding="utf-8")
    except OSError as e:
        raise ParseError(f"Cannot write {path}: {e}") from e
    logger.debug(f"Frame written to {path}: n={document.n}, m={document.m}")


def read_model(path: PathLike) -> SpectralModel:
    """Чтение спектральной модели (InvalidModel при нарушении инвариантов)"""
    try:
        document = SpectralModelFile.model_validate_json(_read_text(path))
    except ValidationError as e:
        raise ParseError(f"Invalid spectral model file {path}: {e}") from e
    return document.to_model()
