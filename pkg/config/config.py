from pydantic_settings import BaseSettings
from pydantic import validator

from core.models import Tolerances

APP_NAME = "parseval-quasidual"
VERSION = "1.0.0"


class Config(BaseSettings):
    """Настройки приложения (переменные окружения с префиксом QD_)."""
    # Допуски
    tol: float = 1e-8  # QD_TOL, допуск tol_fp
    tol_herm: float = 1e-10
    tol_eig: float = 1e-10
    tol_dual: float = 1e-8
    tol_tie: float = 1e-10
    tol_one: float = 1e-8
    tol_cert: float = 1e-8
    max_sweeps: int = 100

    # Настройки сертификации
    default_samples: int = 10_000
    refine_steps: int = 50
    refine_step: float = 0.1
    refine_decay: float = 0.5
    certify_batch_size: int = 1000
    certify_workers: int = 4

    # Настройки логирования
    log_level: str = "INFO"
    log_path: str = "logs"

    @validator(
        "tol", "tol_herm", "tol_eig", "tol_dual", "tol_tie", "tol_one", "tol_cert",
        pre=True
    )
    def parse_tolerance(cls, v):
        # Допускаем строки вида "1e-8" из .env
        value = float(v.strip()) if isinstance(v, str) else float(v)
        if not value > 0:
            raise ValueError("tolerances must be positive")
        return value

    @validator("log_level", pre=True)
    def parse_log_level(cls, v):
        level = str(v).strip().upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level: {v}")
        return level

    @validator("certify_batch_size", "certify_workers", "max_sweeps", "refine_steps")
    def check_positive_int(cls, v):
        if v < 1:
            raise ValueError("must be >= 1")
        return v

    def tolerances(self) -> Tolerances:
        """Набор допусков для численных сервисов"""
        return Tolerances(
            tol_herm=self.tol_herm,
            tol_eig=self.tol_eig,
            tol_dual=self.tol_dual,
            tol_fp=self.tol,
            tol_tie=self.tol_tie,
            tol_one=self.tol_one,
            tol_cert=self.tol_cert,
            max_sweeps=self.max_sweeps,
        )

    class Config:
        env_prefix = "QD_"
        env_file = ".env"
        env_file_encoding = 'utf-8'
        extra = "ignore"
