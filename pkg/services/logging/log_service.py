"""
Модуль для централизованного логирования
"""

import logging
import logging.handlers
import os
from datetime import datetime
from typing import Any, Dict, Optional

from core.models import CertificationReport


class LogService:
    """Сервис логирования"""

    def __init__(
        self,
        log_path: str = "logs",
        max_bytes: int = 10_485_760,  # 10MB
        backup_count: int = 10,
        level: str = "INFO"
    ):
        self.log_path = log_path
        self.level = getattr(logging, level.upper(), logging.INFO)
        os.makedirs(log_path, exist_ok=True)

        # Настраиваем основной логгер
        self._setup_main_logger(max_bytes, backup_count)

        # Создаем отдельные логгеры для разных типов событий
        self.run_logger = self._setup_logger(
            "run_log",
            os.path.join(log_path, "runs.log"),
            max_bytes,
            backup_count
        )
        self.error_logger = self._setup_logger(
            "error_log",
            os.path.join(log_path, "errors.log"),
            max_bytes,
            backup_count
        )
        self.certification_logger = self._setup_logger(
            "certification_log",
            os.path.join(log_path, "certifications.log"),
            max_bytes,
            backup_count
        )

    @staticmethod
    def _has_file_handler(logger: logging.Logger, filename: str) -> bool:
        target = os.path.abspath(filename)
        return any(
            isinstance(h, logging.handlers.RotatingFileHandler) and h.baseFilename == target
            for h in logger.handlers
        )

    def _setup_main_logger(
        self,
        max_bytes: int,
        backup_count: int
    ) -> None:
        """Настройка основного логгера"""
        logger = logging.getLogger()
        logger.setLevel(self.level)

        filename = os.path.join(self.log_path, "quasidual.log")
        if self._has_file_handler(logger, filename):
            return

        # Файловый обработчик с ротацией
        file_handler = logging.handlers.RotatingFileHandler(
            filename,
            maxBytes=max_bytes,
            backupCount=backup_count
        )
        file_handler.setFormatter(
            logging.Formatter(
                "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
            )
        )
        logger.addHandler(file_handler)

    def _setup_logger(
        self,
        name: str,
        filename: str,
        max_bytes: int,
        backup_count: int
    ) -> logging.Logger:
        """Создание отдельного логгера"""
        logger = logging.getLogger(name)
        logger.setLevel(logging.INFO)
        # записи пишутся только в свой файл
        logger.propagate = False

        if not self._has_file_handler(logger, filename):
            handler = logging.handlers.RotatingFileHandler(
                filename,
                maxBytes=max_bytes,
                backupCount=backup_count
            )
            handler.setFormatter(
                logging.Formatter(
                    "%(asctime)s - %(message)s"
                )
            )
            logger.addHandler(handler)

        return logger

    def log_run(
        self,
        command: str,
        arguments: Dict[str, Any],
        context: Optional[Dict[str, Any]] = None
    ) -> None:
        """Логирование запуска команды"""
        log_data = {
            "timestamp": datetime.now().isoformat(),
            "command": command,
            "arguments": arguments
        }

        if context:
            log_data.update(context)

        self.run_logger.info(str(log_data))

    def log_error(
        self,
        error: Exception,
        context: Optional[Dict[str, Any]] = None
    ) -> None:
        """Логирование ошибки"""
        log_data = {
            "timestamp": datetime.now().isoformat(),
            "error_type": type(error).__name__,
            "error_message": str(error)
        }

        if context:
            log_data["context"] = context

        self.error_logger.error(str(log_data))

    def log_certification(
        self,
        report: CertificationReport,
        context: Optional[Dict[str, Any]] = None
    ) -> None:
        """Логирование отчета о сертификации"""
        log_data = {
            "timestamp": datetime.now().isoformat(),
            "norm": report.norm.flag,
            "samples": report.samples,
            "seed": report.seed,
            "alpha_claimed": report.alpha_claimed,
            "min_error_sampled": report.min_error_sampled,
            "violations": report.violations
        }

        if context:
            log_data.update(context)

        self.certification_logger.info(str(log_data))
