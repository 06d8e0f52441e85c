# main.py
import argparse
import asyncio
import functools
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence

from dotenv import load_dotenv
from pydantic import ValidationError

from config.config import APP_NAME, VERSION, Config
from core.errors import (
    DimensionMismatch,
    InvalidModel,
    InvalidSpec,
    NotAFrame,
    ParseError,
    QuasiDualError,
    UsageError,
)
from handlers.cli_handlers import CommandResult, register_handlers
from middleware.logging import LoggingMiddleware
from services.certify.certification_service import CertificationService
from services.logging.log_service import LogService
from utils.formatters import format_report_json, format_summary

# Настройка логирования (stdout занят JSON-отчетами)
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[
        logging.StreamHandler(sys.stderr)
    ]
)

logger = logging.getLogger(__name__)

# Загружаем переменные окружения
load_dotenv()

EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_NUMERICAL = 3


class ArgumentParser(argparse.ArgumentParser):
    """Парсер, сообщающий об ошибке исключением вместо выхода с кодом 2"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog=APP_NAME,
        description="Parseval quasi-dual frames: optimal bounds, constructions and certificates",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)
    register_handlers(subparsers)
    return parser


def setup_services(config: Config) -> Dict[str, Any]:
    """
    Инициализация сервисов

    Args:
        config: конфигурация

    Returns:
        dict: словарь с сервисами
    """
    try:
        log_service = LogService(config.log_path, level=config.log_level)
        certification = CertificationService(config, log_service)
        return {
            "config": config,
            "log": log_service,
            "certification": certification
        }
    except Exception as e:
        logger.critical(f"Error setting up services: {e}")
        raise


def setup_middlewares(services: Dict[str, Any]) -> List:
    """
    Список мидлварей в порядке вложения

    Args:
        services: словарь сервисов
    """
    return [LoggingMiddleware(services["log"])]


def wrap_handler(handler, middlewares: Sequence):
    """Оборачивание обработчика мидлварями: первая в списке - внешняя"""
    wrapped = handler
    for middleware in reversed(middlewares):
        wrapped = functools.partial(middleware, wrapped)
    return wrapped


def exit_code_for(error: Exception) -> int:
    if isinstance(error, (UsageError, InvalidSpec)):
        return EXIT_USAGE
    if isinstance(error, (ParseError, NotAFrame, InvalidModel, DimensionMismatch)):
        return EXIT_PARSE
    return EXIT_NUMERICAL


async def main(argv: Optional[Sequence[str]] = None) -> int:
    """Точка входа"""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        logger.error(f"Usage error: {e}")
        return EXIT_USAGE

    try:
        # Загружаем конфигурацию
        config = Config()
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_USAGE

    logging.getLogger().setLevel(config.log_level)
    services = setup_services(config)
    handler = wrap_handler(args.handler, setup_middlewares(services))

    try:
        result: CommandResult = await handler(args, services)
    except QuasiDualError as e:
        code = exit_code_for(e)
        logger.error(f"{args.command} failed ({type(e).__name__}, exit {code}): {e}")
        return code
    except Exception as e:
        logger.critical(f"Unexpected error in {args.command}: {e}")
        return EXIT_NUMERICAL

    print(format_report_json(result.report))
    logger.info(format_summary(result.report))
    return result.exit_code


if __name__ == "__main__":
    try:
        sys.exit(asyncio.run(main()))
    except KeyboardInterrupt:
        logger.info("Interrupted")
        sys.exit(130)
