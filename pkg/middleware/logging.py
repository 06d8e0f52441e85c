"""
Middleware для автоматического логирования запусков команд
"""

from argparse import Namespace
from typing import Any, Awaitable, Callable, Dict

from services.logging.log_service import LogService


class LoggingMiddleware:
    """Middleware для логирования запусков команд CLI"""

    def __init__(self, log_service: LogService):
        self.log_service = log_service

    async def __call__(
        self,
        handler: Callable[[Namespace, Dict[str, Any]], Awaitable[Any]],
        event: Namespace,
        data: Dict[str, Any]
    ) -> Any:
        arguments = {
            key: value for key, value in vars(event).items()
            if key not in {"handler", "command"}
        }
        # Логируем запуск команды
        self.log_service.log_run(event.command, arguments, {
            "tol_fp": data["config"].tol
        })

        try:
            return await handler(event, data)
        except Exception as e:
            # Логируем ошибку
            self.log_service.log_error(e, {
                "command": event.command,
                "arguments": arguments
            })
            raise
