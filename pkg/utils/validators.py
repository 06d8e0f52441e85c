"""
Модуль содержит функции для валидации аргументов командной строки.
Каждый валидатор возвращает кортеж (bool, str), где:
- bool: True если данные валидны, False если есть ошибки
- str: None если данные валидны, текст ошибки если есть проблемы
"""
import re
from pathlib import Path
from typing import Optional, Tuple

NORM_FLAG = re.compile(r"^(op|sinf|s\d+(\.\d+)?|kf\d+)$")


def validate_norm_flag(flag: str) -> Tuple[bool, Optional[str]]:
    """
    Валидация флага нормы.
    Допустимые значения: op, sinf, s<p> (p >= 1), kf<k> (k >= 1)
    """
    value = flag.strip().lower()
    if not NORM_FLAG.match(value):
        return False, f"Неизвестная норма: {flag}. Используйте op, s1, s2, sinf или kf<k>"
    if value.startswith("kf") and int(value[2:]) < 1:
        return False, "Индекс Ки Фана должен быть не меньше 1"
    if value.startswith("s") and value != "sinf" and float(value[1:]) < 1:
        return False, "Показатель Шаттена должен быть не меньше 1"
    return True, None


def validate_samples(samples: int) -> Tuple[bool, Optional[str]]:
    """Валидация числа образцов: целое от 1 до 10^8"""
    if isinstance(samples, bool) or not isinstance(samples, int):
        return False, "Число образцов должно быть целым"
    if samples < 1:
        return False, "Число образцов должно быть не меньше 1"
    if samples > 100_000_000:
        return False, "Слишком большое число образцов"
    return True, None


def validate_seed(seed: int) -> Tuple[bool, Optional[str]]:
    """Валидация зерна генератора: неотрицательное целое"""
    if isinstance(seed, bool) or not isinstance(seed, int):
        return False, "Зерно должно быть целым"
    if seed < 0:
        return False, "Зерно должно быть неотрицательным"
    return True, None


def validate_input_path(path: str) -> Tuple[bool, Optional[str]]:
    """Валидация входного файла: существует и является файлом"""
    if not path:
        return False, "Не указан входной файл"
    if not Path(path).is_file():
        return False, f"Файл не найден: {path}"
    return True, None


def validate_output_path(path: str) -> Tuple[bool, Optional[str]]:
    """Валидация выходного файла: каталог существует"""
    if not path:
        return False, "Не указан выходной файл"
    target = Path(path)
    if target.is_dir():
        return False, f"Путь указывает на каталог: {path}"
    if not target.parent.exists():
        return False, f"Каталог не существует: {target.parent}"
    return True, None
