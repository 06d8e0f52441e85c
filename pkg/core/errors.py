"""
Иерархия исключений пакета.
Ошибки входных данных дополнительно наследуются от ValueError,
численные сбои - от NumericalError.
"""


class QuasiDualError(Exception):
    """Базовое исключение пакета"""


class NumericalError(QuasiDualError):
    """Численный сбой: итерации не сошлись, потеря ранга и т.п."""


class NoConvergence(NumericalError):
    pass


class RankDeficient(NumericalError):
    pass


class InvalidMatrix(QuasiDualError, ValueError):
    pass


class NotHermitian(QuasiDualError, ValueError):
    pass


class DimensionMismatch(QuasiDualError, ValueError):
    pass


class NotAFrame(QuasiDualError, ValueError):
    pass


class InvalidSpec(QuasiDualError, ValueError):
    pass


class InvalidP(InvalidSpec):
    pass


class NotSorted(QuasiDualError, ValueError):
    pass


class RankTooLow(QuasiDualError, ValueError):
    pass


class FanPallViolated(QuasiDualError, ValueError):
    pass


class InterlacingViolated(QuasiDualError, ValueError):
    pass


class NotParseval(QuasiDualError, ValueError):
    pass


class NoParsevalDual(QuasiDualError, ValueError):
    pass


class InvalidModel(QuasiDualError, ValueError):
    pass


class WrongExcess(InvalidModel):
    pass


class HypothesisNotMet(QuasiDualError, ValueError):
    pass


class InvalidSpectralData(QuasiDualError, ValueError):
    pass


class ParseError(QuasiDualError, ValueError):
    pass


class UsageError(QuasiDualError, ValueError):
    pass
