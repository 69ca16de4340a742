"""
cylnogo/errors.py

Exception hierarchy shared by the engine, the CLI and the HTTP service.
"""


class CylnogoError(Exception):
    """Base class for every error raised by the engine."""


class ParameterError(CylnogoError, ValueError):
    """Unknown parameter name or out-of-range xi index."""


class ParseError(CylnogoError, ValueError):
    def __init__(self, message: str, position: int, detail: str = ""):
        text = f"{message} at offset {position}"
        super().__init__(f"{text}: {detail}" if detail else text)
        self.position = position


class KetIndexError(CylnogoError, IndexError):
    """A ket action needed a xi value beyond the supported window."""


class DeferredOrderingError(CylnogoError):
    """A product would move the diagonal symbol past a shift operator."""


class EliminationError(CylnogoError, ValueError):
    pass


class DomainMissError(CylnogoError, LookupError):
    pass


class SchemeError(CylnogoError):
    pass


class NonlinearConstraintError(CylnogoError, ValueError):
    pass


class SolveError(CylnogoError, ValueError):
    pass


class CutoffError(CylnogoError, ValueError):
    pass


class UnknownCheckError(CylnogoError, LookupError):
    pass


class ConfigError(CylnogoError):
    pass
