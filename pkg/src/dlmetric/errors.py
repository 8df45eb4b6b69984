"""Exception types shared across the package."""


class DLError(Exception):
    """Base class for package errors."""


class ParamError(DLError, ValueError):
    """Invalid ring/group parameters."""


class ParseError(DLError, ValueError):
    def __init__(self, msg: str, pos: int | None = None):
        if pos is not None:
            msg = f"{msg} (at position {pos})"
        super().__init__(msg)
        self.pos = pos


class InfeasibleProjection(DLError, ValueError):
    pass


class ResourceError(DLError):
    """A computation would exceed the configured state budget."""


class CacheError(DLError):
    pass


class CacheVersionError(CacheError):
    pass


class CacheParamError(CacheError):
    pass


class CorruptCacheError(CacheError):
    def __init__(self, msg: str, line: int):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class FormulaError(DLError, RuntimeError):
    """An internal consistency check of the length formula failed."""
