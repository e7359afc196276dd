"""Exception hierarchy shared by all cftc modules."""


class CFTError(Exception):
    """Base class for every error raised by cftc."""


class FormulaError(CFTError):
    pass


class CompositionError(CFTError):
    pass


class ComponentError(CFTError):
    pass


class EnvBoundError(CFTError):
    pass


class PreconditionError(CFTError):
    pass


class SimplificationError(CFTError):
    """Raised when a simplified counterexample fails re-verification."""


class ParseError(CFTError):
    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + message)
