"""Exception types raised across the package."""


class PerfCodeError(Exception):
    pass


class CapExceeded(PerfCodeError):
    """A group, lattice or transversal computation would pass its size cap."""

    def __init__(self, what, size, cap):
        super().__init__(f"{what} of size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class InvalidGenerator(PerfCodeError):
    pass


class InvalidParams(PerfCodeError):
    pass


class InvalidAction(PerfCodeError):
    pass


class InvalidRange(PerfCodeError):
    pass


class NotNormal(PerfCodeError):
    pass


class NotFound(PerfCodeError):
    pass


class NotATransversal(PerfCodeError):
    pass


class NotInverseClosed(PerfCodeError):
    pass


class InternalError(PerfCodeError):
    pass


class ParseError(PerfCodeError):
    def __init__(self, message, text="", pos=0):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.pos = pos
        self.text = text
