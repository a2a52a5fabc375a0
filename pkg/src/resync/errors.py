"""Exception types shared across the package."""


class ResyncError(Exception):
    pass


class NotSuccessful(ResyncError):
    """Raised when an operation needs a successful run and gets another one."""


class InvalidRun(ResyncError):
    pass


class InvalidInterval(ResyncError):
    pass


class NotALoop(ResyncError):
    pass


class BoundExceeded(ResyncError):
    """A configured cap (states, elements, steps) was hit before completion."""

    def __init__(self, what, cap):
        super().__init__(f"{what} exceeded cap {cap}")
        self.what = what
        self.cap = cap


class NotTotallyOrdered(ResyncError):
    """The juxtaposed flows do not induce a single traversal."""


class HasInversion(ResyncError):
    pass


class TreeMismatch(ResyncError):
    pass


class MismatchedPair(ResyncError):
    pass


class NotKVisit(ResyncError):
    pass
