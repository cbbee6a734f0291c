class InvalidInputError(ValueError):
    """An argument violates the documented precondition of an operation."""


class CapabilityError(RuntimeError):
    """An exact routine was asked to run above its configured size cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: instance size {size} exceeds exact cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap
