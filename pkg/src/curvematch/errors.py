"""Exception types shared across the package."""

import os


class InstanceTooLargeError(ValueError):
    """An exhaustive solver was asked to exceed its size cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what} = {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class InfeasibleError(RuntimeError):
    """No eps in the search bracket admits a solution."""


class InvalidFormulaError(ValueError):
    pass


class UnroutableFormulaError(ValueError):
    pass


def default_cap(fallback: int) -> int:
    """Brute-force size cap, overridable through ``CURVE_MATCH_CAP``."""
    env = os.environ.get("CURVE_MATCH_CAP")
    if env:
        return int(env)
    return fallback


def check_cap(what: str, size: int, cap: int) -> None:
    if size > cap:
        raise InstanceTooLargeError(what, size, cap)
