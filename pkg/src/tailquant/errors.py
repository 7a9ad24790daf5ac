"""Exception types shared across the package."""


class TailquantError(Exception):
    """Base class for all tailquant errors."""


class DomainError(TailquantError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RankOutOfRange(TailquantError, IndexError):
    """An order-statistic rank is outside 1..n."""


class InsufficientSamples(TailquantError):
    """The sample is too small to resolve the requested probability level.

    Raised when the order-statistic rank floor(n*p) is zero; carries the
    smallest sample size that would make the rank positive.
    """

    def __init__(self, p: float, n: int, needed: int):
        self.p = p
        self.n = n
        self.needed = needed
        super().__init__(
            f"insufficient samples: need n >= {needed} to resolve p = {p:g} (got n = {n})"
        )


class NoConvergence(TailquantError, ArithmeticError):
    """An iterative numerical scheme hit its iteration cap before converging."""


class ConfigError(TailquantError, ValueError):
    """An experiment configuration is invalid."""


class EmptyInput(TailquantError, ValueError):
    """An aggregate was requested over an empty collection."""
