"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class FznFeatError(Exception):
    """Base class for all toolkit errors."""


class FlatZincError(FznFeatError):
    """Problem in a FlatZinc source text or model."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class FlatZincSyntaxError(FlatZincError):
    pass


class ModelError(FznFeatError):
    pass


class AliasCycleError(ModelError):
    def __init__(self, cycle: list[str]):
        super().__init__("cyclic alias chain: " + " -> ".join(cycle + cycle[:1]))
        self.cycle = cycle


class XcspError(FznFeatError):
    pass


class XcspUnsupportedError(XcspError):
    """Input uses a feature outside the supported XCSP 2.1 subset."""


class ProbeError(FznFeatError):
    pass


class SolverNotFoundError(ProbeError):
    pass


class UnknownDialectError(ProbeError):
    pass


class DatasetError(FznFeatError):
    pass
