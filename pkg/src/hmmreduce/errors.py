"""Exception hierarchy shared by every stage of the reduction pipeline."""


class HmmReduceError(Exception):
    """Base class for all errors raised by hmmreduce."""


class ValidationError(HmmReduceError, ValueError):
    """A model or initial set violates the stochasticity conventions."""


class NonStochastic(ValidationError):
    pass


class NegativeEntry(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class ParseError(HmmReduceError, ValueError):
    """A model/result file could not be parsed.  ``where`` names the field."""

    def __init__(self, message, where=None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


class DimensionMismatch(HmmReduceError, ValueError):
    pass


class NotContained(HmmReduceError, ValueError):
    pass


class ZeroOnSupport(HmmReduceError, ValueError):
    pass


class EmptyGenerators(HmmReduceError, ValueError):
    pass


class NotAnAlgebra(HmmReduceError, ValueError):
    pass


class NumericDegeneracy(HmmReduceError, ArithmeticError):
    """Base for numeric failures of the pipeline (CLI exit code 3)."""


class DegenerateWeight(NumericDegeneracy):
    pass


class UnsupportedCustomVector(NumericDegeneracy):
    pass


class NegativeReducedEntry(NumericDegeneracy):
    """A reduced matrix came out negative beyond floating point noise."""


class SymbolOutOfRange(HmmReduceError, IndexError):
    pass


class EnumerationCapExceeded(HmmReduceError, RuntimeError):
    pass
