"""Exception hierarchy.

Class names are part of the public contract: the command line prints them
verbatim on domain errors, so renaming one is a breaking change.
"""


class FilterBankError(Exception):
    """Base class for every domain error raised by this package."""


class NonUnitCoefficient(FilterBankError, ValueError):
    def __init__(self, filter_index, tap, value):
        self.filter_index = filter_index
        self.tap = tap
        self.value = value
        super().__init__(
            f"coefficient {value!r} at (filter {filter_index}, tap {tap}) is not +1 or -1"
        )


class RaggedBank(FilterBankError, ValueError):
    pass


class EmptyBank(FilterBankError, ValueError):
    pass


class BadFilterIndex(FilterBankError, ValueError):
    pass


class TooManyFiltersInGroup(FilterBankError, ValueError):
    pass


class BadGroupCount(FilterBankError, ValueError):
    pass


class PlanMismatch(FilterBankError, ValueError):
    pass


class AccumulatorOverflowRisk(FilterBankError, OverflowError):
    pass


class SampleOutOfRange(FilterBankError, ValueError):
    pass


class ShapeMismatch(FilterBankError, ValueError):
    pass


class Overflow(FilterBankError, OverflowError):
    """Operation count exceeds the supported counter range."""


class BadFactor(FilterBankError, ValueError):
    pass


class BadThreshold(FilterBankError, ValueError):
    pass


class BadRatio(FilterBankError, ValueError):
    pass


class WriteFailure(FilterBankError, OSError):
    pass


class BadFormat(FilterBankError, ValueError):
    """An input file could not be parsed."""
