"""Exception hierarchy shared across the package.

Every error carries a stable machine-readable ``code`` so the CLI can emit
one parseable JSON line per failure.
"""


class SetShapingError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "Error"


class EmptySequenceError(SetShapingError):
    code = "EmptySequence"


class EmptyCompositionError(SetShapingError):
    code = "EmptyComposition"


class SequenceParseError(SetShapingError):
    code = "ParseError"


class RankOutOfRangeError(SetShapingError):
    code = "RankOutOfRange"


class AlphabetTooSmallError(SetShapingError):
    code = "AlphabetTooSmall"


class BadLengthError(SetShapingError):
    code = "BadLength"


class NotInShapedSubsetError(SetShapingError):
    code = "NotInShapedSubset"


class TooManyClassesError(SetShapingError):
    code = "TooManyClasses"


class TooLargeError(SetShapingError):
    code = "TooLarge"


class UncodableSymbolError(SetShapingError):
    code = "UncodableSymbol"


class MalformedPayloadError(SetShapingError):
    code = "MalformedPayload"


class BadDistributionError(SetShapingError):
    code = "BadDistribution"
