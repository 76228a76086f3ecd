"""Exception types shared across the package."""


class CosetSpaceError(Exception):
    """Base class for all errors raised by cosetspace."""


class WordParseError(CosetSpaceError, ValueError):
    pass


class RankMismatch(CosetSpaceError, ValueError):
    pass


class InfiniteIndex(CosetSpaceError, ValueError):
    """The folded subgroup graph is not complete, so the subgroup has infinite index."""


class ResourceExceeded(CosetSpaceError, RuntimeError):
    pass


class InvalidR(CosetSpaceError, ValueError):
    pass


class PartitionFormatError(CosetSpaceError, ValueError):
    pass


class TheoremViolation(CosetSpaceError, AssertionError):
    """A proven implication failed on concrete data; either the input or the code is wrong."""
