"""Exception types shared across the package.

All of them derive from ValueError so callers that only care about
"bad input" can catch a single class.
"""


class InvalidArgument(ValueError):
    pass


class PreconditionViolation(ValueError):
    pass


class NotApplicable(ValueError):
    """The requested bound does not apply to the given descriptor."""


class NoValidPairs(ValueError):
    pass
