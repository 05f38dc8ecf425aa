"""Exception hierarchy.

Everything raised for bad user input derives from :class:`ApnForgeError`, so
the CLI can map it to exit status 2.  :class:`SearchTimeout` is kept apart:
a search that ran out of budget is an outcome, not a user error.
"""


class ApnForgeError(ValueError):
    pass


# gf2n
class UnsupportedDegree(ApnForgeError):
    pass


class ReducibleModulus(ApnForgeError):
    pass


class FieldMismatch(ApnForgeError):
    pass


class ZeroInverse(ApnForgeError, ZeroDivisionError):
    pass


class OddDegree(ApnForgeError):
    pass


# funcspace
class BadParams(ApnForgeError):
    pass


class ZeroDirection(ApnForgeError):
    pass


class NoApnRepresentative(ApnForgeError):
    pass


class ParseError(ApnForgeError):
    pass


# lincode
class LengthMismatch(ApnForgeError):
    pass


class SizeMismatch(ApnForgeError):
    pass


class CapTooLarge(ApnForgeError):
    pass


class NotSupercode(ApnForgeError):
    pass


class TooBig(ApnForgeError):
    pass


class NoWitness(ApnForgeError):
    pass


# permgrp
class ZeroScalar(ApnForgeError):
    pass


class TooLong(ApnForgeError):
    pass


class DegreeTooLarge(ApnForgeError):
    pass


class GroupTooLarge(ApnForgeError):
    pass


class NotSubgroup(ApnForgeError):
    pass


# family
class DeltaRequiresS1(BadParams):
    pass


class SearchTimeout(Exception):
    """Raised when a search exhausts its wall-clock budget."""

    def __init__(self, message, elapsed=None):
        super().__init__(message)
        self.elapsed = elapsed
