"""Exception hierarchy shared by every wigig module."""


class WigigError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameter(WigigError, ValueError):
    pass


class UnknownMcs(InvalidParameter, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class InvalidCode(InvalidParameter):
    pass


class UnsupportedCoding(WigigError):
    pass


class ProtocolViolation(WigigError):
    pass


class ScheduleConflict(WigigError):
    pass


class AggregationOverflow(WigigError):
    """Raised when an aggregate would exceed its size limit.

    ``admitted`` holds the longest prefix of the inputs that fits.
    """

    def __init__(self, message, admitted):
        super().__init__(message)
        self.admitted = list(admitted)


class LinkFailure(WigigError):
    pass


class NoLink(WigigError):
    pass


class ScenarioError(WigigError):
    """Scenario validation failed; ``errors`` lists every problem found."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
