"""Exception types shared across the package."""


class TempowlError(Exception):
    """Base class for every library-specific error."""


class ValidationError(TempowlError):
    """A graph value violates a structural invariant."""


class NonIncreasingTimes(ValidationError):
    pass


class UnknownNode(ValidationError):
    pass


class SelfLoop(ValidationError):
    pass


class MissingColour(ValidationError):
    pass


class NotColourPersistent(TempowlError):
    pass


class EmptyEdgeSet(TempowlError):
    pass


class LayerNotComputed(TempowlError):
    pass


class SizeLimitExceeded(TempowlError):
    pass


class ConfigMismatch(TempowlError):
    pass


class UnknownFixture(TempowlError):
    pass
