"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command-line front end:
1 for computation failures, 2 for configuration or validation failures.
"""


class MemoryModelError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1

    def to_dict(self):
        return {"error": type(self).__name__, "message": str(self)}


class ValidationError(MemoryModelError, ValueError):
    exit_code = 2


class ComputationError(MemoryModelError, ArithmeticError):
    exit_code = 1


class _IndexedError(ValidationError):
    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"{type(self).__name__} at index {index}")

    def to_dict(self):
        d = super().to_dict()
        d["index"] = self.index
        return d


class EmptyGrid(ValidationError):
    pass


class NonPositiveGamma(_IndexedError):
    pass


class NonFinite(_IndexedError):
    pass


class NonPositiveEnergy(_IndexedError):
    pass


class NegativeFrequency(_IndexedError):
    pass


class NonIncreasingIndex(_IndexedError):
    pass


class NegativeOccupation(_IndexedError):
    pass


class LengthMismatch(ValidationError):
    pass


class GridMismatch(ValidationError):
    pass


class IndexOutOfRange(ValidationError, IndexError):
    pass


class NegativeTime(ValidationError):
    pass


class UnorderedTimes(ValidationError):
    pass


class BadThreshold(ValidationError):
    pass


class NegativeTruncation(ValidationError):
    pass


class UnknownObservable(ValidationError):
    pass


class InsufficientSamples(ValidationError):
    pass


class Overdamped(ValidationError):
    pass


class ZeroSqueeze(ComputationError):
    """Inverse temperature is undefined when the squeeze parameter vanishes."""


class TruncationTooSmall(ComputationError):
    def __init__(self, message, leakage=None, n_max=None):
        self.leakage = leakage
        self.n_max = n_max
        super().__init__(message)

    def to_dict(self):
        d = super().to_dict()
        d["leakage"] = self.leakage
        d["n_max"] = self.n_max
        return d


class NonFiniteAmplitude(ComputationError):
    pass


class WindowContainsZeroCrossing(ComputationError):
    pass


class IntegrationBlowUp(ComputationError):
    """Raised when an integrated trajectory overflows; ``time`` is the first bad sample."""

    def __init__(self, message, time=None):
        self.time = time
        super().__init__(message)

    def to_dict(self):
        d = super().to_dict()
        d["time"] = self.time
        return d


class ConfigInvalid(ValidationError):
    def __init__(self, path, message=None):
        self.path = path
        super().__init__(message or f"invalid configuration value at {path!r}")

    def to_dict(self):
        d = super().to_dict()
        d["path"] = self.path
        return d


class UnknownCode(ConfigInvalid):
    pass


class NeedTwoCodes(ConfigInvalid):
    pass
