"""
Exceptions raised across the tutoring engine.

Input-shape problems also subclass ValueError so callers that only know the
standard library can still catch them.
"""


class TutorError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(TutorError, ValueError):
    pass


class RejectedInputError(TutorError, ValueError):
    pass


class UnknownTopicError(TutorError, ValueError):
    pass


class MalformedItemError(TutorError, ValueError):
    pass


class BankError(TutorError, ValueError):
    pass


class HintUnavailableError(TutorError):
    pass


class AgentError(TutorError):
    pass


class CommitError(TutorError):
    pass


class SerializationError(TutorError, ValueError):
    pass


class StoreLockedError(TutorError):
    pass


class ReplayDivergenceError(TutorError):
    def __init__(self, version, expected, actual):
        super().__init__(
            f"Replay diverged at version {version}: expected digest {expected}, got {actual}"
        )
        self.version = version
        self.expected = expected
        self.actual = actual


class LogGapError(TutorError):
    def __init__(self, expected, got):
        super().__init__(f"Event log gap: expected version {expected}, got {got}")
        self.expected = expected
        self.got = got


class LogCorruptionError(TutorError):
    def __init__(self, version, detail=""):
        message = f"Event log corrupted at version {version}"
        if detail:
            message += f": {detail}"
        super().__init__(message)
        self.version = version
