"""Exception hierarchy; each class maps to one CLI exit code."""


class StarcoreError(Exception):
    exit_code = 2


class UsageError(StarcoreError, ValueError):
    """Bad input: mismatched rings, malformed arguments, violated preconditions."""

    exit_code = 2


class ParseError(UsageError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class UnsupportedError(UsageError):
    pass


class ResourceError(StarcoreError, RuntimeError):
    """A configured size or degree cap was exceeded."""

    exit_code = 3


class ScenarioAssertionError(StarcoreError, AssertionError):
    """An expected containment or equality did not hold."""

    exit_code = 1
