"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class FreeRadialError(Exception):
    exit_code = 1


class DomainError(FreeRadialError, ValueError):
    """Precondition or parameter-domain violation."""

    exit_code = 2


class ResourceCapError(FreeRadialError):
    """A ball or matrix would exceed the configured vertex cap."""

    exit_code = 3


class FormatError(FreeRadialError):
    """Malformed input file."""

    exit_code = 4

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}" if where else message)
