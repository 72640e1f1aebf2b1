"""Exception hierarchy and the process exit codes each class maps to."""

from __future__ import annotations

EXIT_OK = 0
EXIT_INTEGRITY = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_PROTOCOL = 4


class BrickKitError(Exception):
    """Base class for all toolkit errors."""

    exit_code = EXIT_USAGE


class ConfigError(BrickKitError):
    """Invalid specification, argument, or option combination."""

    exit_code = EXIT_USAGE


class IntegrityError(BrickKitError):
    """Data failed a digest, count, or authentication check."""

    exit_code = EXIT_INTEGRITY


class ManifestError(IntegrityError):
    """Manifest is malformed or corrupt. Carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedVersionError(ManifestError):
    """Manifest declares a format version this build cannot read."""


class ProtocolError(BrickKitError):
    """Peer violated the benchmark wire protocol."""

    exit_code = EXIT_PROTOCOL
