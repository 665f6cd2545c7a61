"""
Exception hierarchy shared by the library and the CLI.
"""
from typing import Optional


class ProbeTrackerError(Exception):
    pass


class CaptureFormatError(ProbeTrackerError):
    """Fatal problem with a capture container or record file."""


class FrameDecodeError(ProbeTrackerError):
    """A single frame could not be decoded; readers skip it and warn."""


class ConfigError(ProbeTrackerError):

    def __init__(self, message: str, key_path: Optional[str] = None):
        self.key_path = key_path
        if key_path:
            message = f'{key_path}: {message}'
        super().__init__(message)


class ConsistencyError(ProbeTrackerError):
    pass


class ContractError(ProbeTrackerError, ValueError):
    """Raised when a caller breaks an operation's precondition."""


class CaptureWriteError(ProbeTrackerError, OSError):

    def __init__(self, message: str, bytes_written: int):
        self.bytes_written = bytes_written
        super().__init__(f'{message} (wrote {bytes_written} bytes before failing)')
