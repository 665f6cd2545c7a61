import logging
from typing import Dict, List, Type

from probetracker.core.errors import CaptureFormatError
from .base import CaptureFormat

logger = logging.getLogger(__name__)


class FormatRegistry:
    _formats_by_priority: Dict[int, List[CaptureFormat]] = {}
    _initialized: bool = False

    @classmethod
    def _initialize(cls):
        if cls._initialized:
            return
        cls._initialized = True
        # importing the modules runs their @register_format decorators
        from . import pcap, records  # noqa: F401

    @classmethod
    def register_format(cls, format_class: Type[CaptureFormat], priority: int = 100) -> None:
        instance = format_class()
        bucket = cls._formats_by_priority.setdefault(priority, [])
        if any(type(existing) is format_class for existing in bucket):
            return
        bucket.append(instance)
        logger.debug('Registered capture format %s with priority %d', instance.name, priority)

    @classmethod
    def formats(cls) -> List[CaptureFormat]:
        cls._initialize()
        ordered = []
        for priority in sorted(cls._formats_by_priority.keys()):
            ordered.extend(cls._formats_by_priority[priority])
        return ordered

    @classmethod
    def names(cls) -> List[str]:
        return [fmt.name for fmt in cls.formats()]

    @classmethod
    def get(cls, name: str) -> CaptureFormat:
        for fmt in cls.formats():
            if fmt.name == name:
                return fmt
        raise CaptureFormatError(f"Unknown capture format '{name}' (known: {', '.join(cls.names())})")

    @classmethod
    def detect(cls, head: bytes) -> CaptureFormat:
        for fmt in cls.formats():
            if fmt.can_handle(head):
                logger.debug('Detected capture format %s', fmt.name)
                return fmt
        raise CaptureFormatError('Unrecognized capture format')
