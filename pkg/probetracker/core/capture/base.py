"""
Base classes shared by capture formats.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, Iterator, List, Optional

from probetracker.core.frames import ProbeRequest

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CaptureRecord:
    probe: ProbeRequest
    raw_frame: Optional[bytes] = None


@dataclass
class ReadStats:
    probes: int = 0
    skipped: int = 0
    undecodable: int = 0
    truncated: int = 0
    warnings: List[str] = field(default_factory=list)

    def warn(self, message: str) -> None:
        self.warnings.append(message)
        logger.warning(message)

    def to_dict(self) -> dict:
        return {'probes': self.probes, 'skipped': self.skipped,
                'undecodable': self.undecodable, 'truncated': self.truncated}


class CaptureFormat(ABC):
    """
    A capture container format. Subclasses register themselves with
    @register_format so the registry can pick one by name or by sniffing.
    """
    format_name = ''

    @property
    def name(self) -> str:
        return self.format_name or self.__class__.__name__

    @abstractmethod
    def can_handle(self, head: bytes) -> bool:
        """
        Checks whether a stream starting with head is in this format.

        Args:
            head: first bytes of the stream (may be shorter than requested)
        """
        pass

    @abstractmethod
    def read(self, stream: BinaryIO, stats: ReadStats, fcs_mode: str = 'auto') -> Iterator[CaptureRecord]:
        pass

    @abstractmethod
    def write(self, records: Iterable[CaptureRecord], sink: BinaryIO) -> int:
        pass
