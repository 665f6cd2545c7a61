"""
Reading and writing probe-request captures.
"""
import io
import os
from contextlib import contextmanager
from typing import BinaryIO, Iterable, Iterator, List, NamedTuple, Optional, Union

from probetracker.core.errors import CaptureFormatError
from .base import CaptureFormat, CaptureRecord, ReadStats
from .decorator import register_format
from .dot11 import FCS_MODES, decode_frame, encode_frame, is_probe_request
from .registry import FormatRegistry

Source = Union[str, os.PathLike, bytes, BinaryIO]

SNIFF_LEN = 16


class ReadResult(NamedTuple):
    records: List[CaptureRecord]
    stats: ReadStats


@contextmanager
def _open_source(source: Source):
    if isinstance(source, (bytes, bytearray)):
        yield io.BytesIO(bytes(source))
    elif isinstance(source, (str, os.PathLike)):
        if not os.path.exists(source):
            raise FileNotFoundError(f"File '{source}' not found")
        with open(source, 'rb') as f:
            yield f
    else:
        yield source


def _sniff(stream: BinaryIO):
    if hasattr(stream, 'peek'):
        return stream.peek(SNIFF_LEN)[:SNIFF_LEN], stream
    if stream.seekable():
        position = stream.tell()
        head = stream.read(SNIFF_LEN)
        stream.seek(position)
        return head, stream
    buffered = io.BytesIO(stream.read())
    return buffered.getvalue()[:SNIFF_LEN], buffered


def iter_capture(stream: BinaryIO, fmt: Optional[str] = None, stats: Optional[ReadStats] = None,
                 fcs_mode: str = 'auto') -> Iterator[CaptureRecord]:
    """
    Stream probe records from an open binary stream in file order.

    Args:
        stream: binary stream positioned at the start of the capture
        fmt: format name, or None to detect it from the first bytes
        stats: counters updated while reading
        fcs_mode: 'auto' (radiotap flags), 'present' or 'absent'
    """
    if fcs_mode not in FCS_MODES:
        raise ValueError(f"fcs_mode must be one of {', '.join(FCS_MODES)}")
    stats = stats if stats is not None else ReadStats()
    if fmt is None:
        (head, stream) = _sniff(stream)
        capture_format = FormatRegistry.detect(head)
    else:
        capture_format = FormatRegistry.get(fmt)
    yield from capture_format.read(stream, stats, fcs_mode)


def read_capture(source: Source, fmt: Optional[str] = None, fcs_mode: str = 'auto') -> ReadResult:
    """
    Read every probe request of a capture.

    Args:
        source: path, raw bytes or binary stream
        fmt: 'pcap', 'records' or None to auto-detect

    Returns:
        ReadResult with the records and the read statistics
    """
    stats = ReadStats()
    with _open_source(source) as stream:
        records = list(iter_capture(stream, fmt, stats, fcs_mode))
    return ReadResult(records, stats)


def write_capture(records: Iterable[CaptureRecord], sink: Union[str, os.PathLike, BinaryIO],
                  fmt: str = 'records') -> int:
    """
    Write records in the given format.

    Returns:
        Number of bytes written
    """
    capture_format = FormatRegistry.get(fmt)
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, 'wb') as f:
            return capture_format.write(records, f)
    return capture_format.write(records, sink)


def as_records(probes) -> List[CaptureRecord]:
    return [CaptureRecord(probe=probe) for probe in probes]


__all__ = [
    'CaptureFormat', 'CaptureFormatError', 'CaptureRecord', 'FormatRegistry', 'ReadResult', 'ReadStats',
    'as_records', 'decode_frame', 'encode_frame', 'is_probe_request', 'iter_capture', 'read_capture',
    'register_format', 'write_capture',
]
