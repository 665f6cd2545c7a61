"""
Classic libpcap container (microsecond timestamps).

Layout: Global Header | Packet Header | Packet Data | Packet Header | ...
"""
import struct
from typing import BinaryIO, Iterable, Iterator

from probetracker.core.errors import CaptureFormatError, CaptureWriteError, FrameDecodeError
from .base import CaptureFormat, CaptureRecord, ReadStats
from .decorator import register_format
from .dot11 import MINIMAL_RADIOTAP, decode_frame, encode_frame, is_probe_request, split_radiotap, strip_fcs

PCAP_MAGIC = 0xA1B2C3D4
PCAP_MAGIC_NS = 0xA1B23C4D
PCAP_VERSION = (2, 4)
PCAP_SNAPLEN = 65535

LINKTYPE_IEEE802_11 = 105
LINKTYPE_IEEE802_11_RADIOTAP = 127

GLOBAL_HEADER_FORMAT = 'IHHiIII'
GLOBAL_HEADER_LEN = struct.calcsize('<' + GLOBAL_HEADER_FORMAT)
PACKET_HEADER_FORMAT = 'IIII'
PACKET_HEADER_LEN = struct.calcsize('<' + PACKET_HEADER_FORMAT)

_MAGICS = {
    struct.pack('<I', PCAP_MAGIC): '<',
    struct.pack('>I', PCAP_MAGIC): '>',
}
_NS_MAGICS = {struct.pack('<I', PCAP_MAGIC_NS), struct.pack('>I', PCAP_MAGIC_NS)}
PCAP_MAX_SECONDS = 2 ** 32


def split_timestamp(ts: float):
    micros = round(ts * 1_000_000)
    return divmod(micros, 1_000_000)


def join_timestamp(sec: int, usec: int) -> float:
    return sec + usec / 1_000_000


def timestamp_from_micros(micros: int) -> float:
    """Float timestamp exactly as the pcap reader would produce it."""
    return join_timestamp(*divmod(micros, 1_000_000))


@register_format(priority=10)
class PcapFormat(CaptureFormat):
    format_name = 'pcap'

    def can_handle(self, head: bytes) -> bool:
        return head[:4] in _MAGICS or head[:4] in _NS_MAGICS

    def read(self, stream: BinaryIO, stats: ReadStats, fcs_mode: str = 'auto') -> Iterator[CaptureRecord]:
        data = stream.read(GLOBAL_HEADER_LEN)
        if len(data) != GLOBAL_HEADER_LEN:
            raise CaptureFormatError('Unable to read pcap global header')
        if data[:4] in _NS_MAGICS:
            raise CaptureFormatError('Nanosecond pcap files are not supported')
        endian = _MAGICS.get(data[:4])
        if endian is None:
            raise CaptureFormatError(f'Bad pcap magic number {data[:4].hex()}')
        (_, major, minor, _, _, _, linktype) = struct.unpack(endian + GLOBAL_HEADER_FORMAT, data)
        if (major, minor) != PCAP_VERSION:
            raise CaptureFormatError(f'Unsupported pcap version {major}.{minor}')
        if linktype not in (LINKTYPE_IEEE802_11, LINKTYPE_IEEE802_11_RADIOTAP):
            raise CaptureFormatError(f'Unsupported pcap linktype {linktype} (expected 105 or 127)')

        index = 0
        while True:
            header = stream.read(PACKET_HEADER_LEN)
            if not header:
                return
            if len(header) != PACKET_HEADER_LEN:
                stats.warn(f'packet {index}: truncated packet header at end of file')
                return
            (ts_sec, ts_usec, incl_len, _) = struct.unpack(endian + PACKET_HEADER_FORMAT, header)
            packet = stream.read(incl_len)
            if len(packet) != incl_len:
                stats.warn(f'packet {index}: truncated packet data at end of file')
                return
            record = self._decode_packet(packet, join_timestamp(ts_sec, ts_usec), linktype, fcs_mode, stats, index)
            index += 1
            if record is not None:
                yield record

    def _decode_packet(self, packet, ts, linktype, fcs_mode, stats, index):
        try:
            if linktype == LINKTYPE_IEEE802_11_RADIOTAP:
                (frame, radiotap_fcs) = split_radiotap(packet)
            else:
                (frame, radiotap_fcs) = (packet, None)
            if not is_probe_request(frame):
                stats.skipped += 1
                return None
            frame = strip_fcs(frame, fcs_mode, radiotap_fcs)
            probe = decode_frame(frame, ts)
        except FrameDecodeError as e:
            stats.undecodable += 1
            stats.warn(f'packet {index}: {e}')
            return None
        if probe.truncated:
            stats.truncated += 1
            stats.warn(f'packet {index}: information elements overrun the frame, truncated')
        stats.probes += 1
        return CaptureRecord(probe=probe, raw_frame=frame)

    def write(self, records: Iterable[CaptureRecord], sink: BinaryIO) -> int:
        written = 0
        try:
            written += sink.write(struct.pack('<' + GLOBAL_HEADER_FORMAT, PCAP_MAGIC, PCAP_VERSION[0],
                                              PCAP_VERSION[1], 0, 0, PCAP_SNAPLEN,
                                              LINKTYPE_IEEE802_11_RADIOTAP))
            for (index, record) in enumerate(records):
                ts = record.probe.timestamp
                if not 0 <= ts < PCAP_MAX_SECONDS or split_timestamp(ts)[0] >= PCAP_MAX_SECONDS:
                    raise CaptureWriteError(f'record {index}: timestamp {ts!r} is outside the pcap range '
                                            'of 0 to 2**32 seconds', written)
                frame = record.raw_frame if record.raw_frame is not None else encode_frame(record.probe)
                packet = MINIMAL_RADIOTAP + frame
                (sec, usec) = split_timestamp(ts)
                written += sink.write(struct.pack('<' + PACKET_HEADER_FORMAT, sec, usec, len(packet), len(packet)))
                written += sink.write(packet)
        except CaptureWriteError:
            raise
        except OSError as e:
            raise CaptureWriteError(f'pcap write failed: {e}', written) from e
        return written
