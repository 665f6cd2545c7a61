"""
802.11 probe request codec.

Decoding starts at the MAC header; radiotap headers are skipped by their
declared length. Encoding produces the canonical layout the generator and
the pcap writer use: broadcast receiver/BSSID, zero duration and fragment.
"""
import struct
from typing import List, Optional, Tuple

from probetracker.core.errors import FrameDecodeError
from probetracker.core.frames import TAG_SSID, InformationElement, MacAddress, ProbeRequest
from probetracker.core.wps import find_wps_element, wps_info_from_element

MGMT_HEADER_LEN = 24
HT_CONTROL_LEN = 4
FCS_LEN = 4

TYPE_MANAGEMENT = 0
SUBTYPE_PROBE_REQUEST = 4
FLAG_ORDER = 0x80

BROADCAST = b'\xff' * 6

RADIOTAP_TSFT = 0x01
RADIOTAP_FLAGS = 0x02
RADIOTAP_EXT = 0x80000000
RADIOTAP_FLAG_FCS = 0x10

# version 0, pad 0, length 8, no fields present
MINIMAL_RADIOTAP = struct.pack('<BBHI', 0, 0, 8, 0)

FCS_MODES = ('auto', 'present', 'absent')


def frame_kind(frame: bytes) -> Tuple[int, int]:
    if len(frame) < 2:
        raise FrameDecodeError(f'frame too short for a frame control field ({len(frame)} bytes)')
    return (frame[0] >> 2) & 0x03, (frame[0] >> 4) & 0x0F


def is_probe_request(frame: bytes) -> bool:
    return frame_kind(frame) == (TYPE_MANAGEMENT, SUBTYPE_PROBE_REQUEST)


def split_radiotap(packet: bytes) -> Tuple[bytes, Optional[bool]]:
    """
    Strip a radiotap header.

    Args:
        packet: radiotap header followed by the 802.11 frame

    Returns:
        (frame, fcs) where fcs is the radiotap FCS flag, or None when the
        header carries no flags field
    """
    if len(packet) < 8:
        raise FrameDecodeError(f'packet too short for a radiotap header ({len(packet)} bytes)')
    (version, _, length) = struct.unpack_from('<BBH', packet, 0)
    if version != 0:
        raise FrameDecodeError(f'unsupported radiotap version {version}')
    if length < 8 or length > len(packet):
        raise FrameDecodeError(f'radiotap length {length} outside packet of {len(packet)} bytes')
    return packet[length:], _radiotap_fcs(packet[:length])


def _radiotap_fcs(header: bytes) -> Optional[bool]:
    offset = 4
    (present,) = struct.unpack_from('<I', header, offset)
    word = present
    while word & RADIOTAP_EXT:
        offset += 4
        if offset + 4 > len(header):
            return None
        (word,) = struct.unpack_from('<I', header, offset)
    offset += 4
    if not present & RADIOTAP_FLAGS:
        return None
    if present & RADIOTAP_TSFT:
        offset = (offset + 7) & ~7
        offset += 8
    if offset >= len(header):
        return None
    return bool(header[offset] & RADIOTAP_FLAG_FCS)


def strip_fcs(frame: bytes, fcs_mode: str, radiotap_fcs: Optional[bool]) -> bytes:
    if fcs_mode == 'present' or (fcs_mode == 'auto' and radiotap_fcs):
        if len(frame) < MGMT_HEADER_LEN + FCS_LEN:
            raise FrameDecodeError('frame too short to carry an FCS')
        return frame[:-FCS_LEN]
    return frame


def parse_elements(body: bytes) -> Tuple[List[InformationElement], bool]:
    """
    Parse a tagged-parameter list.

    Returns:
        (elements, truncated); on overrun the list stops at the last
        complete element
    """
    elements = []
    offset = 0
    while offset < len(body):
        if offset + 2 > len(body):
            return elements, True
        (tag, length) = (body[offset], body[offset + 1])
        end = offset + 2 + length
        if end > len(body):
            return elements, True
        elements.append(InformationElement(tag, body[offset + 2:end]))
        offset = end
    return elements, False


def decode_frame(frame: bytes, ts: float) -> ProbeRequest:
    """
    Decode a probe request starting at the 802.11 MAC header.

    Args:
        frame: frame bytes, radiotap and FCS already removed
        ts: capture timestamp in seconds

    Returns:
        ProbeRequest
    """
    if len(frame) < MGMT_HEADER_LEN:
        raise FrameDecodeError(f'frame shorter than a management header ({len(frame)} bytes)')
    if not is_probe_request(frame):
        (ftype, subtype) = frame_kind(frame)
        raise FrameDecodeError(f'not a probe request (type {ftype}, subtype {subtype})')
    header_len = MGMT_HEADER_LEN
    if frame[1] & FLAG_ORDER:
        header_len += HT_CONTROL_LEN
        if len(frame) < header_len:
            raise FrameDecodeError('frame too short for its HT control field')
    mac = MacAddress(frame[10:16])
    (seq_ctrl,) = struct.unpack_from('<H', frame, 22)
    (elements, truncated) = parse_elements(frame[header_len:])
    ssid = None
    for element in elements:
        if element.tag_id == TAG_SSID:
            ssid = element.payload or None
            break
    wps_element = find_wps_element(elements)
    wps = wps_info_from_element(wps_element) if wps_element is not None else None
    return ProbeRequest(timestamp=ts, mac=mac, sequence_number=seq_ctrl >> 4, ssid=ssid,
                        elements=tuple(elements), wps=wps, truncated=truncated)


def encode_frame(probe: ProbeRequest) -> bytes:
    """Canonical 802.11 probe request bytes (no radiotap, no FCS)."""
    frame_control = struct.pack('<BB', SUBTYPE_PROBE_REQUEST << 4 | TYPE_MANAGEMENT << 2, 0)
    header = (frame_control + struct.pack('<H', 0) + BROADCAST + probe.mac.octets + BROADCAST
              + struct.pack('<H', probe.sequence_number << 4))
    return header + b''.join(element.to_bytes() for element in probe.elements)
