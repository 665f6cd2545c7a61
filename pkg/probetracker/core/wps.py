"""
WPS (Wi-Fi Simple Configuration) vendor element helpers.

The WPS element is a vendor-specific IE (tag 221) whose payload starts with
the Microsoft OUI 00:50:F2 and OUI type 4, followed by big-endian
type/length/value attributes.
"""
import struct
from typing import Dict, List, Optional, Tuple

from probetracker.core.frames import TAG_VENDOR_SPECIFIC, InformationElement, WpsInfo

WPS_OUI = b'\x00\x50\xf2'
WPS_OUI_TYPE = 4
WPS_PREFIX = WPS_OUI + bytes((WPS_OUI_TYPE,))

ATTR_VERSION = 0x104A
ATTR_REQUEST_TYPE = 0x103A
ATTR_CONFIG_METHODS = 0x1008
ATTR_UUID_E = 0x1047
ATTR_PRIMARY_DEVICE_TYPE = 0x1054
ATTR_RF_BANDS = 0x103C
ATTR_DEVICE_NAME = 0x1011
ATTR_MANUFACTURER = 0x1021
ATTR_MODEL_NAME = 0x1023

IDENTITY_ATTRIBUTES = frozenset({ATTR_UUID_E, ATTR_DEVICE_NAME, ATTR_MANUFACTURER, ATTR_MODEL_NAME})

Attribute = Tuple[int, bytes]


def is_wps_element(element: InformationElement) -> bool:
    return element.tag_id == TAG_VENDOR_SPECIFIC and element.payload[:4] == WPS_PREFIX


def find_wps_element(elements) -> Optional[InformationElement]:
    for element in elements:
        if is_wps_element(element):
            return element
    return None


def parse_attributes(payload: bytes) -> Tuple[List[Attribute], bool]:
    """
    Split a WPS element payload into attributes.

    Args:
        payload: vendor element payload including the OUI prefix

    Returns:
        (attributes, complete) where complete is False when the last
        attribute overran the payload and was dropped
    """
    attributes: List[Attribute] = []
    offset = len(WPS_PREFIX)
    while offset + 4 <= len(payload):
        (attr_type, length) = struct.unpack_from('>HH', payload, offset)
        offset += 4
        if offset + length > len(payload):
            return attributes, False
        attributes.append((attr_type, payload[offset:offset + length]))
        offset += length
    return attributes, offset == len(payload)


def build_payload(attributes: List[Attribute]) -> bytes:
    body = b''.join(struct.pack('>HH', t, len(v)) + v for (t, v) in attributes)
    return WPS_PREFIX + body


def wps_info_from_element(element: InformationElement) -> WpsInfo:
    (attributes, _) = parse_attributes(element.payload)
    values: Dict[int, bytes] = {}
    for (attr_type, value) in attributes:
        values.setdefault(attr_type, value)
    uuid_e = values.get(ATTR_UUID_E)
    if uuid_e is not None and len(uuid_e) != 16:
        uuid_e = None
    return WpsInfo(uuid_e=uuid_e,
                   device_name=values.get(ATTR_DEVICE_NAME),
                   manufacturer=values.get(ATTR_MANUFACTURER),
                   model=values.get(ATTR_MODEL_NAME))


def stable_payload(element: InformationElement) -> bytes:
    """WPS payload with the per-device identity attributes removed."""
    (attributes, _) = parse_attributes(element.payload)
    return build_payload([(t, v) for (t, v) in attributes if t not in IDENTITY_ATTRIBUTES])
