"""
Keyed anonymization of the identifying fields of probe requests.

Everything the analysis relies on survives: MAC OUI and functional bits,
sequence numbers, timestamps, IE tags and order, and equality between
hashed values.
"""
import hashlib
import hmac
import logging
import secrets
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, List, Optional

from probetracker.core.capture.base import CaptureRecord
from probetracker.core.frames import TAG_SSID, InformationElement, MacAddress, ProbeRequest, WpsInfo
from probetracker.core.wps import (
    ATTR_DEVICE_NAME,
    ATTR_MANUFACTURER,
    ATTR_MODEL_NAME,
    ATTR_UUID_E,
    IDENTITY_ATTRIBUTES,
    build_payload,
    find_wps_element,
    is_wps_element,
    parse_attributes,
    wps_info_from_element,
)

logger = logging.getLogger(__name__)

SALT_LEN = 16
TOKEN_LEN = 12
MAX_IE_PAYLOAD = 255


@dataclass(frozen=True)
class AnonymizationKey:
    salt: bytes

    def __post_init__(self):
        if len(self.salt) != SALT_LEN:
            raise ValueError(f'salt must be {SALT_LEN} bytes, got {len(self.salt)}')

    @classmethod
    def from_hex(cls, text: str) -> 'AnonymizationKey':
        try:
            salt = bytes.fromhex(text)
        except ValueError as e:
            raise ValueError(f'salt is not valid hex: {text!r}') from e
        return cls(salt)

    @classmethod
    def random(cls) -> 'AnonymizationKey':
        return cls(secrets.token_bytes(SALT_LEN))

    def digest(self, domain: bytes, value: bytes) -> bytes:
        return hmac.new(self.salt, domain + b'\x00' + value, hashlib.sha512).digest()

    def token(self, domain: bytes, value: bytes) -> bytes:
        """Fixed-length printable token (hex text of the digest head)."""
        return self.digest(domain, value)[:TOKEN_LEN // 2].hex().encode('ascii')


def anonymize_mac(mac: MacAddress, key: AnonymizationKey) -> MacAddress:
    tail = key.digest(b'mac', mac.octets[3:])[:3]
    return MacAddress(mac.octets[:3] + tail)


def _anonymize_attribute(attr_type: int, value: bytes, key: AnonymizationKey) -> bytes:
    if attr_type == ATTR_UUID_E:
        # malformed lengths keep their length so re-decoding still rejects them
        return key.digest(b'uuid-e', value)[:16 if len(value) == 16 else min(len(value), 64)]
    if attr_type == ATTR_DEVICE_NAME:
        return key.token(b'wps-name', value)
    if attr_type == ATTR_MANUFACTURER:
        return key.token(b'wps-manufacturer', value)
    if attr_type == ATTR_MODEL_NAME:
        return key.token(b'wps-model', value)
    return value


def _anonymize_wps_element(element: InformationElement, key: AnonymizationKey) -> InformationElement:
    """
    Rewrite the identity attributes of a WPS element. Every other attribute
    is kept byte for byte, so the element's stable payload is unchanged.
    """
    (attributes, _) = parse_attributes(element.payload)
    rewritten = [(t, _anonymize_attribute(t, v, key)) for (t, v) in attributes]
    payload = build_payload(rewritten)
    if len(payload) > MAX_IE_PAYLOAD:
        # no token longer than the value it replaces: the element cannot outgrow the original
        logger.warning('WPS element too long after anonymization, shortening identity tokens')
        rewritten = [(t, new[:len(old)]) if t in IDENTITY_ATTRIBUTES else (t, new)
                     for ((t, old), (_, new)) in zip(attributes, rewritten)]
        payload = build_payload(rewritten)
    return InformationElement(element.tag_id, payload)


def _anonymize_wps_info(wps: Optional[WpsInfo], key: AnonymizationKey) -> Optional[WpsInfo]:
    if wps is None:
        return None

    def tok(domain, value):
        return key.token(domain, value) if value is not None else None

    return WpsInfo(
        uuid_e=key.digest(b'uuid-e', wps.uuid_e)[:16] if wps.uuid_e is not None else None,
        device_name=tok(b'wps-name', wps.device_name),
        manufacturer=tok(b'wps-manufacturer', wps.manufacturer),
        model=tok(b'wps-model', wps.model),
    )


def anonymize_probe(probe: ProbeRequest, key: AnonymizationKey) -> ProbeRequest:
    """
    Replace the identifying fields of a probe with keyed digests.

    Args:
        probe: probe request to anonymize
        key: run-scoped salt

    Returns:
        New ProbeRequest; timestamps, sequence numbers, IE tags and all
        non-identifying payloads are unchanged
    """
    ssid = key.token(b'ssid', probe.ssid) if probe.ssid is not None else None
    elements: List[InformationElement] = []
    for element in probe.elements:
        if element.tag_id == TAG_SSID and element.payload:
            element = InformationElement(TAG_SSID, key.token(b'ssid', element.payload))
        elif is_wps_element(element):
            element = _anonymize_wps_element(element, key)
        elements.append(element)
    wps_element = find_wps_element(elements)
    wps = wps_info_from_element(wps_element) if wps_element is not None else _anonymize_wps_info(probe.wps, key)
    return replace(probe, mac=anonymize_mac(probe.mac, key), ssid=ssid, elements=tuple(elements), wps=wps)


def anonymize_capture(records: Iterable[CaptureRecord], key: AnonymizationKey) -> Iterator[CaptureRecord]:
    """Anonymize a record stream lazily, preserving order and count."""
    for record in records:
        yield CaptureRecord(probe=anonymize_probe(record.probe, key))
