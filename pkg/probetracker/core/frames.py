"""
Domain types for decoded 802.11 probe requests and MAC address classification.
"""
import enum
from dataclasses import dataclass, field
from typing import Optional, Tuple

TAG_SSID = 0
TAG_SUPPORTED_RATES = 1
TAG_HT_CAPABILITIES = 45
TAG_EXT_SUPPORTED_RATES = 50
TAG_EXT_CAPABILITIES = 127
TAG_VHT_CAPABILITIES = 191
TAG_VENDOR_SPECIFIC = 221

SEQUENCE_MODULUS = 4096

LOCALLY_ADMINISTERED_BIT = 0x02
MULTICAST_BIT = 0x01


class MacClass(str, enum.Enum):
    GLOBAL = 'global'
    RANDOMIZED = 'randomized'
    GROUP = 'group'


@dataclass(frozen=True, order=True)
class MacAddress:
    octets: bytes

    def __post_init__(self):
        if not isinstance(self.octets, (bytes, bytearray)) or len(self.octets) != 6:
            raise ValueError(f'MAC address needs exactly 6 octets, got {self.octets!r}')
        object.__setattr__(self, 'octets', bytes(self.octets))

    @classmethod
    def parse(cls, text: str) -> 'MacAddress':
        """
        Parse a MAC address written as colon, dash or bare hex.

        Args:
            text: e.g. "da:a1:19:00:00:01"

        Returns:
            MacAddress
        """
        if not isinstance(text, str):
            raise TypeError(f'MAC address must be text, got {type(text).__name__}')
        digits = text.strip().replace(':', '').replace('-', '')
        if len(digits) != 12:
            raise ValueError(f'Invalid MAC address: {text!r}')
        try:
            return cls(bytes.fromhex(digits))
        except ValueError as e:
            raise ValueError(f'Invalid MAC address: {text!r}') from e

    @property
    def oui(self) -> bytes:
        return self.octets[:3]

    def __str__(self) -> str:
        return ':'.join(f'{b:02x}' for b in self.octets)


def is_locally_administered(mac: MacAddress) -> bool:
    return bool(mac.octets[0] & LOCALLY_ADMINISTERED_BIT)


def is_multicast(mac: MacAddress) -> bool:
    return bool(mac.octets[0] & MULTICAST_BIT)


def classify_mac(mac: MacAddress) -> MacClass:
    """
    Classify a source address by its functional bits.

    Group addresses win over the locally-administered flag; for unicast
    addresses the class is Randomized exactly when the second hex digit
    is 2, 6, A or E.
    """
    if is_multicast(mac):
        return MacClass.GROUP
    if is_locally_administered(mac):
        return MacClass.RANDOMIZED
    return MacClass.GLOBAL


@dataclass(frozen=True)
class InformationElement:
    tag_id: int
    payload: bytes = b''

    def __post_init__(self):
        if not 0 <= self.tag_id <= 255:
            raise ValueError(f'IE tag out of range: {self.tag_id}')
        if len(self.payload) > 255:
            raise ValueError(f'IE payload too long for tag {self.tag_id}: {len(self.payload)} bytes')
        object.__setattr__(self, 'payload', bytes(self.payload))

    def to_bytes(self) -> bytes:
        return bytes((self.tag_id, len(self.payload))) + self.payload


@dataclass(frozen=True)
class WpsInfo:
    uuid_e: Optional[bytes] = None
    device_name: Optional[bytes] = None
    manufacturer: Optional[bytes] = None
    model: Optional[bytes] = None

    def __post_init__(self):
        if self.uuid_e is not None and len(self.uuid_e) != 16:
            raise ValueError(f'UUID-E must be 16 bytes, got {len(self.uuid_e)}')


@dataclass(frozen=True)
class ProbeRequest:
    timestamp: float
    mac: MacAddress
    sequence_number: int
    ssid: Optional[bytes] = None
    elements: Tuple[InformationElement, ...] = ()
    wps: Optional[WpsInfo] = None
    truncated: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not 0 <= self.sequence_number < SEQUENCE_MODULUS:
            raise ValueError(f'Sequence number out of 12-bit range: {self.sequence_number}')
        object.__setattr__(self, 'elements', tuple(self.elements))

    @property
    def has_wps(self) -> bool:
        return self.wps is not None

    @property
    def uuid_e(self) -> Optional[bytes]:
        return self.wps.uuid_e if self.wps else None

    @property
    def is_wildcard(self) -> bool:
        return self.ssid is None

    @property
    def mac_class(self) -> MacClass:
        return classify_mac(self.mac)

    def ssid_text(self) -> str:
        """Lossy rendering of the SSID for display."""
        if self.ssid is None:
            return '<wildcard>'
        return self.ssid.decode('utf-8', errors='replace')
