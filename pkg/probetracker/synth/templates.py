"""
Information-element templates for synthetic devices.

A template is derived deterministically from a model name, so devices of
the same model share a fingerprint. Individual fields can be pinned with
explicit hex payloads.
"""
import hashlib
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from probetracker.core.frames import (
    TAG_EXT_CAPABILITIES,
    TAG_EXT_SUPPORTED_RATES,
    TAG_HT_CAPABILITIES,
    TAG_SSID,
    TAG_SUPPORTED_RATES,
    TAG_VENDOR_SPECIFIC,
    TAG_VHT_CAPABILITIES,
    InformationElement,
    WpsInfo,
)
from probetracker.core.wps import (
    ATTR_CONFIG_METHODS,
    ATTR_DEVICE_NAME,
    ATTR_MANUFACTURER,
    ATTR_MODEL_NAME,
    ATTR_PRIMARY_DEVICE_TYPE,
    ATTR_REQUEST_TYPE,
    ATTR_RF_BANDS,
    ATTR_UUID_E,
    ATTR_VERSION,
    WPS_OUI,
    build_payload,
)

MAX_VENDOR_ELEMENTS = 5

RATE_CODES = (0x82, 0x84, 0x8b, 0x96, 0x0c, 0x12, 0x18, 0x24)
EXT_RATE_CODES = (0x30, 0x48, 0x60, 0x6c)

# Broadcom, Apple, Wi-Fi Alliance, Epigram, Qualcomm, Intel
VENDOR_OUIS = (b'\x00\x10\x18', b'\x00\x17\xf2', b'\x50\x6f\x9a', b'\x00\x90\x4c', b'\x8c\xfd\xf0',
               b'\x00\x1b\x77')


def model_rng(model: str) -> np.random.Generator:
    seed = int.from_bytes(hashlib.sha256(model.encode('utf-8')).digest()[:8], 'big')
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class IeTemplate:
    model: str
    rates: bytes
    ext_rates: Optional[bytes] = None
    ht_cap: Optional[bytes] = None
    vht_cap: Optional[bytes] = None
    ext_cap: Optional[bytes] = None
    vendor_elements: Tuple[bytes, ...] = ()

    def elements(self) -> Tuple[InformationElement, ...]:
        """Stable elements in on-air order, without SSID and WPS."""
        elements = [InformationElement(TAG_SUPPORTED_RATES, self.rates)]
        if self.ext_rates is not None:
            elements.append(InformationElement(TAG_EXT_SUPPORTED_RATES, self.ext_rates))
        if self.ht_cap is not None:
            elements.append(InformationElement(TAG_HT_CAPABILITIES, self.ht_cap))
        if self.ext_cap is not None:
            elements.append(InformationElement(TAG_EXT_CAPABILITIES, self.ext_cap))
        if self.vht_cap is not None:
            elements.append(InformationElement(TAG_VHT_CAPABILITIES, self.vht_cap))
        elements.extend(InformationElement(TAG_VENDOR_SPECIFIC, payload) for payload in self.vendor_elements)
        return tuple(elements)


def _field(pinned, derived: bytes) -> Optional[bytes]:
    if pinned is True:
        return derived
    if pinned is None or pinned is False:
        return None
    return bytes(pinned)


def template_for_model(model: str, rates=True, ext_rates=True, ht_cap=True, vht_cap=False, ext_cap=True,
                       vendor_elements: int = 1) -> IeTemplate:
    """
    Build the IE template of a device model.

    Each field is True (derive from the model), False/None (absent) or
    bytes (explicit payload). Supported rates are always present.

    Args:
        model: model name seeding the derived payloads
        vendor_elements: number of non-WPS vendor-specific elements, 0 to 5

    Returns:
        IeTemplate
    """
    if not 0 <= vendor_elements <= MAX_VENDOR_ELEMENTS:
        raise ValueError(f'vendor_elements must be 0..{MAX_VENDOR_ELEMENTS}, got {vendor_elements}')
    rng = model_rng(model)
    rate_count = int(rng.integers(4, len(RATE_CODES) + 1))
    derived_rates = bytes(RATE_CODES[:rate_count])
    derived_ext = bytes(EXT_RATE_CODES)
    derived_ht = rng.bytes(26)
    derived_vht = rng.bytes(12)
    derived_ext_cap = rng.bytes(int(rng.integers(3, 11)))
    vendors = []
    for _ in range(vendor_elements):
        oui = VENDOR_OUIS[int(rng.integers(0, len(VENDOR_OUIS)))]
        vendors.append(oui + bytes((int(rng.integers(1, 32)),)) + rng.bytes(int(rng.integers(2, 9))))
    return IeTemplate(
        model=model,
        rates=_field(True if rates is None else rates, derived_rates),
        ext_rates=_field(ext_rates, derived_ext),
        ht_cap=_field(ht_cap, derived_ht),
        vht_cap=_field(vht_cap, derived_vht),
        ext_cap=_field(ext_cap, derived_ext_cap),
        vendor_elements=tuple(vendors),
    )


def ssid_element(ssid: Optional[bytes]) -> InformationElement:
    """SSID element; a wildcard probe carries it with an empty payload."""
    return InformationElement(TAG_SSID, ssid or b'')


def wps_element(wps: WpsInfo) -> InformationElement:
    """WPS probe-request element carrying the identity attributes that are set."""
    attributes = [
        (ATTR_VERSION, b'\x10'),
        (ATTR_REQUEST_TYPE, b'\x00'),
        (ATTR_CONFIG_METHODS, b'\x43\x88'),
    ]
    if wps.uuid_e is not None:
        attributes.append((ATTR_UUID_E, wps.uuid_e))
    attributes.append((ATTR_PRIMARY_DEVICE_TYPE, b'\x00\x0a' + WPS_OUI + b'\x00\x00\x05'))
    attributes.append((ATTR_RF_BANDS, b'\x03'))
    for (attr_type, value) in ((ATTR_MANUFACTURER, wps.manufacturer), (ATTR_MODEL_NAME, wps.model),
                               (ATTR_DEVICE_NAME, wps.device_name)):
        if value is not None:
            attributes.append((attr_type, value))
    return InformationElement(TAG_VENDOR_SPECIFIC, build_payload(attributes))
