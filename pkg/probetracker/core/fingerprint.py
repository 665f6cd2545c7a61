"""
Device fingerprints over the device-stable information elements, and the
per-field occurrence statistics that go with them.
"""
import enum
import hashlib
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, List, Union

from probetracker.core.capture.base import CaptureRecord
from probetracker.core.frames import (
    TAG_EXT_CAPABILITIES,
    TAG_EXT_SUPPORTED_RATES,
    TAG_HT_CAPABILITIES,
    TAG_SUPPORTED_RATES,
    TAG_VENDOR_SPECIFIC,
    TAG_VHT_CAPABILITIES,
    ProbeRequest,
)
from probetracker.core.wps import is_wps_element, stable_payload

STABLE_TAGS = frozenset({TAG_SUPPORTED_RATES, TAG_EXT_SUPPORTED_RATES, TAG_HT_CAPABILITIES,
                         TAG_VHT_CAPABILITIES, TAG_EXT_CAPABILITIES, TAG_VENDOR_SPECIFIC})

MAX_VENDOR_BUCKET = 5


class FingerprintField(enum.IntFlag):
    NONE = 0
    SUPPORTED_RATES = 1
    EXT_RATES = 2
    HT_CAP = 4
    VHT_CAP = 8
    EXT_CAP = 16
    VENDOR_SPECIFIC = 32
    WPS = 64


_TAG_FIELDS = {
    TAG_SUPPORTED_RATES: FingerprintField.SUPPORTED_RATES,
    TAG_EXT_SUPPORTED_RATES: FingerprintField.EXT_RATES,
    TAG_HT_CAPABILITIES: FingerprintField.HT_CAP,
    TAG_VHT_CAPABILITIES: FingerprintField.VHT_CAP,
    TAG_EXT_CAPABILITIES: FingerprintField.EXT_CAP,
    TAG_VENDOR_SPECIFIC: FingerprintField.VENDOR_SPECIFIC,
}


@dataclass(frozen=True)
class Fingerprint:
    digest: bytes
    field_presence: FingerprintField = field(default=FingerprintField.NONE, compare=False)

    def hex(self) -> str:
        return self.digest.hex()

    def short(self) -> str:
        return self.digest[:6].hex()


def canonical_serialization(probe: ProbeRequest) -> bytes:
    """
    Concatenate tag, length and payload of every stable IE in on-air order.
    The WPS element is included without its identity attributes.
    """
    parts = []
    for element in probe.elements:
        if element.tag_id not in STABLE_TAGS:
            continue
        payload = stable_payload(element) if is_wps_element(element) else element.payload
        parts.append(bytes((element.tag_id, len(payload) & 0xFF)) + payload)
    return b''.join(parts)


def fingerprint(probe: ProbeRequest) -> Fingerprint:
    presence = FingerprintField.NONE
    for element in probe.elements:
        if element.tag_id in _TAG_FIELDS:
            presence |= _TAG_FIELDS[element.tag_id]
        if is_wps_element(element):
            presence |= FingerprintField.WPS
    return Fingerprint(hashlib.sha512(canonical_serialization(probe)).digest(), presence)


@dataclass(frozen=True)
class StatRow:
    field: str
    count: int
    percent: float

    def percent_text(self) -> str:
        return f'{self.percent:.2f}'


@dataclass
class IeCounter:
    """Associative fold of per-probe IE occurrence counts."""
    total: int = 0
    tags: Counter = field(default_factory=Counter)
    vendor_histogram: Counter = field(default_factory=Counter)
    uuid_e: int = 0

    def add(self, probe: ProbeRequest) -> None:
        self.total += 1
        present = {element.tag_id for element in probe.elements}
        for tag in STABLE_TAGS:
            if tag in present:
                self.tags[tag] += 1
        vendor_count = sum(1 for element in probe.elements if element.tag_id == TAG_VENDOR_SPECIFIC)
        if vendor_count:
            self.vendor_histogram[min(vendor_count, MAX_VENDOR_BUCKET)] += 1
        if probe.uuid_e is not None:
            self.uuid_e += 1

    def merge(self, other: 'IeCounter') -> 'IeCounter':
        return IeCounter(total=self.total + other.total, tags=self.tags + other.tags,
                         vendor_histogram=self.vendor_histogram + other.vendor_histogram,
                         uuid_e=self.uuid_e + other.uuid_e)

    def rows(self) -> List[StatRow]:
        def row(name, count):
            percent = round(count / self.total * 100, 2) if self.total else 0.0
            return StatRow(name, count, percent)

        rows = [
            row('Supported Rates', self.tags[TAG_SUPPORTED_RATES]),
            row('Extended Supported Rates', self.tags[TAG_EXT_SUPPORTED_RATES]),
            row('HT Capabilities', self.tags[TAG_HT_CAPABILITIES]),
            row('VHT Capabilities', self.tags[TAG_VHT_CAPABILITIES]),
            row('Extended Capabilities', self.tags[TAG_EXT_CAPABILITIES]),
            row('Vendor Specific Elements', self.tags[TAG_VENDOR_SPECIFIC]),
        ]
        for n in range(1, MAX_VENDOR_BUCKET + 1):
            if n == MAX_VENDOR_BUCKET:
                label = f'{n}+ Vendor Specific Elements'
            else:
                label = f"{n} Vendor Specific Element{'s' if n > 1 else ''}"
            rows.append(row(label, self.vendor_histogram[n]))
        rows.append(row('WPS - UUID-E', self.uuid_e))
        rows.append(StatRow('Total Collected Probe Requests', self.total, 100.0 if self.total else 0.0))
        return rows


def ie_statistics(items: Iterable[Union[CaptureRecord, ProbeRequest]]) -> List[StatRow]:
    """
    Table of how often each fingerprint field occurs.

    Args:
        items: capture records or bare probes

    Returns:
        Rows of (field, count, percent of all probes)
    """
    counter = IeCounter()
    for item in items:
        counter.add(item.probe if isinstance(item, CaptureRecord) else item)
    return counter.rows()
