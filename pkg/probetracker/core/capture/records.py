"""
Line-delimited JSON record format, one probe per line with hex-encoded bytes.
"""
import json
from typing import Any, BinaryIO, Dict, Iterable, Iterator, Optional

from probetracker.core.errors import CaptureFormatError, CaptureWriteError
from probetracker.core.frames import InformationElement, MacAddress, ProbeRequest, WpsInfo
from .base import CaptureFormat, CaptureRecord, ReadStats
from .decorator import register_format


def _hex(value: Optional[bytes]) -> Optional[str]:
    return value.hex() if value is not None else None


def _unhex(value: Optional[str]) -> Optional[bytes]:
    return bytes.fromhex(value) if value is not None else None


def probe_to_dict(probe: ProbeRequest) -> Dict[str, Any]:
    wps = None
    if probe.wps is not None:
        wps = {'uuid_e': _hex(probe.wps.uuid_e), 'name': _hex(probe.wps.device_name),
               'manufacturer': _hex(probe.wps.manufacturer), 'model': _hex(probe.wps.model)}
    data = {
        'ts': probe.timestamp,
        'mac': str(probe.mac),
        'sn': probe.sequence_number,
        'ssid': _hex(probe.ssid),
        'ies': [{'tag': ie.tag_id, 'payload': ie.payload.hex()} for ie in probe.elements],
        'wps': wps,
    }
    if probe.truncated:
        data['truncated'] = True
    return data


def _expect(data: Dict[str, Any], key: str, types, optional: bool = False):
    value = data.get(key) if optional else data[key]
    if value is None and optional:
        return None
    if isinstance(value, bool) or not isinstance(value, types):
        raise TypeError(f'field {key!r} has type {type(value).__name__}')
    return value


def probe_from_dict(data: Dict[str, Any]) -> ProbeRequest:
    """
    Rebuild a probe from its record form.

    Raises:
        TypeError: not an object, or a field of the wrong type
        KeyError, ValueError: missing field or bad hex
    """
    if not isinstance(data, dict):
        raise TypeError(f'expected a JSON object, got {type(data).__name__}')
    wps_data = _expect(data, 'wps', dict, optional=True)
    wps = None
    if wps_data is not None:
        wps = WpsInfo(uuid_e=_unhex(_expect(wps_data, 'uuid_e', str, optional=True)),
                      device_name=_unhex(_expect(wps_data, 'name', str, optional=True)),
                      manufacturer=_unhex(_expect(wps_data, 'manufacturer', str, optional=True)),
                      model=_unhex(_expect(wps_data, 'model', str, optional=True)))
    elements = []
    for ie in _expect(data, 'ies', list, optional=True) or []:
        if not isinstance(ie, dict):
            raise TypeError(f'element entry has type {type(ie).__name__}')
        elements.append(InformationElement(_expect(ie, 'tag', int), bytes.fromhex(_expect(ie, 'payload', str))))
    return ProbeRequest(
        timestamp=float(_expect(data, 'ts', (int, float))),
        mac=MacAddress.parse(_expect(data, 'mac', str)),
        sequence_number=_expect(data, 'sn', int),
        ssid=_unhex(_expect(data, 'ssid', str, optional=True)),
        elements=tuple(elements),
        wps=wps,
        truncated=bool(data.get('truncated', False)),
    )


def dumps_probe(probe: ProbeRequest) -> str:
    return json.dumps(probe_to_dict(probe), sort_keys=True, separators=(',', ':'))


@register_format(priority=20)
class RecordsFormat(CaptureFormat):
    format_name = 'records'

    def can_handle(self, head: bytes) -> bool:
        stripped = head.lstrip()
        return stripped == b'' or stripped.startswith(b'{')

    def read(self, stream: BinaryIO, stats: ReadStats, fcs_mode: str = 'auto') -> Iterator[CaptureRecord]:
        for (line_number, raw_line) in enumerate(stream, start=1):
            line = raw_line.strip()
            if not line:
                continue
            try:
                probe = probe_from_dict(json.loads(line))
            except (ValueError, KeyError, TypeError) as e:
                raise CaptureFormatError(f'line {line_number}: invalid probe record: {e}') from e
            if probe.truncated:
                stats.truncated += 1
            stats.probes += 1
            yield CaptureRecord(probe=probe)

    def write(self, records: Iterable[CaptureRecord], sink: BinaryIO) -> int:
        written = 0
        try:
            for record in records:
                written += sink.write((dumps_probe(record.probe) + '\n').encode('utf-8'))
        except OSError as e:
            raise CaptureWriteError(f'record write failed: {e}', written) from e
        return written
