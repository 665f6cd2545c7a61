"""
Builders shared by the assertion tests.
"""
import io
from typing import Any, Dict, Iterable, List, Optional, Sequence

from probetracker.core.capture import CaptureRecord, write_capture
from probetracker.core.frames import TAG_SSID, InformationElement, MacAddress, ProbeRequest, WpsInfo
from probetracker.synth import Scenario, scenario_from_dict
from probetracker.synth.templates import template_for_model, wps_element

DEFAULT_MAC = 'da:a1:19:00:00:01'


def device(device_id: str, randomization: str = 'per-scan', sessions=((0, 600),), period: float = 60.0,
           burst: int = 3, pnl: Sequence[str] = (), pnl_policy: Optional[str] = None, **extra) -> Dict[str, Any]:
    data = {
        'id': device_id,
        'randomization': randomization,
        'scan_period_s': period,
        'burst_size': burst,
        'sessions': [list(s) for s in sessions],
        'pnl': list(pnl),
        'ie': {'model': f'model-{device_id}'},
    }
    if pnl_policy is not None:
        data['pnl_policy'] = pnl_policy
    data.update(extra)
    return data


def scenario(devices: List[Dict[str, Any]], seed: int = 0) -> Scenario:
    return scenario_from_dict({'seed': seed, 'devices': devices})


def probe(mac: str = DEFAULT_MAC, sn: int = 0, ts: float = 0.0, ssid: Optional[bytes] = None,
          model: str = 'model-a', wps: Optional[WpsInfo] = None) -> ProbeRequest:
    elements = (InformationElement(TAG_SSID, ssid or b''),) + template_for_model(model).elements()
    if wps is not None:
        elements += (wps_element(wps),)
    return ProbeRequest(timestamp=ts, mac=MacAddress.parse(mac), sequence_number=sn, ssid=ssid,
                        elements=elements, wps=wps)


def capture_bytes(records: Iterable[CaptureRecord], fmt: str = 'records') -> bytes:
    sink = io.BytesIO()
    write_capture(list(records), sink, fmt)
    return sink.getvalue()


def partition(groups: Iterable[Iterable[int]]) -> frozenset:
    """Order-free form of a partition, for comparing clusterings."""
    return frozenset(frozenset(group) for group in groups)
