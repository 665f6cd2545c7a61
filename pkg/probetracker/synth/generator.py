"""
Ground-truth-labelled synthetic probe-request captures.
"""
import json
import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np

from probetracker.core.capture.base import CaptureRecord
from probetracker.core.capture.pcap import timestamp_from_micros
from probetracker.core.frames import SEQUENCE_MODULUS, MacAddress, ProbeRequest
from .profiles import RANDOMIZATION_POLICIES, DeviceProfile, Scenario, as_scenario, scenario_from_dict
from .templates import ssid_element, wps_element

logger = logging.getLogger(__name__)

US = 1_000_000
FAST_GAP_LIMIT_US = 65_000
MIN_GAP_US = 1_000
SLOW_GAP_MAX_US = 2_000_000
GAP_MEDIAN_MS = 12.0
GAP_SIGMA = 0.6
SN_JUMP = (5, 200)


@dataclass
class GroundTruth:
    """
    True labels of every generated probe, in capture order.

    expected_instances counts one instance per scan, or one per probe for
    per-probe randomization. It matches scan-instance grouping as long as
    WPS devices that keep their MAC across scans scan less often than the
    instance gap.
    """
    device_ids: List[int] = field(default_factory=list)
    session_ids: List[int] = field(default_factory=list)
    scan_ids: List[int] = field(default_factory=list)
    device_names: List[str] = field(default_factory=list)
    expected_instances: int = 0
    expected_devices: int = 0

    def __len__(self) -> int:
        return len(self.device_ids)

    def to_lines(self) -> Iterable[str]:
        for (device, session, scan) in zip(self.device_ids, self.session_ids, self.scan_ids):
            yield json.dumps({'device': device, 'name': self.device_names[device], 'session': session,
                              'scan': scan}, sort_keys=True, separators=(',', ':'))

    def write(self, stream: TextIO) -> None:
        for line in self.to_lines():
            stream.write(line + '\n')

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> 'GroundTruth':
        truth = cls()
        names = {}
        for line in lines:
            line = line.strip()
            if not line:
                continue
            data = json.loads(line)
            truth.device_ids.append(int(data['device']))
            truth.session_ids.append(int(data['session']))
            truth.scan_ids.append(int(data['scan']))
            names[int(data['device'])] = str(data.get('name', data['device']))
        truth.device_names = [names.get(i, str(i)) for i in range(max(names, default=-1) + 1)]
        truth.expected_devices = len(names)
        return truth


def random_mac(rng: np.random.Generator) -> MacAddress:
    """Unicast address with the locally-administered bit set."""
    octets = bytearray(rng.bytes(6))
    octets[0] = (octets[0] & 0xFC) | 0x02
    return MacAddress(bytes(octets))


def global_mac(rng: np.random.Generator) -> MacAddress:
    octets = bytearray(rng.bytes(6))
    octets[0] &= 0xFC
    return MacAddress(bytes(octets))


def burst_gap_us(rng: np.random.Generator, fast_fraction: float) -> int:
    """
    Gap before the next probe of a burst: a lognormal body kept under 65 ms
    with probability fast_fraction, otherwise uniform between 65 ms and 2 s.
    """
    if rng.random() < fast_fraction:
        gap_ms = rng.lognormal(np.log(GAP_MEDIAN_MS), GAP_SIGMA)
        return int(np.clip(round(gap_ms * 1000), MIN_GAP_US, FAST_GAP_LIMIT_US - 100))
    return int(rng.integers(FAST_GAP_LIMIT_US, SLOW_GAP_MAX_US + 1))


class _DeviceStream:
    """Probes of one device, generated session by session."""

    def __init__(self, index: int, profile: DeviceProfile, rng: np.random.Generator, start_us: int):
        self.index = index
        self.profile = profile
        self.rng = rng
        self.start_us = start_us
        self.stable_elements = profile.ie.elements()
        self.wps_elements = (wps_element(profile.wps),) if profile.wps is not None else ()
        self.chunks = profile.pnl_chunks()
        self.sn = profile.sn_start if profile.sn_start is not None else int(rng.integers(0, SEQUENCE_MODULUS))
        self.fixed_mac = profile.mac or global_mac(rng)
        self.scan_counter = 0
        self.expected_instances = 0

    def _ssid(self, k: int) -> Optional[bytes]:
        policy = self.profile.pnl_policy
        if policy == 'full':
            return self.profile.pnl[k % len(self.profile.pnl)]
        if policy == 'rotating-subset':
            chunk = self.chunks[self.scan_counter % len(self.chunks)]
            return chunk[k % len(chunk)]
        return None

    def _probe(self, ts_us: int, mac: MacAddress, ssid: Optional[bytes]) -> ProbeRequest:
        elements = (ssid_element(ssid),) + self.stable_elements + self.wps_elements
        return ProbeRequest(timestamp=timestamp_from_micros(ts_us), mac=mac, sequence_number=self.sn, ssid=ssid,
                            elements=elements, wps=self.profile.wps)

    def generate(self) -> List[Tuple[int, int, int, int, int, ProbeRequest]]:
        profile = self.profile
        period_us = int(round(profile.scan_period_s * US))
        out = []
        previous_end = None
        for (session_id, (session_start, session_end)) in enumerate(profile.sessions):
            session_start_us = self.start_us + int(round(session_start * US))
            session_end_us = self.start_us + int(round(session_end * US))
            session_mac = random_mac(self.rng) if profile.randomization == 'per-session' else None
            nominal = session_start_us
            while nominal < session_end_us:
                t = nominal if previous_end is None else max(nominal, previous_end + MIN_GAP_US)
                if t >= session_end_us:
                    break
                scan_mac = random_mac(self.rng) if profile.randomization == 'per-scan' else None
                emitted = 0
                for k in range(profile.burst_size):
                    if k:
                        t += burst_gap_us(self.rng, profile.burst_fast_fraction)
                        self.sn = (self.sn + 1) % SEQUENCE_MODULUS
                    if profile.drop_probability and self.rng.random() < profile.drop_probability:
                        continue
                    if profile.randomization == 'none':
                        mac = self.fixed_mac
                    elif profile.randomization == 'per-session':
                        mac = session_mac
                    elif profile.randomization == 'per-scan':
                        mac = scan_mac
                    else:
                        mac = random_mac(self.rng)
                    probe = self._probe(t, mac, self._ssid(k))
                    out.append((t, self.index, self.scan_counter, k, session_id, probe))
                    emitted += 1
                if profile.randomization == 'per-probe':
                    self.expected_instances += emitted
                elif emitted:
                    self.expected_instances += 1
                previous_end = t
                self.scan_counter += 1
                self.sn = (self.sn + int(self.rng.integers(SN_JUMP[0], SN_JUMP[1] + 1))) % SEQUENCE_MODULUS
                nominal += period_us
        return out


def generate(scenario: Union[Scenario, Sequence[DeviceProfile]],
             seed: Optional[int] = None) -> Tuple[List[CaptureRecord], GroundTruth]:
    """
    Generate a labelled capture.

    Every device scans every scan_period_s during each session. A scan is a
    burst of burst_size probes with consecutive sequence numbers; the
    counter jumps by 5 to 200 between scans. Device streams are merged in
    timestamp order, ties broken by device, scan and position in the burst.

    Args:
        scenario: Scenario or plain list of profiles
        seed: overrides the scenario seed

    Returns:
        (records, ground truth), deterministic for a given seed
    """
    scenario = as_scenario(scenario, seed)
    start_us = int(round(scenario.start_ts * US))
    events = []
    streams = []
    for (index, profile) in enumerate(scenario.devices):
        if profile.randomization not in RANDOMIZATION_POLICIES:
            raise ValueError(f'unknown randomization policy {profile.randomization!r} for {profile.id}')
        stream = _DeviceStream(index, profile, np.random.default_rng([scenario.seed, index]), start_us)
        events.extend(stream.generate())
        streams.append(stream)
    events.sort(key=lambda e: e[:4])

    truth = GroundTruth(device_names=[profile.id for profile in scenario.devices])
    records = []
    for (_, device, scan, _, session, probe) in events:
        records.append(CaptureRecord(probe=probe))
        truth.device_ids.append(device)
        truth.session_ids.append(session)
        truth.scan_ids.append(scan)
    truth.expected_instances = sum(stream.expected_instances for stream in streams)
    truth.expected_devices = len({device for device in truth.device_ids})
    logger.debug('Generated %d probes from %d devices', len(records), len(scenario.devices))
    return (records, truth)


MODEL_POOL = ('model-a', 'model-b', 'model-c', 'model-d', 'model-e')
SHARED_SSID = 'CorpWiFi'


def random_scenario(seed: int, n_devices: int = 5) -> Scenario:
    """
    A valid random scenario mixing every randomization and PNL policy,
    WPS presence, shared models and multi-session schedules.
    """
    rng = np.random.default_rng(seed)
    devices = []
    for d in range(n_devices):
        randomization = str(rng.choice(RANDOMIZATION_POLICIES, p=[0.25, 0.25, 0.35, 0.15]))
        pnl = [f'net-{seed}-{d}-{i}' for i in range(int(rng.integers(0, 5)))]
        if pnl and rng.random() < 0.2:
            pnl[0] = SHARED_SSID
        if pnl:
            pnl_policy = str(rng.choice(['full', 'rotating-subset', 'wildcard-only'], p=[0.5, 0.3, 0.2]))
        else:
            pnl_policy = 'wildcard-only'
        subset = int(rng.integers(1, len(pnl) + 1)) if pnl else 1
        burst = int(rng.integers(1, 6))
        if pnl_policy == 'full':
            burst = max(burst, len(pnl))
        elif pnl_policy == 'rotating-subset':
            burst = max(burst, subset)

        sessions = []
        t = float(rng.integers(0, 600))
        for _ in range(int(rng.integers(1, 4))):
            length = float(rng.integers(300, 1501))
            sessions.append([t, t + length])
            t += length + float(rng.integers(700, 5001))

        wps = None
        if rng.random() < 0.25:
            wps = {'uuid_e': rng.bytes(16).hex(), 'name': f'device-{d}', 'manufacturer': 'Acme',
                   'model': str(rng.choice(MODEL_POOL))}
        devices.append({
            'id': f'dev-{d}',
            'randomization': randomization,
            'scan_period_s': float(rng.integers(30, 121)),
            'burst_size': burst,
            'sessions': sessions,
            'pnl': pnl,
            'pnl_policy': pnl_policy,
            'pnl_subset_size': subset,
            'ie': {'model': str(rng.choice(MODEL_POOL)), 'vendor_elements': int(rng.integers(0, 6)),
                   'vht_cap': bool(rng.random() < 0.5)},
            'wps': wps,
        })
    return scenario_from_dict({'seed': seed, 'devices': devices})


def write_truth(truth: GroundTruth, path: str) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        truth.write(f)


def read_truth(path: str) -> GroundTruth:
    with open(path, 'r', encoding='utf-8') as f:
        return GroundTruth.from_lines(f)
