from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from probetracker.core.capture.base import CaptureRecord, ReadStats
from probetracker.core.fingerprint import Fingerprint, fingerprint
from probetracker.core.frames import MacAddress, MacClass, ProbeRequest, classify_mac
from probetracker.core.settings import AnalysisSettings


@dataclass(frozen=True)
class ScanInstance:
    id: int
    probes: Tuple[ProbeRequest, ...]
    probe_indices: Tuple[int, ...]
    mac: MacAddress
    first_ts: float
    last_ts: float
    ssids: FrozenSet[bytes]
    fingerprint: Fingerprint
    uuid_e: Optional[bytes] = None

    @classmethod
    def from_probes(cls, instance_id: int, probes: Sequence[ProbeRequest], probe_indices: Sequence[int],
                    first_fingerprint: Optional[Fingerprint] = None) -> 'ScanInstance':
        """
        Build an instance from its time-ordered member probes.

        Args:
            instance_id: index of the instance in the capture
            probes: member probes, all sharing one MAC
            probe_indices: positions of the probes in the input stream
            first_fingerprint: fingerprint of probes[0] if already computed

        Returns:
            ScanInstance
        """
        if not probes:
            raise ValueError('a scan instance needs at least one probe')
        uuid_e = next((p.uuid_e for p in probes if p.uuid_e is not None), None)
        return cls(
            id=instance_id,
            probes=tuple(probes),
            probe_indices=tuple(probe_indices),
            mac=probes[0].mac,
            first_ts=min(p.timestamp for p in probes),
            last_ts=max(p.timestamp for p in probes),
            ssids=frozenset(p.ssid for p in probes if p.ssid is not None),
            fingerprint=first_fingerprint or fingerprint(probes[0]),
            uuid_e=uuid_e,
        )

    @property
    def has_uuid_e(self) -> bool:
        return self.uuid_e is not None

    @property
    def mac_class(self) -> MacClass:
        return classify_mac(self.mac)

    def __len__(self) -> int:
        return len(self.probes)


@dataclass(frozen=True)
class DeviceCluster:
    """
    Scan instances attributed to one device. Identity evidence is derived
    from the members so it always equals the union over them.
    """
    id: int
    instances: Tuple[ScanInstance, ...]
    merged_from: Tuple[int, ...] = ()

    def __post_init__(self):
        if not self.instances:
            raise ValueError('a device cluster needs at least one instance')

    @property
    def instance_ids(self) -> List[int]:
        return sorted(instance.id for instance in self.instances)

    @property
    def macs(self) -> FrozenSet[MacAddress]:
        return frozenset(instance.mac for instance in self.instances)

    @property
    def ssid_union(self) -> FrozenSet[bytes]:
        return frozenset().union(*(instance.ssids for instance in self.instances))

    @property
    def fingerprints(self) -> FrozenSet[Fingerprint]:
        return frozenset(instance.fingerprint for instance in self.instances)

    @property
    def uuid_es(self) -> FrozenSet[bytes]:
        return frozenset(instance.uuid_e for instance in self.instances if instance.uuid_e is not None)

    @property
    def randomized(self) -> bool:
        return all(classify_mac(mac) == MacClass.RANDOMIZED for mac in self.macs)

    @property
    def singleton(self) -> bool:
        return len(self.instances) == 1

    @property
    def first_ts(self) -> float:
        return min(instance.first_ts for instance in self.instances)

    @property
    def last_ts(self) -> float:
        return max(instance.last_ts for instance in self.instances)

    @property
    def probe_count(self) -> int:
        return sum(len(instance) for instance in self.instances)

    def sort_key(self) -> Tuple[float, int]:
        return (self.first_ts, min(instance.id for instance in self.instances))


@dataclass(frozen=True)
class AppearanceCluster:
    start: float
    end: float
    member_instances: Tuple[int, ...]

    @property
    def width(self) -> float:
        return self.end - self.start


@dataclass(frozen=True)
class TemporalProfile:
    device: DeviceCluster
    clusters: Tuple[AppearanceCluster, ...]

    def __len__(self) -> int:
        return len(self.clusters)


@dataclass
class AnalysisResult:
    settings: AnalysisSettings
    records: List[CaptureRecord] = field(default_factory=list)
    group_records: List[CaptureRecord] = field(default_factory=list)
    read_stats: ReadStats = field(default_factory=ReadStats)
    instances: Optional[List[ScanInstance]] = None
    devices: Optional[List[DeviceCluster]] = None
    merged_devices: Optional[List[DeviceCluster]] = None
    preprocessors: List[str] = field(default_factory=list)
    processors: List[str] = field(default_factory=list)
    postprocessors: List[str] = field(default_factory=list)
    attributes: Dict[str, object] = field(default_factory=dict)
    errors: List[str] = field(default_factory=list)

    def add_preprocessor(self, name: str) -> None:
        self.preprocessors.append(name)

    def add_processor(self, name: str) -> None:
        self.processors.append(name)

    def add_postprocessor(self, name: str) -> None:
        self.postprocessors.append(name)

    def add_error(self, error: str) -> None:
        self.errors.append(error)

    def has_errors(self) -> bool:
        return len(self.errors) > 0

    def clear_errors(self) -> None:
        self.errors = []
