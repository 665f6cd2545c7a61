"""
The analysis report: funnel counts, presence timelines and the parameters
that produced them.
"""
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Sequence, Tuple

from probetracker.core.config import settings_to_mapping
from probetracker.core.pipeline.models import AnalysisResult, DeviceCluster
from probetracker.core.settings import MergeConfig
from probetracker.core.temporal import cluster_appearances

Interval = Tuple[float, float]


def device_class(device: DeviceCluster) -> str:
    return 'randomized' if device.randomized else 'global'


def device_timelines(devices: Sequence[DeviceCluster], merge: MergeConfig) -> Dict[int, List[Interval]]:
    timelines = {}
    for device in devices:
        profile = cluster_appearances(device, merge.gap_s, merge.pad_s)
        timelines[device.id] = [(cluster.start, cluster.end) for cluster in profile.clusters]
    return timelines


@dataclass
class AnalysisReport:
    probe_count: int = 0
    group_probes: int = 0
    instance_count: int = 0
    device_count_pre_merge: int = 0
    device_count_post_merge: int = 0
    global_mac_devices: int = 0
    randomized_devices_pre: int = 0
    randomized_devices_post: int = 0
    singleton_devices: int = 0
    timelines: Dict[int, List[Interval]] = field(default_factory=dict)
    timelines_pre: Dict[int, List[Interval]] = field(default_factory=dict)
    classes: Dict[int, str] = field(default_factory=dict)
    classes_pre: Dict[int, str] = field(default_factory=dict)
    merged_from: Dict[int, List[int]] = field(default_factory=dict)
    parameters: Dict[str, Any] = field(default_factory=dict)
    read_stats: Dict[str, int] = field(default_factory=dict)

    def funnel(self) -> List[Tuple[str, int]]:
        return [
            ('Probe requests', self.probe_count),
            ('Scan instances', self.instance_count),
            ('Devices (before temporal matching)', self.device_count_pre_merge),
            ('Devices (after temporal matching)', self.device_count_post_merge),
        ]

    def check_invariants(self) -> List[str]:
        problems = []
        if self.instance_count > self.probe_count:
            problems.append('more scan instances than probes')
        if self.device_count_pre_merge > self.instance_count:
            problems.append('more devices than scan instances')
        if self.device_count_post_merge > self.device_count_pre_merge:
            problems.append('temporal matching increased the device count')
        if self.global_mac_devices + self.randomized_devices_pre != self.device_count_pre_merge:
            problems.append('global and randomized device counts do not add up')
        return problems

    def to_dict(self) -> Dict[str, Any]:
        def intervals(timelines):
            return {str(k): [list(iv) for iv in v] for (k, v) in timelines.items()}

        return {
            'probe_count': self.probe_count,
            'group_probes': self.group_probes,
            'instance_count': self.instance_count,
            'device_count_pre_merge': self.device_count_pre_merge,
            'device_count_post_merge': self.device_count_post_merge,
            'global_mac_devices': self.global_mac_devices,
            'randomized_devices_pre': self.randomized_devices_pre,
            'randomized_devices_post': self.randomized_devices_post,
            'singleton_devices': self.singleton_devices,
            'timelines': intervals(self.timelines),
            'timelines_pre': intervals(self.timelines_pre),
            'classes': {str(k): v for (k, v) in self.classes.items()},
            'classes_pre': {str(k): v for (k, v) in self.classes_pre.items()},
            'merged_from': {str(k): list(v) for (k, v) in self.merged_from.items()},
            'parameters': dict(self.parameters),
            'read_stats': dict(self.read_stats),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> 'AnalysisReport':
        def intervals(raw):
            return {int(k): [(float(a), float(b)) for (a, b) in v] for (k, v) in (raw or {}).items()}

        return cls(
            probe_count=int(data.get('probe_count', 0)),
            group_probes=int(data.get('group_probes', 0)),
            instance_count=int(data.get('instance_count', 0)),
            device_count_pre_merge=int(data.get('device_count_pre_merge', 0)),
            device_count_post_merge=int(data.get('device_count_post_merge', 0)),
            global_mac_devices=int(data.get('global_mac_devices', 0)),
            randomized_devices_pre=int(data.get('randomized_devices_pre', 0)),
            randomized_devices_post=int(data.get('randomized_devices_post', 0)),
            singleton_devices=int(data.get('singleton_devices', 0)),
            timelines=intervals(data.get('timelines')),
            timelines_pre=intervals(data.get('timelines_pre')),
            classes={int(k): v for (k, v) in (data.get('classes') or {}).items()},
            classes_pre={int(k): v for (k, v) in (data.get('classes_pre') or {}).items()},
            merged_from={int(k): [int(i) for i in v] for (k, v) in (data.get('merged_from') or {}).items()},
            parameters=dict(data.get('parameters') or {}),
            read_stats=dict(data.get('read_stats') or {}),
        )


def build_report(result: AnalysisResult) -> AnalysisReport:
    """
    Summarise a finished pipeline run.

    Args:
        result: result without errors, with every stage filled

    Returns:
        AnalysisReport
    """
    devices = result.devices or []
    merged = result.merged_devices or []
    merge = result.settings.merge
    randomized_pre = sum(1 for device in devices if device.randomized)
    return AnalysisReport(
        probe_count=len(result.records),
        group_probes=len(result.group_records),
        instance_count=len(result.instances or []),
        device_count_pre_merge=len(devices),
        device_count_post_merge=len(merged),
        global_mac_devices=len(devices) - randomized_pre,
        randomized_devices_pre=randomized_pre,
        randomized_devices_post=sum(1 for device in merged if device.randomized),
        singleton_devices=sum(1 for device in devices if device.singleton),
        timelines=device_timelines(merged, merge),
        timelines_pre=device_timelines(devices, merge),
        classes={device.id: device_class(device) for device in merged},
        classes_pre={device.id: device_class(device) for device in devices},
        merged_from={device.id: list(device.merged_from) for device in merged},
        parameters=settings_to_mapping(result.settings),
        read_stats=result.read_stats.to_dict(),
    )
