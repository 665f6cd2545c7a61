"""
JSON artifacts of an analysis (instances, devices, merged devices, report)
and the consistency check that recomputes the report from them.
"""
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Sequence, TextIO, Tuple

from probetracker.core.capture.records import probe_from_dict, probe_to_dict
from probetracker.core.config import settings_from_mapping
from probetracker.core.errors import CaptureFormatError, ConsistencyError
from probetracker.core.pipeline.models import AnalysisResult, DeviceCluster, ScanInstance
from probetracker.core.pipeline.post_processors.consistency_checker import check_partitions
from .report import AnalysisReport, device_class, device_timelines
from .timeline import timeline_csv

logger = logging.getLogger(__name__)

REPORT_FILE = 'report.json'
INSTANCES_FILE = 'instances.jsonl'
DEVICES_FILE = 'devices.json'
MERGED_FILE = 'merged.json'
TIMELINE_FILE = 'timeline.csv'


def _hexes(values: Iterable[bytes]) -> List[str]:
    return sorted(value.hex() for value in values)


def instance_to_dict(instance: ScanInstance) -> Dict[str, Any]:
    return {
        'id': instance.id,
        'mac': str(instance.mac),
        'first_ts': instance.first_ts,
        'last_ts': instance.last_ts,
        'ssids': _hexes(instance.ssids),
        'fingerprint': instance.fingerprint.hex(),
        'uuid_e': instance.uuid_e.hex() if instance.uuid_e is not None else None,
        'probe_indices': list(instance.probe_indices),
        'probes': [probe_to_dict(probe) for probe in instance.probes],
    }


def instance_from_dict(data: Mapping[str, Any]) -> ScanInstance:
    if not isinstance(data, Mapping):
        raise CaptureFormatError(f'invalid scan instance record: expected an object, got {type(data).__name__}')
    try:
        probes = [probe_from_dict(p) for p in data['probes']]
        return ScanInstance.from_probes(int(data['id']), probes, [int(i) for i in data['probe_indices']])
    except (KeyError, TypeError, ValueError) as e:
        raise CaptureFormatError(f'invalid scan instance record: {e}') from e


def dumps_instance(instance: ScanInstance) -> str:
    return json.dumps(instance_to_dict(instance), sort_keys=True, separators=(',', ':'))


def read_instances(lines: Iterable[str]) -> List[ScanInstance]:
    instances = []
    for (line_number, line) in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            data = json.loads(line)
        except ValueError as e:
            raise CaptureFormatError(f'line {line_number}: invalid JSON: {e}') from e
        instances.append(instance_from_dict(data))
    return instances


def device_to_dict(device: DeviceCluster) -> Dict[str, Any]:
    data = {
        'id': device.id,
        'instance_ids': device.instance_ids,
        'macs': sorted(str(mac) for mac in device.macs),
        'class': device_class(device),
        'randomized': device.randomized,
        'singleton': device.singleton,
        'fingerprints': sorted(fp.hex() for fp in device.fingerprints),
        'ssids': _hexes(device.ssid_union),
        'uuid_es': _hexes(device.uuid_es),
        'first_ts': device.first_ts,
        'last_ts': device.last_ts,
    }
    if device.merged_from:
        data['merged_from'] = list(device.merged_from)
    return data


def devices_document(instances: Sequence[ScanInstance], devices: Sequence[DeviceCluster],
                     parameters: Mapping[str, Any]) -> Dict[str, Any]:
    """A self-contained device file: parameters, member instances and devices."""
    return {
        'parameters': dict(parameters),
        'instances': [instance_to_dict(instance) for instance in instances],
        'devices': [device_to_dict(device) for device in devices],
    }


def devices_from_document(document: Mapping[str, Any]) -> Tuple[List[ScanInstance], List[DeviceCluster]]:
    """
    Rebuild instances and devices from a device file.

    Raises:
        CaptureFormatError: malformed document or unknown instance ids
    """
    if not isinstance(document, Mapping):
        raise CaptureFormatError(f'invalid device document: expected an object, got {type(document).__name__}')
    try:
        instances = [instance_from_dict(data) for data in document['instances']]
        by_id = {instance.id: instance for instance in instances}
        devices = [
            DeviceCluster(id=int(data['id']),
                          instances=tuple(by_id[int(i)] for i in data['instance_ids']),
                          merged_from=tuple(int(i) for i in data.get('merged_from', ())))
            for data in document['devices']
        ]
    except (AttributeError, KeyError, TypeError, ValueError) as e:
        raise CaptureFormatError(f'invalid device document: {e}') from e
    return (instances, devices)


def dump_json(data: Any, stream: TextIO) -> None:
    json.dump(data, stream, sort_keys=True, indent=2)
    stream.write('\n')


def write_artifacts(out_dir: str, result: AnalysisResult, report: AnalysisReport) -> List[str]:
    """
    Write report.json, instances.jsonl, devices.json, merged.json and timeline.csv.

    Returns:
        Paths written
    """
    os.makedirs(out_dir, exist_ok=True)
    parameters = report.parameters
    paths = []

    def target(name):
        path = os.path.join(out_dir, name)
        paths.append(path)
        return path

    with open(target(REPORT_FILE), 'w', encoding='utf-8') as f:
        f.write(report.to_json() + '\n')
    with open(target(INSTANCES_FILE), 'w', encoding='utf-8') as f:
        for instance in result.instances:
            f.write(dumps_instance(instance) + '\n')
    with open(target(DEVICES_FILE), 'w', encoding='utf-8') as f:
        dump_json(devices_document(result.instances, result.devices, parameters), f)
    with open(target(MERGED_FILE), 'w', encoding='utf-8') as f:
        dump_json(devices_document(result.instances, result.merged_devices, parameters), f)
    with open(target(TIMELINE_FILE), 'w', encoding='utf-8') as f:
        f.write(timeline_csv(report.timelines, sorted(report.timelines)))
    return paths


@dataclass
class VerifiedArtifacts:
    report: AnalysisReport
    instances: List[ScanInstance]
    devices: List[DeviceCluster]
    merged: List[DeviceCluster]
    problems: List[str] = field(default_factory=list)


def _load_json(path: str) -> Any:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except ValueError as e:
        raise CaptureFormatError(f'{path}: invalid JSON: {e}') from e


def load_artifacts(directory: str) -> VerifiedArtifacts:
    """
    Load the artifacts of analyze --out-dir.

    Raises:
        FileNotFoundError: an artifact is missing
        CaptureFormatError: an artifact is malformed
    """
    for name in (REPORT_FILE, INSTANCES_FILE, DEVICES_FILE, MERGED_FILE):
        path = os.path.join(directory, name)
        if not os.path.exists(path):
            raise FileNotFoundError(f"File '{path}' not found")
    report = AnalysisReport.from_dict(_load_json(os.path.join(directory, REPORT_FILE)))
    with open(os.path.join(directory, INSTANCES_FILE), 'r', encoding='utf-8') as f:
        instances = read_instances(f)
    (_, devices) = devices_from_document(_load_json(os.path.join(directory, DEVICES_FILE)))
    (_, merged) = devices_from_document(_load_json(os.path.join(directory, MERGED_FILE)))
    return VerifiedArtifacts(report=report, instances=instances, devices=devices, merged=merged)


def _compare(problems: List[str], name: str, reported: Any, recomputed: Any) -> None:
    if reported != recomputed:
        problems.append(f'{name}: report says {reported}, artifacts give {recomputed}')


def verify_artifacts(directory: str, strict: bool = False) -> VerifiedArtifacts:
    """
    Recompute every report count from the per-instance and per-device
    artifacts and check that the partitions nest.

    Args:
        directory: output directory of analyze --out-dir
        strict: raise ConsistencyError instead of returning problems

    Returns:
        VerifiedArtifacts with the list of problems found
    """
    loaded = load_artifacts(directory)
    (report, instances, devices, merged) = (loaded.report, loaded.instances, loaded.devices, loaded.merged)
    problems = loaded.problems
    probe_count = sum(len(instance) for instance in instances)
    randomized_pre = sum(1 for device in devices if device.randomized)

    _compare(problems, 'probe_count', report.probe_count, probe_count)
    _compare(problems, 'instance_count', report.instance_count, len(instances))
    _compare(problems, 'device_count_pre_merge', report.device_count_pre_merge, len(devices))
    _compare(problems, 'device_count_post_merge', report.device_count_post_merge, len(merged))
    _compare(problems, 'randomized_devices_pre', report.randomized_devices_pre, randomized_pre)
    _compare(problems, 'global_mac_devices', report.global_mac_devices, len(devices) - randomized_pre)
    _compare(problems, 'randomized_devices_post', report.randomized_devices_post,
             sum(1 for device in merged if device.randomized))
    _compare(problems, 'singleton_devices', report.singleton_devices, sum(1 for device in devices if device.singleton))
    problems.extend(report.check_invariants())

    if [instance.id for instance in instances] != list(range(len(instances))):
        problems.append('instance ids are not numbered 0..n-1 in file order')
    problems.extend(check_partitions(
        probe_count,
        [instance.probe_indices for instance in instances],
        [device.instance_ids for device in devices],
        [device.instance_ids for device in merged],
        [device.merged_from or (device.id,) for device in merged],
    ))

    if report.parameters:
        try:
            merge = settings_from_mapping(report.parameters).merge
        except Exception as e:
            problems.append(f'parameters: {e}')
        else:
            _compare(problems, 'timelines', report.timelines, device_timelines(merged, merge))
            _compare(problems, 'timelines_pre', report.timelines_pre, device_timelines(devices, merge))

    for problem in problems:
        logger.debug('verify: %s', problem)
    if strict and problems:
        raise ConsistencyError('; '.join(problems))
    return loaded

