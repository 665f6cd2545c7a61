"""
Post-processor checking that instances, devices and merged devices form
nested partitions of the input.
"""
from collections import Counter
from typing import Dict, List, Optional, Sequence

from probetracker.core.errors import ConsistencyError
from ..models import AnalysisResult
from ..processor_base import PostProcessor


def _partition_problems(label: str, universe: int, groups: Sequence[Sequence[int]], member: str) -> List[str]:
    problems = []
    seen = Counter(i for group in groups for i in group)
    duplicated = sorted(i for (i, n) in seen.items() if n > 1)
    missing = sorted(set(range(universe)) - set(seen))
    unknown = sorted(i for i in seen if not 0 <= i < universe)
    if duplicated:
        problems.append(f'{label}: {member}s in more than one group: {duplicated[:10]}')
    if missing:
        problems.append(f'{label}: {member}s not covered: {missing[:10]}')
    if unknown:
        problems.append(f'{label}: unknown {member} ids: {unknown[:10]}')
    if any(not group for group in groups):
        problems.append(f'{label}: empty group')
    return problems


def check_partitions(probe_count: int, instance_probes: Sequence[Sequence[int]],
                     device_instances: Sequence[Sequence[int]],
                     merged_instances: Optional[Sequence[Sequence[int]]] = None,
                     merged_from: Optional[Sequence[Sequence[int]]] = None) -> List[str]:
    """
    Check the nesting of the three partitions.

    Args:
        probe_count: number of probes analysed
        instance_probes: probe indices per instance, indexed by instance id
        device_instances: instance ids per pre-merge device, indexed by device id
        merged_instances: instance ids per merged device
        merged_from: pre-merge device ids per merged device

    Returns:
        List of problems, empty when consistent
    """
    problems = _partition_problems('instances', probe_count, instance_probes, 'probe')
    problems += _partition_problems('devices', len(instance_probes), device_instances, 'instance')
    if merged_instances is None:
        return problems
    problems += _partition_problems('merged devices', len(instance_probes), merged_instances, 'instance')

    owner: Dict[int, int] = {}
    for (merged_id, members) in enumerate(merged_instances):
        for instance_id in members:
            owner[instance_id] = merged_id
    for (device_id, members) in enumerate(device_instances):
        owners = {owner.get(instance_id) for instance_id in members}
        if len(owners) > 1:
            problems.append(f'device {device_id} split across merged devices {sorted(o for o in owners if o is not None)}')
    if merged_from is not None:
        problems += _partition_problems('merged_from', len(device_instances), merged_from, 'device')
        for (merged_id, origins) in enumerate(merged_from):
            expected = sorted(i for origin in origins if 0 <= origin < len(device_instances)
                              for i in device_instances[origin])
            if expected != sorted(merged_instances[merged_id]):
                problems.append(f'merged device {merged_id}: instances differ from its merged_from devices')
    return problems


class ConsistencyChecker(PostProcessor):

    def process(self, result: AnalysisResult) -> None:
        instances = result.instances or []
        problems = []
        for instance in instances:
            if len({p.mac for p in instance.probes}) != 1:
                problems.append(f'instance {instance.id} mixes MAC addresses')
            if len({p.uuid_e for p in instance.probes if p.uuid_e is not None}) > 1:
                problems.append(f'instance {instance.id} mixes UUID-E values')
        problems += check_partitions(
            len(result.records),
            [instance.probe_indices for instance in instances],
            [device.instance_ids for device in result.devices or []],
            [device.instance_ids for device in result.merged_devices] if result.merged_devices is not None else None,
            [device.merged_from for device in result.merged_devices] if result.merged_devices is not None else None,
        )
        if problems:
            raise ConsistencyError('; '.join(problems))
