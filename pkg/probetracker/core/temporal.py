"""
Temporal pattern matching: appearance clustering per device and merging of
devices whose presence patterns coincide.
"""
import logging
from collections import defaultdict
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from probetracker.core.errors import ContractError
from probetracker.core.pipeline.models import AppearanceCluster, DeviceCluster, TemporalProfile
from probetracker.core.settings import MergeConfig
from probetracker.core.utils.union_find import UnionFind

logger = logging.getLogger(__name__)


def cluster_appearances(device: DeviceCluster, gap_s: float = 600.0, pad_s: float = 30.0) -> TemporalProfile:
    """
    Single-linkage clustering of a device's instance start times.

    A new cluster starts wherever two consecutive start times are more
    than gap_s apart. Each cluster spans its first and last start time,
    widened by pad_s on both sides.

    Args:
        device: device whose instances are clustered
        gap_s: largest gap inside one cluster, seconds
        pad_s: padding added to both cluster ends, seconds

    Returns:
        TemporalProfile with time-ordered clusters
    """
    if gap_s <= 0:
        raise ContractError(f'gap must be positive, got {gap_s}')
    if pad_s < 0:
        raise ContractError(f'pad must not be negative, got {pad_s}')
    ordered = sorted(device.instances, key=lambda inst: (inst.first_ts, inst.id))
    times = np.array([inst.first_ts for inst in ordered], dtype=np.float64)
    ids = [inst.id for inst in ordered]
    splits = [0] + [int(i) + 1 for i in np.flatnonzero(np.diff(times) > gap_s)] + [len(ordered)]
    clusters = tuple(
        AppearanceCluster(start=float(times[start]) - pad_s, end=float(times[end - 1]) + pad_s,
                          member_instances=tuple(ids[start:end]))
        for (start, end) in zip(splits, splits[1:])
    )
    return TemporalProfile(device=device, clusters=clusters)


def interval_overlap(a: AppearanceCluster, b: AppearanceCluster) -> float:
    """Intersection over union of two closed intervals."""
    intersection = max(0.0, min(a.end, b.end) - max(a.start, b.start))
    union = a.width + b.width - intersection
    if union <= 0:
        # two zero-width clusters
        return 1.0 if a.start == b.start else 0.0
    return intersection / union


def profile_overlap(a: TemporalProfile, b: TemporalProfile) -> float:
    """
    Mean rank-paired interval overlap of two profiles with equal cluster counts.
    """
    if len(a.clusters) != len(b.clusters):
        raise ContractError(f'profiles have different cluster counts: {len(a.clusters)} vs {len(b.clusters)}')
    if not a.clusters:
        return 0.0
    scores = [interval_overlap(x, y) for (x, y) in zip(a.clusters, b.clusters)]
    return float(np.mean(scores))


def _in_scope(device: DeviceCluster, scope: str) -> bool:
    return scope == 'all' or device.randomized


def _origins(device: DeviceCluster) -> Tuple[int, ...]:
    return device.merged_from or (device.id,)


def _candidate_pairs(profiles: Dict[int, TemporalProfile], positions: List[int]) -> List[Tuple[int, int]]:
    """
    Pairs whose clusters meet at some rank. Every other pair has zero
    overlap at every rank and cannot reach a positive threshold.
    """
    pairs: Set[Tuple[int, int]] = set()
    for rank in range(len(profiles[positions[0]])):
        ordered = sorted(positions, key=lambda p: profiles[p].clusters[rank].start)
        active: List[Tuple[float, int]] = []
        for position in ordered:
            cluster = profiles[position].clusters[rank]
            active = [(end, other) for (end, other) in active if end >= cluster.start]
            pairs.update((min(position, other), max(position, other)) for (_, other) in active)
            active.append((cluster.end, position))
    return sorted(pairs)


def _merge_round(devices: List[DeviceCluster], cfg: MergeConfig) -> Optional[List[DeviceCluster]]:
    profiles = {position: cluster_appearances(device, cfg.gap_s, cfg.pad_s)
                for (position, device) in enumerate(devices) if _in_scope(device, cfg.scope)}
    by_count: Dict[int, List[int]] = defaultdict(list)
    for position in sorted(profiles, key=lambda p: devices[p].sort_key()):
        by_count[len(profiles[position])].append(position)

    uf = UnionFind(len(devices))
    merged_any = False
    for positions in by_count.values():
        for (x, y) in _candidate_pairs(profiles, positions):
            if profile_overlap(profiles[x], profiles[y]) >= cfg.overlap:
                merged_any |= uf.union(x, y)
    if not merged_any:
        return None

    result = []
    for group in uf.groups():
        members = [devices[p] for p in group]
        instances = tuple(sorted((inst for d in members for inst in d.instances), key=lambda inst: inst.id))
        origins = tuple(sorted(origin for d in members for origin in _origins(d)))
        result.append(DeviceCluster(id=-1, instances=instances, merged_from=origins))
    return result


def temporal_merge(devices: Sequence[DeviceCluster], gap_s: float = 600.0, pad_s: float = 30.0,
                   overlap: float = 0.5, scope: str = 'randomized') -> List[DeviceCluster]:
    """
    Merge devices whose appearance patterns match, until nothing changes.

    Two in-scope devices merge when they have the same number of appearance
    clusters and their rank-paired overlap is at least the threshold.
    Profiles are rebuilt after every round.

    Args:
        devices: pre-merge device clusters
        gap_s: appearance clustering gap, seconds
        pad_s: appearance cluster padding, seconds
        overlap: minimum mean overlap for a merge, in (0, 1]
        scope: 'randomized' merges only devices whose MACs are all randomized; 'all' merges any

    Returns:
        Devices numbered from 0 by earliest timestamp; merged_from lists
        the pre-merge device ids each one covers
    """
    cfg = MergeConfig(gap_s=gap_s, pad_s=pad_s, overlap=overlap, scope=scope)
    current = [DeviceCluster(id=d.id, instances=d.instances, merged_from=_origins(d)) for d in devices]
    rounds = 0
    while True:
        merged = _merge_round(current, cfg)
        if merged is None:
            break
        rounds += 1
        logger.debug('Temporal merge round %d: %d -> %d devices', rounds, len(current), len(merged))
        current = merged
    current.sort(key=DeviceCluster.sort_key)
    return [DeviceCluster(id=i, instances=d.instances, merged_from=d.merged_from) for (i, d) in enumerate(current)]


def merge_devices(devices: Sequence[DeviceCluster], cfg: Optional[MergeConfig] = None) -> List[DeviceCluster]:
    cfg = cfg or MergeConfig()
    return temporal_merge(devices, cfg.gap_s, cfg.pad_s, cfg.overlap, cfg.scope)
