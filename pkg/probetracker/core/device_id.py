"""
Device identification: pairwise same-device predicate over scan instances
and its transitive closure.
"""
import logging
from collections import defaultdict
from itertools import combinations
from typing import AbstractSet, Dict, Hashable, Iterable, List, Optional, Sequence

from probetracker.core.pipeline.models import DeviceCluster, ScanInstance
from probetracker.core.settings import SimilarityConfig
from probetracker.core.utils.union_find import UnionFind

logger = logging.getLogger(__name__)


def ssid_similarity(a: AbstractSet[bytes], b: AbstractSet[bytes], metric: str = 'jaccard') -> float:
    """
    Set similarity of two SSID sets.

    Args:
        a, b: SSID sets
        metric: 'jaccard' (intersection over union) or 'overlap'
            (intersection over the smaller set)

    Returns:
        Fraction in [0, 1]; 0 when there is nothing to compare
    """
    common = len(a & b)
    if metric == 'jaccard':
        union = len(a | b)
        return common / union if union else 0.0
    if metric == 'overlap':
        smaller = min(len(a), len(b))
        return common / smaller if smaller else 0.0
    raise ValueError(f'Unknown similarity metric: {metric}')


def _content_match(i1: ScanInstance, i2: ScanInstance, cfg: SimilarityConfig) -> bool:
    if i1.has_uuid_e and i2.has_uuid_e:
        return i1.uuid_e == i2.uuid_e
    if i1.fingerprint == i2.fingerprint:
        return cfg.accepts(ssid_similarity(i1.ssids, i2.ssids, cfg.metric))
    return False


def same_device(i1: ScanInstance, i2: ScanInstance, cfg: Optional[SimilarityConfig] = None) -> bool:
    """
    Same-device predicate: shared MAC, else matching UUID-E when both carry
    one, else equal fingerprints with SSID similarity above the threshold.
    """
    if i1.mac == i2.mac:
        return True
    return _content_match(i1, i2, cfg or SimilarityConfig())


def _blocks(instances: Sequence[ScanInstance], key) -> Iterable[List[int]]:
    buckets: Dict[Hashable, List[int]] = defaultdict(list)
    for (position, instance) in enumerate(instances):
        value = key(instance)
        if value is not None:
            buckets[value].append(position)
    return buckets.values()


def same_device_components(instances: Sequence[ScanInstance], cfg: SimilarityConfig) -> List[List[int]]:
    """
    Connected components of the same_device graph, as positions into instances.

    Only pairs that share a MAC, a UUID-E or a fingerprint can be related,
    so edges are searched inside those blocks. Apart from the MAC test the
    predicate depends on (UUID-E, SSID set) alone, so a fingerprint block is
    evaluated once per pair of distinct signatures: members of two matching
    signatures are all linked, and members of one signature are linked when
    it matches itself.
    """
    uf = UnionFind(len(instances))
    for block in _blocks(instances, lambda inst: inst.mac):
        uf.union_all(block)
    for block in _blocks(instances, lambda inst: inst.uuid_e):
        uf.union_all(block)
    for block in _blocks(instances, lambda inst: inst.fingerprint):
        signatures: Dict[Hashable, List[int]] = defaultdict(list)
        for position in block:
            signatures[(instances[position].uuid_e, instances[position].ssids)].append(position)
        groups = list(signatures.values())
        for members in groups:
            if len(members) > 1 and _content_match(instances[members[0]], instances[members[1]], cfg):
                uf.union_all(members)
        for (g1, g2) in combinations(groups, 2):
            if _content_match(instances[g1[0]], instances[g2[0]], cfg):
                uf.union_all(g1 + g2)
    return uf.groups()


def build_clusters(groups: Iterable[Sequence[ScanInstance]]) -> List[DeviceCluster]:
    """Order member groups by earliest timestamp and number them from 0."""
    provisional = [DeviceCluster(id=-1, instances=tuple(sorted(group, key=lambda inst: inst.id)))
                   for group in groups]
    provisional.sort(key=DeviceCluster.sort_key)
    return [DeviceCluster(id=i, instances=cluster.instances) for (i, cluster) in enumerate(provisional)]


def cluster_devices(instances: Sequence[ScanInstance], cfg: Optional[SimilarityConfig] = None) -> List[DeviceCluster]:
    """
    Cluster scan instances into devices.

    Args:
        instances: scan instances in any order
        cfg: similarity metric, threshold and comparator

    Returns:
        Devices ordered by earliest member timestamp; singletons are kept
        and flagged through DeviceCluster.singleton
    """
    cfg = cfg or SimilarityConfig()
    instances = list(instances)
    components = same_device_components(instances, cfg)
    clusters = build_clusters([instances[i] for i in component] for component in components)
    logger.debug('Clustered %d instances into %d devices (%d singletons)', len(instances), len(clusters),
                 sum(1 for c in clusters if c.singleton))
    return clusters
