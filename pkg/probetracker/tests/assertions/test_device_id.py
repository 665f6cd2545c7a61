"""
Unit tests for the same-device predicate and device clustering.
"""
import sys
import unittest
from itertools import combinations
from pathlib import Path

import numpy as np

# Add project root to path if needed
project_root = Path(__file__).resolve().parent.parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from probetracker.core.device_id import cluster_devices, same_device, ssid_similarity
from probetracker.core.errors import ConfigError
from probetracker.core.frames import WpsInfo
from probetracker.core.pipeline.models import ScanInstance
from probetracker.core.scan_instance import group_instances
from probetracker.core.settings import SimilarityConfig
from probetracker.core.utils import UnionFind
from probetracker.synth import device_ari, generate, random_scenario
from probetracker.tests.assertions.fixtures import device, partition, probe, scenario


def instance(instance_id, mac, ssids=(), model='model-a', uuid_e=None, ts=None):
    """One-probe-per-SSID instance; a wildcard probe when ssids is empty."""
    ts = float(instance_id) if ts is None else ts
    wps = WpsInfo(uuid_e=uuid_e) if uuid_e is not None else None
    probes = [probe(mac=mac, sn=k + 1, ts=ts + 0.01 * k, ssid=ssid, model=model, wps=wps)
              for (k, ssid) in enumerate(ssids or [None])]
    return ScanInstance.from_probes(instance_id, probes, range(len(probes)))


def brute_force(instances, cfg):
    uf = UnionFind(len(instances))
    for (a, b) in combinations(range(len(instances)), 2):
        if same_device(instances[a], instances[b], cfg):
            uf.union(a, b)
    return partition([instances[i].id for i in group] for group in uf.groups())


def clustered(devices):
    return partition(d.instance_ids for d in devices)


class TestSsidSimilarity(unittest.TestCase):

    def test_examples(self):
        (s1, s2, s3) = (b's1', b's2', b's3')
        self.assertEqual(ssid_similarity({s1, s2}, {s1, s2}), 1.0)
        self.assertEqual(ssid_similarity({s1, s2}, {s1, s2}, 'overlap'), 1.0)
        self.assertAlmostEqual(ssid_similarity({s1, s2}, {s1, s3}), 1 / 3)
        self.assertEqual(ssid_similarity({s1, s2}, {s1, s3}, 'overlap'), 0.5)
        self.assertEqual(ssid_similarity(set(), {s1}), 0.0)
        self.assertEqual(ssid_similarity(set(), {s1}, 'overlap'), 0.0)
        self.assertEqual(ssid_similarity(set(), set()), 0.0)

    def test_random_sets_against_indicator_vectors(self):
        rng = np.random.default_rng(17)
        universe = [f'net-{i}'.encode() for i in range(12)]
        for _ in range(1000):
            (x, y) = (rng.random(12) < rng.random(), rng.random(12) < rng.random())
            a = {ssid for (ssid, bit) in zip(universe, x) if bit}
            b = {ssid for (ssid, bit) in zip(universe, y) if bit}
            common = int(np.sum(x & y))
            union = int(np.sum(x | y))
            smaller = int(min(x.sum(), y.sum()))
            self.assertAlmostEqual(ssid_similarity(a, b, 'jaccard'), common / union if union else 0.0)
            self.assertAlmostEqual(ssid_similarity(a, b, 'overlap'), common / smaller if smaller else 0.0)
            self.assertEqual(ssid_similarity(a, b), ssid_similarity(b, a))

    def test_unknown_metric(self):
        with self.assertRaises(ValueError):
            ssid_similarity({b'a'}, {b'a'}, 'cosine')
        with self.assertRaises(ConfigError):
            SimilarityConfig(metric='cosine')
        with self.assertRaises(ConfigError):
            SimilarityConfig(threshold=1.5)


class TestSameDevice(unittest.TestCase):

    def test_mac_decides_first(self):
        a = instance(0, 'da:a1:19:00:00:01', [b'home'], model='x', uuid_e=b'\x01' * 16)
        b = instance(1, 'da:a1:19:00:00:01', [b'work'], model='y', uuid_e=b'\x02' * 16)
        self.assertTrue(same_device(a, b))

    def test_uuid_preempts_fingerprint(self):
        a = instance(0, 'da:a1:19:00:00:01', [b'home', b'work'], uuid_e=b'\x01' * 16)
        b = instance(1, 'da:a1:19:00:00:02', [b'home', b'work'], uuid_e=b'\x02' * 16)
        self.assertEqual(a.fingerprint, b.fingerprint)
        self.assertFalse(same_device(a, b))
        c = instance(2, 'da:a1:19:00:00:03', [b'elsewhere'], uuid_e=b'\x01' * 16)
        self.assertTrue(same_device(a, c))

    def test_one_sided_wps_falls_through(self):
        a = instance(0, 'da:a1:19:00:00:01', [b'home', b'work'], uuid_e=b'\x01' * 16)
        b = instance(1, 'da:a1:19:00:00:02', [b'home', b'work'])
        # different fingerprints: only one carries the WPS element
        self.assertFalse(same_device(a, b))

    def test_wps_without_uuid_e_uses_fingerprint(self):
        wps = WpsInfo(device_name=b'Living room TV')
        (a, b) = (ScanInstance.from_probes(i, [probe(mac=mac, sn=1, ts=float(i), ssid=b'home', wps=wps)], [i])
                  for (i, mac) in enumerate(('da:a1:19:00:00:01', 'da:a1:19:00:00:02')))
        self.assertTrue(a.probes[0].has_wps)
        self.assertFalse(a.has_uuid_e)
        self.assertEqual(a.fingerprint, b.fingerprint)
        self.assertTrue(same_device(a, b))

    def test_similarity_branch(self):
        a = instance(0, 'da:a1:19:00:00:01', [b's1', b's2'])
        b = instance(1, 'da:a1:19:00:00:02', [b's1', b's2', b's3'])
        self.assertTrue(same_device(a, b))
        c = instance(2, 'da:a1:19:00:00:03', [b's1', b's3'])
        self.assertFalse(same_device(a, c))
        self.assertTrue(same_device(a, c, SimilarityConfig(metric='overlap', comparator='inclusive')))
        self.assertFalse(same_device(a, c, SimilarityConfig(metric='overlap')))

    def test_different_models(self):
        a = instance(0, 'da:a1:19:00:00:01', [b's1'], model='x')
        b = instance(1, 'da:a1:19:00:00:02', [b's1'], model='y')
        self.assertFalse(same_device(a, b))

    def test_wildcards_never_match_by_content(self):
        a = instance(0, 'da:a1:19:00:00:01')
        b = instance(1, 'da:a1:19:00:00:02')
        self.assertFalse(same_device(a, b, SimilarityConfig(threshold=0.0, comparator='inclusive')))


class TestClusterDevices(unittest.TestCase):

    def test_global_mac(self):
        instances = [instance(i, '00:1b:63:84:45:e6', [f's{i}'.encode()], model=f'm{i}') for i in range(5)]
        (single,) = cluster_devices(instances)
        self.assertEqual(single.instance_ids, [0, 1, 2, 3, 4])
        self.assertFalse(single.randomized)

    def test_pairwise_false(self):
        instances = [instance(i, f'da:a1:19:00:00:{i:02x}', [f's{i}'.encode()]) for i in range(6)]
        clusters = cluster_devices(instances)
        self.assertEqual(len(clusters), 6)
        self.assertTrue(all(c.singleton and c.randomized for c in clusters))

    def test_transitive_closure(self):
        a = instance(0, 'da:a1:19:00:00:01', [b's1', b's2'])
        b = instance(1, 'da:a1:19:00:00:02', [b's1', b's2', b's3'])
        c = instance(2, 'da:a1:19:00:00:03', [b's2', b's3'])
        self.assertFalse(same_device(a, c))
        (single,) = cluster_devices([a, b, c])
        self.assertEqual(single.ssid_union, frozenset({b's1', b's2', b's3'}))
        self.assertEqual(len(single.macs), 3)

    def test_ordering_and_permutation(self):
        instances = [instance(i, f'da:a1:19:00:00:{i % 4:02x}', [f's{i % 3}'.encode()], model=f'm{i % 2}')
                     for i in range(12)]
        forward = cluster_devices(instances)
        backward = cluster_devices(list(reversed(instances)))
        self.assertEqual(forward, backward)
        self.assertEqual([c.id for c in forward], list(range(len(forward))))
        firsts = [c.first_ts for c in forward]
        self.assertEqual(firsts, sorted(firsts))

    def test_full_pnl_recovers_devices(self):
        devices = [device(f'd{i}', sessions=[(0, 1800)], period=60.0, burst=3,
                          pnl=[f'd{i}-home', f'd{i}-work', f'd{i}-gym'], ie={'model': 'same-model'})
                   for i in range(8)]
        (records, truth) = generate(scenario(devices, seed=13))
        clusters = cluster_devices(group_instances(records))
        self.assertEqual(len(clusters), 8)
        self.assertEqual(device_ari(clusters, truth.device_ids), 1.0)

    def test_threshold_monotone(self):
        (records, _) = generate(random_scenario(7, n_devices=8))
        instances = group_instances(records)
        counts = [len(cluster_devices(instances, SimilarityConfig(threshold=t))) for t in (0.0, 0.25, 0.5, 0.75, 1.0)]
        self.assertEqual(counts, sorted(counts))

    def test_blocking_matches_all_pairs(self):
        mixed = [
            instance(0, 'da:a1:19:00:00:01', [b'a', b'b'], uuid_e=b'\x01' * 16),
            instance(1, 'da:a1:19:00:00:02', [b'a', b'b'], uuid_e=b'\x02' * 16),
            instance(2, 'da:a1:19:00:00:03', [b'a', b'b'], uuid_e=b'\x02' * 16),
            instance(3, 'da:a1:19:00:00:04', [b'a', b'b']),
            instance(4, 'da:a1:19:00:00:05', [b'a', b'b']),
            instance(5, 'da:a1:19:00:00:06', [b'a']),
            instance(6, 'da:a1:19:00:00:07', [b'a']),
            instance(7, 'da:a1:19:00:00:07', [b'c'], model='other'),
            instance(8, 'da:a1:19:00:00:08'),
            instance(9, 'da:a1:19:00:00:09'),
        ]
        configs = [SimilarityConfig(), SimilarityConfig(metric='overlap', comparator='inclusive'),
                   SimilarityConfig(threshold=0.0, comparator='inclusive')]
        for cfg in configs:
            with self.subTest(cfg=cfg):
                self.assertEqual(clustered(cluster_devices(mixed, cfg)), brute_force(mixed, cfg))

    def test_blocking_matches_all_pairs_on_synthetic_captures(self):
        cfg = SimilarityConfig(metric='overlap', comparator='inclusive')
        for seed in range(4):
            with self.subTest(seed=seed):
                (records, _) = generate(random_scenario(seed, n_devices=6))
                instances = group_instances(records)[:300]
                self.assertEqual(clustered(cluster_devices(instances, cfg)), brute_force(instances, cfg))


if __name__ == '__main__':
    unittest.main()
