"""
Unit tests for scan-instance grouping.
"""
import sys
import unittest
from collections import defaultdict
from pathlib import Path

# Add project root to path if needed
project_root = Path(__file__).resolve().parent.parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from probetracker.core.frames import WpsInfo
from probetracker.core.scan_instance import group_instances, same_instance, sequence_follows
from probetracker.core.settings import InstanceConfig
from probetracker.synth import generate
from probetracker.tests.assertions.fixtures import device, partition, probe, scenario

UUID_A = b'\xaa' * 16
UUID_B = b'\xbb' * 16


class TestSameInstance(unittest.TestCase):

    def test_sequence_window(self):
        self.assertTrue(same_instance(probe(sn=100), probe(sn=102)))
        self.assertTrue(same_instance(probe(sn=100), probe(sn=104)))
        self.assertFalse(same_instance(probe(sn=100), probe(sn=105)))
        self.assertFalse(same_instance(probe(sn=100), probe(sn=100)))
        self.assertFalse(same_instance(probe(sn=100), probe(sn=99)))

    def test_wraparound(self):
        self.assertTrue(same_instance(probe(sn=4094), probe(sn=1)))
        self.assertFalse(same_instance(probe(sn=4094), probe(sn=1), wraparound=False))
        self.assertTrue(sequence_follows(4095, 0))
        self.assertFalse(sequence_follows(4095, 0, wraparound=False))
        self.assertFalse(sequence_follows(0, 4095))

    def test_mac_gate(self):
        self.assertFalse(same_instance(probe(sn=1), probe(mac='da:a1:19:00:00:02', sn=2)))

    def test_fingerprint_gate(self):
        self.assertFalse(same_instance(probe(sn=1, model='a'), probe(sn=2, model='b')))

    def test_wps_decides_alone(self):
        a = probe(sn=1, wps=WpsInfo(uuid_e=UUID_A))
        self.assertTrue(same_instance(a, probe(sn=900, wps=WpsInfo(uuid_e=UUID_A))))
        self.assertFalse(same_instance(a, probe(sn=2, wps=WpsInfo(uuid_e=UUID_B))))

    def test_ssid_is_irrelevant(self):
        self.assertTrue(same_instance(probe(sn=1, ssid=b'home'), probe(sn=2, ssid=b'work')))


class TestGroupInstances(unittest.TestCase):

    def test_single_burst(self):
        probes = [probe(sn=100 + k, ts=0.01 * k) for k in range(5)]
        instances = group_instances(probes)
        self.assertEqual(len(instances), 1)
        self.assertEqual(instances[0].probe_indices, (0, 1, 2, 3, 4))
        self.assertEqual(instances[0].first_ts, 0.0)
        self.assertAlmostEqual(instances[0].last_ts, 0.04)

    def test_different_macs(self):
        instances = group_instances([probe(sn=1), probe(mac='da:a1:19:00:00:02', sn=2, ts=0.01)])
        self.assertEqual(len(instances), 2)

    def test_ssids_union_without_wildcard(self):
        probes = [probe(sn=1, ssid=b'home'), probe(sn=2, ts=0.01), probe(sn=3, ts=0.02, ssid=b'work')]
        (instance,) = group_instances(probes)
        self.assertEqual(instance.ssids, frozenset({b'home', b'work'}))

    def test_devices_times_scans(self):
        devices = [device(f'd{i}', sessions=[(0, 1200)], period=60.0, burst=3, pnl=[f'n{i}', 'shared'])
                   for i in range(10)]
        (records, truth) = generate(scenario(devices, seed=8))
        instances = group_instances(records)
        self.assertEqual(len(instances), 10 * 20)
        self.assertEqual(len(instances), truth.expected_instances)

        by_scan = defaultdict(list)
        for (index, key) in enumerate(zip(truth.device_ids, truth.scan_ids)):
            by_scan[key].append(index)
        self.assertEqual(partition(i.probe_indices for i in instances), partition(by_scan.values()))

    def test_wraparound_in_a_burst(self):
        devices = [device('w', randomization='none', sessions=[(0, 30)], burst=5, sn_start=4093)]
        (records, _) = generate(scenario(devices, seed=1))
        self.assertEqual([r.probe.sequence_number for r in records], [4093, 4094, 4095, 0, 1])
        self.assertEqual(len(group_instances(records)), 1)
        literal = group_instances(records, InstanceConfig(wraparound=False))
        self.assertEqual([len(i) for i in literal], [3, 2])

    def test_gap_bound(self):
        probes = [probe(sn=100, ts=0.0), probe(sn=101, ts=20.0)]
        self.assertEqual(len(group_instances(probes)), 2)
        self.assertEqual(len(group_instances(probes, InstanceConfig(gap_s=0))), 1)
        self.assertEqual(len(group_instances(probes, InstanceConfig(gap_s=30))), 1)

    def test_uuid_consistency(self):
        probes = [
            probe(sn=1, ts=0.00, wps=WpsInfo(uuid_e=UUID_A)),
            probe(sn=2, ts=0.01, wps=WpsInfo(device_name=None)),
            probe(sn=3, ts=0.02, wps=WpsInfo(uuid_e=UUID_B)),
        ]
        instances = group_instances(probes)
        self.assertEqual([i.probe_indices for i in instances], [(0, 1), (2,)])
        self.assertEqual([i.uuid_e for i in instances], [UUID_A, UUID_B])

    def test_interleaved_devices(self):
        probes = [probe(sn=10, ts=0.00), probe(mac='da:a1:19:00:00:02', sn=500, ts=0.01),
                  probe(sn=11, ts=0.02), probe(mac='da:a1:19:00:00:02', sn=501, ts=0.03)]
        instances = group_instances(probes)
        self.assertEqual([i.probe_indices for i in instances], [(0, 2), (1, 3)])

    def test_unsorted_input_keeps_input_indices(self):
        probes = [probe(sn=12, ts=0.02), probe(sn=10, ts=0.00), probe(sn=11, ts=0.01)]
        (instance,) = group_instances(probes)
        self.assertEqual(instance.probe_indices, (1, 2, 0))
        self.assertEqual([p.sequence_number for p in instance.probes], [10, 11, 12])

    def test_partition_and_distinct_macs(self):
        devices = [device('p', randomization='per-probe', burst=4, sessions=[(0, 300)]),
                   device('s', burst=3, sessions=[(0, 300)], pnl=['a'])]
        (records, truth) = generate(scenario(devices, seed=2))
        instances = group_instances(records)
        covered = sorted(i for inst in instances for i in inst.probe_indices)
        self.assertEqual(covered, list(range(len(records))))
        self.assertEqual(len(instances), truth.expected_instances)
        per_probe = [inst for inst in instances if all(truth.device_ids[i] == 0 for i in inst.probe_indices)]
        self.assertTrue(all(len(inst) == 1 for inst in per_probe))
        self.assertEqual(len(per_probe), truth.device_ids.count(0))

    def test_deterministic(self):
        (records, _) = generate(scenario([device('a', burst=4), device('b', randomization='per-probe')], seed=5))
        self.assertEqual(group_instances(records), group_instances(records))

    def test_empty(self):
        self.assertEqual(group_instances([]), [])


if __name__ == '__main__':
    unittest.main()
