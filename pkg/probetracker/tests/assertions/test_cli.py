"""
Tests of the ptrack command line, run in-process through main().
"""
import io
import json
import os
import sys
import tempfile
import unittest
from contextlib import redirect_stdout
from pathlib import Path
from unittest.mock import patch

# Add project root to path if needed
project_root = Path(__file__).resolve().parent.parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from probetracker.cli import main
from probetracker.core.config import DEFAULT_CONFIG, config
from probetracker.tests.assertions.fixtures import device

SALT = '00112233445566778899aabbccddeeff'

SCENARIO = {
    'seed': 5,
    'devices': [
        device('laptop', randomization='none', sessions=[(0, 1800)], pnl=['office']),
        device('phone', sessions=[(0, 1200), (4000, 5200)], pnl=['home', 'office'], burst=3),
        device('rotator', sessions=[(100, 1300)], burst=2, pnl=['a', 'b', 'c', 'd'],
               pnl_policy='rotating-subset', pnl_subset_size=2),
    ],
}


class CliTestCase(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name
        self.config_patch = patch.object(config, 'config_path', Path(self.dir) / 'config' / 'config.json')
        self.config_patch.start()
        config.data = DEFAULT_CONFIG.copy()

    def tearDown(self):
        self.config_patch.stop()
        config.data = DEFAULT_CONFIG.copy()
        self.tmp.cleanup()

    def path(self, name):
        return os.path.join(self.dir, name)

    def run_cli(self, *argv):
        out = io.StringIO()
        with redirect_stdout(out):
            code = main(list(argv))
        return (code, out.getvalue())

    def synth(self, fmt='pcap'):
        scenario_path = self.path('small.scenario')
        with open(scenario_path, 'w', encoding='utf-8') as f:
            json.dump(SCENARIO, f)
        capture = self.path(f'capture.{fmt}')
        (code, _) = self.run_cli('synth', '--scenario', scenario_path, '--out', capture, '--format', fmt,
                                 '--truth', self.path('truth.jsonl'))
        self.assertEqual(code, 0)
        return capture


class TestWorkflow(CliTestCase):

    def test_synth_analyze_verify_timeline(self):
        capture = self.synth()
        self.assertTrue(os.path.getsize(capture) > 0)
        out_dir = self.path('results')
        (code, out) = self.run_cli('analyze', '--in', capture, '--out-dir', out_dir)
        self.assertEqual(code, 0)
        report = json.loads(out)
        self.assertEqual(report['device_count_post_merge'], 3)
        self.assertEqual(sorted(os.listdir(out_dir)),
                         ['devices.json', 'instances.jsonl', 'merged.json', 'report.json', 'timeline.csv'])

        (code, _) = self.run_cli('verify', out_dir, '--truth', self.path('truth.jsonl'))
        self.assertEqual(code, 0)

        (code, out) = self.run_cli('timeline', '--report', os.path.join(out_dir, 'report.json'), '--ids', '0')
        self.assertEqual(code, 0)
        self.assertEqual(out.splitlines()[0], 'device_id,start,end')
        self.assertTrue(all(line.startswith('0,') for line in out.splitlines()[1:]))

        svg = self.path('timeline.svg')
        (code, _) = self.run_cli('timeline', '--report', os.path.join(out_dir, 'report.json'), '--format', 'svg',
                                 '--stage', 'pre', '--out', svg)
        self.assertEqual(code, 0)
        with open(svg, 'r', encoding='utf-8') as f:
            self.assertIn('<svg', f.read())

    def test_staged_commands_match_analyze(self):
        capture = self.synth('records')
        (_, out) = self.run_cli('analyze', '--in', capture)
        report = json.loads(out)

        instances = self.path('instances.jsonl')
        devices = self.path('devices.json')
        merged = self.path('merged.json')
        self.assertEqual(self.run_cli('instances', '--in', capture, '--out', instances)[0], 0)
        self.assertEqual(self.run_cli('devices', '--in', instances, '--out', devices)[0], 0)
        self.assertEqual(self.run_cli('merge', '--in', devices, '--out', merged)[0], 0)
        with open(instances, 'r', encoding='utf-8') as f:
            self.assertEqual(len(f.read().splitlines()), report['instance_count'])
        with open(devices, 'r', encoding='utf-8') as f:
            self.assertEqual(len(json.load(f)['devices']), report['device_count_pre_merge'])
        with open(merged, 'r', encoding='utf-8') as f:
            self.assertEqual(len(json.load(f)['devices']), report['device_count_post_merge'])

    def test_devices_straight_from_capture(self):
        capture = self.synth()
        (code, out) = self.run_cli('devices', '--in', capture, '--metric', 'overlap', '--inclusive')
        self.assertEqual(code, 0)
        document = json.loads(out)
        self.assertEqual(document['parameters']['similarity_metric'], 'overlap')
        self.assertEqual(document['parameters']['similarity_comparator'], 'inclusive')

    def test_anonymize_and_stats(self):
        capture = self.synth()
        hidden = self.path('hidden.pcap')
        (code, _) = self.run_cli('anonymize', '--in', capture, '--out', hidden, '--salt-hex', SALT, '--format', 'pcap')
        self.assertEqual(code, 0)
        (_, plain_stats) = self.run_cli('stats', '--in', capture, '--csv')
        (_, hidden_stats) = self.run_cli('stats', '--in', hidden, '--csv')
        self.assertEqual(plain_stats, hidden_stats)
        self.assertIn('Supported Rates', plain_stats)

        (_, plain) = self.run_cli('analyze', '--in', capture)
        (_, anonymized) = self.run_cli('analyze', '--in', hidden)
        for key in ('instance_count', 'device_count_pre_merge', 'device_count_post_merge'):
            self.assertEqual(json.loads(plain)[key], json.loads(anonymized)[key])

    def test_analysis_flags_reach_the_report(self):
        capture = self.synth()
        (code, out) = self.run_cli('analyze', '--in', capture, '--gap', '300', '--scope', 'all', '--no-wraparound')
        self.assertEqual(code, 0)
        parameters = json.loads(out)['parameters']
        self.assertEqual(parameters['merge_gap_s'], 300.0)
        self.assertEqual(parameters['merge_scope'], 'all')
        self.assertFalse(parameters['sequence_wraparound'])

    def test_config_file_overlay(self):
        capture = self.synth()
        overlay = self.path('overlay.json')
        with open(overlay, 'w', encoding='utf-8') as f:
            json.dump({'merge_overlap': 0.75}, f)
        (code, out) = self.run_cli('--config', overlay, 'analyze', '--in', capture)
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)['parameters']['merge_overlap'], 0.75)


class TestConfigCommand(CliTestCase):

    def test_set_show_reset(self):
        self.assertEqual(self.run_cli('config', 'set', 'merge_gap_s', '900')[0], 0)
        with open(config.config_path, 'r', encoding='utf-8') as f:
            self.assertEqual(json.load(f)['merge_gap_s'], 900.0)
        self.assertEqual(self.run_cli('config', 'show')[0], 0)
        self.assertEqual(self.run_cli('config', 'reset')[0], 0)
        self.assertEqual(config.data, DEFAULT_CONFIG)

    def test_invalid_value(self):
        self.assertEqual(self.run_cli('config', 'set', 'merge_overlap', '2')[0], 2)


class TestExitCodes(CliTestCase):

    def test_no_command(self):
        self.assertEqual(self.run_cli()[0], 1)

    def test_version(self):
        self.assertEqual(self.run_cli('--version')[0], 0)

    def test_missing_input(self):
        self.assertEqual(self.run_cli('analyze', '--in', self.path('missing.pcap'))[0], 1)

    def test_bad_capture(self):
        garbage = self.path('garbage.pcap')
        with open(garbage, 'wb') as f:
            f.write(b'\x00' * 64)
        self.assertEqual(self.run_cli('stats', '--in', garbage)[0], 1)

    def test_bad_salt(self):
        capture = self.synth()
        code = self.run_cli('anonymize', '--in', capture, '--out', self.path('x.pcap'), '--salt-hex', 'abc')[0]
        self.assertEqual(code, 2)

    def test_missing_config_file(self):
        self.assertEqual(self.run_cli('--config', self.path('nope.json'), 'stats', '--in', 'x')[0], 2)

    def test_bad_threshold(self):
        capture = self.synth()
        self.assertEqual(self.run_cli('analyze', '--in', capture, '--threshold', '1.5')[0], 2)

    def test_bad_scenario(self):
        scenario_path = self.path('bad.scenario')
        with open(scenario_path, 'w', encoding='utf-8') as f:
            json.dump({'devices': [device('x', burst=0)]}, f)
        code = self.run_cli('synth', '--scenario', scenario_path, '--out', self.path('x.pcap'))[0]
        self.assertEqual(code, 2)

    def test_unknown_timeline_id(self):
        capture = self.synth()
        out_dir = self.path('results')
        self.run_cli('analyze', '--in', capture, '--out-dir', out_dir)
        code = self.run_cli('timeline', '--report', os.path.join(out_dir, 'report.json'), '--ids', '99')[0]
        self.assertEqual(code, 1)

    def test_tampered_artifacts(self):
        capture = self.synth()
        out_dir = self.path('results')
        self.run_cli('analyze', '--in', capture, '--out-dir', out_dir)
        report_path = os.path.join(out_dir, 'report.json')
        with open(report_path, 'r', encoding='utf-8') as f:
            data = json.load(f)
        data['instance_count'] -= 1
        with open(report_path, 'w', encoding='utf-8') as f:
            json.dump(data, f)
        self.assertEqual(self.run_cli('verify', out_dir)[0], 3)


if __name__ == '__main__':
    unittest.main()
