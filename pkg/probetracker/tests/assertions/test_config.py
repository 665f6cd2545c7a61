"""
Unit tests for configuration loading and settings resolution.
"""
import json
import sys
import tempfile
import unittest
from pathlib import Path

# Add project root to path if needed
project_root = Path(__file__).resolve().parent.parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from probetracker.core.config import DEFAULT_CONFIG, Config, coerce_value, settings_to_mapping
from probetracker.core.errors import ConfigError
from probetracker.core.settings import AnalysisSettings, MergeConfig


class TestConfig(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = Path(self.tmp.name) / 'nested' / 'config.json'

    def tearDown(self):
        self.tmp.cleanup()

    def test_defaults_without_file(self):
        config = Config(self.path)
        self.assertEqual(config.data, DEFAULT_CONFIG)
        self.assertFalse(config.load())
        self.assertEqual(config.resolve(), AnalysisSettings())

    def test_set_saves_and_reloads(self):
        config = Config(self.path)
        self.assertEqual(config.set('merge_gap_s', '900'), 900.0)
        self.assertEqual(config.set('sequence_wraparound', 'off'), False)
        reloaded = Config(self.path)
        self.assertEqual(reloaded.get('merge_gap_s'), 900.0)
        self.assertFalse(reloaded.get('sequence_wraparound'))
        self.assertFalse(reloaded.resolve().instances.wraparound)

    def test_set_rejects_invalid(self):
        config = Config(self.path)
        with self.assertRaises(ConfigError):
            config.set('merge_overlap', '0')
        with self.assertRaises(ConfigError):
            config.set('similarity_metric', 'cosine')
        with self.assertRaises(ConfigError):
            config.set('no_such_key', '1')
        self.assertFalse(self.path.exists())
        self.assertEqual(config.get('merge_overlap'), 0.5)

    def test_reset(self):
        config = Config(self.path)
        config.set('similarity_threshold', 0.7)
        config.reset()
        self.assertEqual(Config(self.path).data, DEFAULT_CONFIG)

    def test_unknown_keys_warn(self):
        self.path.parent.mkdir(parents=True)
        self.path.write_text(json.dumps({'merge_pad_s': 10, 'colour': 'red'}), encoding='utf-8')
        with self.assertLogs('probetracker.core.config', 'WARNING') as logs:
            config = Config(self.path)
        self.assertEqual(config.get('merge_pad_s'), 10.0)
        self.assertNotIn('colour', config.data)
        self.assertTrue(any('colour' in line for line in logs.output))

    def test_unreadable_file(self):
        self.path.parent.mkdir(parents=True)
        self.path.write_text('{not json', encoding='utf-8')
        with self.assertRaises(ConfigError):
            Config(self.path)
        self.path.write_text('[1, 2]', encoding='utf-8')
        with self.assertRaises(ConfigError):
            Config(self.path)

    def test_resolve_precedence(self):
        config = Config(self.path)
        config.set('merge_scope', 'all')
        config.set('merge_overlap', 0.8)
        settings = config.resolve({'merge_overlap': 0.3, 'merge_gap_s': None})
        self.assertEqual(settings.merge, MergeConfig(gap_s=600.0, overlap=0.3, scope='all'))

    def test_resolve_validates(self):
        with self.assertRaises(ConfigError) as cm:
            Config(self.path).resolve({'similarity_threshold': 2.0})
        self.assertEqual(cm.exception.key_path, 'similarity_threshold')

    def test_mapping_round_trip(self):
        settings = Config(self.path).resolve({'instance_gap_s': 0, 'similarity_comparator': 'inclusive'})
        echoed = settings_to_mapping(settings)
        self.assertEqual(echoed['instance_gap_s'], 0.0)
        self.assertEqual(Config(self.path).resolve(echoed), settings)


class TestCoerce(unittest.TestCase):

    def test_types(self):
        self.assertIs(coerce_value('anonymize', 'yes'), True)
        self.assertIs(coerce_value('anonymize', False), False)
        self.assertEqual(coerce_value('merge_pad_s', '12.5'), 12.5)
        self.assertEqual(coerce_value('fcs_mode', 'present'), 'present')

    def test_errors(self):
        for (key, value) in (('anonymize', 'maybe'), ('merge_pad_s', 'wide'), ('merge_pad_s', True),
                             ('fcs_mode', 3), ('nope', 1)):
            with self.subTest(key=key, value=value):
                with self.assertRaises(ConfigError) as cm:
                    coerce_value(key, value)
                self.assertEqual(cm.exception.key_path, key)


if __name__ == '__main__':
    unittest.main()
