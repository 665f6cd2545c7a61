"""
Unit tests for the capture formats: pcap and JSON-lines records.
"""
import io
import struct
import sys
import unittest
from pathlib import Path

import numpy as np

# Add project root to path if needed
project_root = Path(__file__).resolve().parent.parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from probetracker.core.capture import CaptureRecord, FormatRegistry, read_capture, write_capture
from probetracker.core.capture.dot11 import MINIMAL_RADIOTAP, decode_frame, encode_frame, parse_elements
from probetracker.core.capture.pcap import split_timestamp, timestamp_from_micros
from probetracker.core.errors import CaptureFormatError, CaptureWriteError, FrameDecodeError
from probetracker.core.frames import WpsInfo
from probetracker.report.artifacts import devices_from_document, instance_from_dict
from probetracker.synth import generate
from probetracker.tests.assertions.fixtures import capture_bytes, device, probe, scenario


def pcap_file(packets, linktype=127):
    """Hand-built little-endian pcap from (timestamp, packet bytes) pairs."""
    out = struct.pack('<IHHiIII', 0xA1B2C3D4, 2, 4, 0, 0, 65535, linktype)
    for (ts, packet) in packets:
        (sec, usec) = split_timestamp(ts)
        out += struct.pack('<IIII', sec, usec, len(packet), len(packet)) + packet
    return out


def ten_thousand_probes():
    devices = [device(f'd{i}', burst=4, period=10.0, sessions=[(0, 2500)], pnl=[f'net-{i}'],
                      wps={'uuid_e': f'{i:032x}', 'name': f'dev {i}'} if i % 3 == 0 else None)
               for i in range(10)]
    return generate(scenario(devices, seed=11))[0]


class TestPcapRoundTrip(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.records = ten_thousand_probes()

    def test_probe_count(self):
        self.assertEqual(len(self.records), 10000)

    def test_byte_identical_rewrite(self):
        first = capture_bytes(self.records, 'pcap')
        (decoded, stats) = read_capture(first)
        self.assertEqual(stats.probes, 10000)
        self.assertEqual(stats.warnings, [])
        self.assertEqual(capture_bytes(decoded, 'pcap'), first)
        for record in decoded:
            self.assertEqual(encode_frame(record.probe), record.raw_frame)

    def test_decoded_probes_equal_generated(self):
        (decoded, _) = read_capture(capture_bytes(self.records, 'pcap'), fmt='pcap')
        self.assertEqual([r.probe for r in decoded], [r.probe for r in self.records])

    def test_records_round_trip(self):
        (decoded, stats) = read_capture(capture_bytes(self.records[:2000], 'records'))
        self.assertEqual(stats.probes, 2000)
        self.assertEqual([r.probe for r in decoded], [r.probe for r in self.records[:2000]])


class TestTimestamps(unittest.TestCase):

    def test_microseconds_survive(self):
        for micros in (0, 1, 999_999, 1_600_000_000_123_456, 1_600_000_000_999_999):
            ts = timestamp_from_micros(micros)
            self.assertEqual(split_timestamp(ts), divmod(micros, 1_000_000))


class TestPcapDecoding(unittest.TestCase):

    def setUp(self):
        self.probe = probe(sn=77, ts=1600000000.5, ssid=b'home',
                           wps=WpsInfo(uuid_e=bytes(range(16)), device_name=b'phone'))
        self.frame = encode_frame(self.probe)

    def test_radiotap_fcs_flag_strips_fcs(self):
        radiotap = struct.pack('<BBHIB', 0, 0, 9, 0x02, 0x10)
        data = pcap_file([(1600000000.5, radiotap + self.frame + b'\xde\xad\xbe\xef')])
        (records, stats) = read_capture(data)
        self.assertEqual(stats.probes, 1)
        self.assertEqual(records[0].probe, self.probe)

    def test_forced_fcs_without_radiotap(self):
        data = pcap_file([(1600000000.5, self.frame + b'\x01\x02\x03\x04')], linktype=105)
        (records, _) = read_capture(data, fcs_mode='present')
        self.assertEqual(records[0].probe, self.probe)
        (records, _) = read_capture(data, fcs_mode='absent')
        self.assertNotEqual(records[0].probe.elements, self.probe.elements)

    def test_non_probe_frames_are_skipped(self):
        beacon = bytes((0x80, 0x00)) + self.frame[2:]
        data = pcap_file([(1.0, MINIMAL_RADIOTAP + beacon), (2.0, MINIMAL_RADIOTAP + self.frame)])
        (records, stats) = read_capture(data)
        self.assertEqual(len(records), 1)
        self.assertEqual(stats.skipped, 1)

    def test_short_frame_is_undecodable(self):
        data = pcap_file([(1.0, MINIMAL_RADIOTAP + self.frame[:10]), (2.0, MINIMAL_RADIOTAP + self.frame)])
        (records, stats) = read_capture(data)
        self.assertEqual(len(records), 1)
        self.assertEqual(stats.undecodable, 1)
        self.assertEqual(len(stats.warnings), 1)

    def test_truncated_elements_keep_complete_ones(self):
        broken = self.frame + bytes((221, 40, 1, 2, 3))
        data = pcap_file([(1.0, MINIMAL_RADIOTAP + broken)])
        (records, stats) = read_capture(data)
        self.assertEqual(stats.truncated, 1)
        self.assertTrue(records[0].probe.truncated)
        self.assertEqual(records[0].probe.elements, self.probe.elements)

    def test_truncated_packet_at_end_of_file(self):
        data = pcap_file([(1.0, MINIMAL_RADIOTAP + self.frame)])
        data += struct.pack('<IIII', 2, 0, 500, 500) + b'\x00' * 20
        (records, stats) = read_capture(data)
        self.assertEqual(len(records), 1)
        self.assertTrue(any('truncated' in w for w in stats.warnings))

    def test_container_errors(self):
        with self.assertRaises(CaptureFormatError):
            read_capture(b'\x00\x01\x02\x03' * 8)
        with self.assertRaises(CaptureFormatError):
            read_capture(pcap_file([])[:10], fmt='pcap')
        with self.assertRaises(CaptureFormatError):
            read_capture(pcap_file([], linktype=1))
        with self.assertRaises(CaptureFormatError):
            read_capture(b'{"ts": 1}\n')
        with self.assertRaises(CaptureFormatError):
            FormatRegistry.get('pcapng')

    def test_missing_file(self):
        with self.assertRaises(FileNotFoundError):
            read_capture('/nonexistent/capture.pcap')

    def test_empty_capture(self):
        (records, stats) = read_capture(b'')
        self.assertEqual(records, [])
        (records, _) = read_capture(pcap_file([]))
        self.assertEqual(records, [])

    def test_write_to_path_and_sniff(self):
        import tempfile
        with tempfile.TemporaryDirectory() as tmp:
            path = str(Path(tmp) / 'one.pcap')
            written = write_capture([CaptureRecord(probe=self.probe)], path, 'pcap')
            self.assertEqual(written, Path(path).stat().st_size)
            (records, _) = read_capture(path)
            self.assertEqual(records[0].probe, self.probe)

    def test_timestamps_outside_pcap_range(self):
        for ts in (-1.0, 2.0 ** 32, float('nan')):
            with self.subTest(ts=ts):
                with self.assertRaises(CaptureWriteError) as cm:
                    write_capture([CaptureRecord(probe=probe(ts=ts))], io.BytesIO(), 'pcap')
                self.assertEqual(cm.exception.bytes_written, 24)
        last = 2.0 ** 32 - 1
        (records, _) = read_capture(capture_bytes([CaptureRecord(probe=probe(ts=last))], 'pcap'))
        self.assertEqual(records[0].probe.timestamp, last)


class TestRecordsDecoding(unittest.TestCase):

    def test_malformed_lines_are_format_errors(self):
        good = capture_bytes([CaptureRecord(probe=probe(sn=7, ts=1.5, ssid=b'home'))])
        bad_lines = [b'[]', b'5', b'"x"', b'null',
                     good.replace(b'"mac":"', b'"mac":5,"x":"'),
                     good.replace(b'"sn":7', b'"sn":"7"'),
                     good.replace(b'"sn":7', b'"sn":true'),
                     good.replace(b'"wps":null', b'"wps":[]'),
                     good.replace(b'"ies":[', b'"ies":[3,')]
        for line in bad_lines:
            self.assertNotEqual(line, good)
            with self.subTest(line=line):
                with self.assertRaises(CaptureFormatError):
                    read_capture(line + b'\n', fmt='records')
        (records, _) = read_capture(good, fmt='records')
        self.assertEqual(records[0].probe.sequence_number, 7)

    def test_non_object_artifacts(self):
        for data in ([], 'instance', 3):
            with self.subTest(data=data):
                with self.assertRaises(CaptureFormatError):
                    instance_from_dict(data)
                with self.assertRaises(CaptureFormatError):
                    devices_from_document(data)


class TestDecoderFuzz(unittest.TestCase):

    def test_mutated_frames_fail_cleanly(self):
        rng = np.random.default_rng(5)
        base = encode_frame(probe(sn=5, ssid=b'office', wps=WpsInfo(uuid_e=b'\x01' * 16, model=b'X')))
        decoded = 0
        for _ in range(3000):
            frame = bytearray(base)
            for _ in range(int(rng.integers(1, 6))):
                frame[int(rng.integers(0, len(frame)))] = int(rng.integers(0, 256))
            frame = bytes(frame[:int(rng.integers(0, len(frame) + 1))])
            try:
                decode_frame(frame, 1.0)
                decoded += 1
            except FrameDecodeError:
                pass
        self.assertGreater(decoded, 0)

    def test_parse_elements_on_random_bytes(self):
        rng = np.random.default_rng(9)
        for _ in range(1000):
            body = rng.bytes(int(rng.integers(0, 64)))
            (elements, truncated) = parse_elements(body)
            consumed = sum(2 + len(e.payload) for e in elements)
            self.assertLessEqual(consumed, len(body))
            self.assertEqual(truncated, consumed != len(body))


try:
    from scapy.layers.dot11 import Dot11, Dot11Elt
    HAVE_SCAPY = True
except ImportError:
    HAVE_SCAPY = False


@unittest.skipUnless(HAVE_SCAPY, 'scapy not installed')
class TestScapyOracle(unittest.TestCase):
    """An independent dissector must read the encoder's frames the same way."""

    def test_encoded_frames(self):
        records = generate(scenario([
            device('a', pnl=['home', 'work'], burst=2),
            device('b', randomization='per-probe', wps={'uuid_e': 'ab' * 16, 'name': 'tab'}),
        ], seed=3))[0][:200]
        for record in records:
            ours = record.probe
            packet = Dot11(encode_frame(ours))
            self.assertEqual((packet.type, packet.subtype), (0, 4))
            self.assertEqual(packet.addr2, str(ours.mac))
            self.assertEqual(packet.SC >> 4, ours.sequence_number)
            elements = []
            layer = packet.payload
            while layer is not None and layer.__class__.__name__ != 'NoPayload':
                if isinstance(layer, Dot11Elt):
                    elements.append((layer.ID, layer.len))
                layer = layer.payload if hasattr(layer, 'payload') else None
            self.assertEqual(elements, [(e.tag_id, len(e.payload)) for e in ours.elements])


if __name__ == '__main__':
    unittest.main()
