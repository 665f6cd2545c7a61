"""
Global pre-processor decoding the capture into records.
"""
from probetracker.core.capture import CaptureRecord, ReadStats, read_capture
from ..models import AnalysisResult
from ..processor_base import GlobalPreProcessor


class CaptureDecoder(GlobalPreProcessor):
    """
    Reads a pcap or record file (format sniffed unless given). Records that
    are already decoded, such as generator output, are taken as they are.
    """

    def __init__(self, fmt: str = None):
        self.fmt = fmt

    def process(self, source, result: AnalysisResult) -> None:
        if isinstance(source, (list, tuple)) and all(isinstance(r, CaptureRecord) for r in source):
            result.records = list(source)
            result.read_stats = ReadStats(probes=len(source))
            return
        (records, stats) = read_capture(source, self.fmt, result.settings.fcs_mode)
        result.records = records
        result.read_stats = stats
