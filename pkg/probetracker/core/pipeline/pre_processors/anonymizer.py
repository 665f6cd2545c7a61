from typing import Optional

from probetracker.core.anonymizer import AnonymizationKey, anonymize_probe
from probetracker.core.capture.base import CaptureRecord
from ..models import AnalysisResult
from ..processor_base import PreProcessor


class ProbeAnonymizer(PreProcessor):

    def __init__(self, key: Optional[AnonymizationKey] = None):
        self.key = key or AnonymizationKey.random()

    def can_handle(self, record: CaptureRecord) -> bool:
        return True

    def process(self, record: CaptureRecord, result: AnalysisResult) -> Optional[CaptureRecord]:
        return CaptureRecord(probe=anonymize_probe(record.probe, self.key))
