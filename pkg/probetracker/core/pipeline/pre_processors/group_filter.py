import logging
from typing import Optional

from probetracker.core.capture.base import CaptureRecord
from probetracker.core.frames import is_multicast
from ..models import AnalysisResult
from ..processor_base import PreProcessor

logger = logging.getLogger(__name__)


class GroupAddressFilter(PreProcessor):
    """
    Drops probes sent from group (multicast) source addresses. They are
    kept aside on result.group_records so the report can count them.
    """

    def can_handle(self, record: CaptureRecord) -> bool:
        return is_multicast(record.probe.mac)

    def process(self, record: CaptureRecord, result: AnalysisResult) -> Optional[CaptureRecord]:
        logger.debug('Excluding probe from group address %s', record.probe.mac)
        result.group_records.append(record)
        return None
