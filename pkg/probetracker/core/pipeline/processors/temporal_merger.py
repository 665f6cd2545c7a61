import logging

from probetracker.core.temporal import merge_devices
from ..models import AnalysisResult
from ..processor_base import Processor
from .decorator import register_processor

logger = logging.getLogger(__name__)


@register_processor(priority=30)
class TemporalMerger(Processor):

    def can_handle(self, result: AnalysisResult) -> bool:
        return result.devices is not None and result.merged_devices is None

    def process(self, result: AnalysisResult) -> None:
        result.merged_devices = merge_devices(result.devices, result.settings.merge)
        logger.info('Temporal pattern matching: %d -> %d devices', len(result.devices),
                    len(result.merged_devices))
