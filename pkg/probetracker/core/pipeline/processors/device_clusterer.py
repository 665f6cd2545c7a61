import logging

from probetracker.core.device_id import cluster_devices
from ..models import AnalysisResult
from ..processor_base import Processor
from .decorator import register_processor

logger = logging.getLogger(__name__)


@register_processor(priority=20)
class DeviceClusterer(Processor):

    def can_handle(self, result: AnalysisResult) -> bool:
        return result.instances is not None and result.devices is None

    def process(self, result: AnalysisResult) -> None:
        result.devices = cluster_devices(result.instances, result.settings.similarity)
        singletons = sum(1 for device in result.devices if device.singleton)
        logger.info('Identified %d devices (%d single-instance)', len(result.devices), singletons)
