import logging

from probetracker.core.scan_instance import group_instances
from ..models import AnalysisResult
from ..processor_base import Processor
from .decorator import register_processor

logger = logging.getLogger(__name__)


@register_processor(priority=10)
class InstanceGrouper(Processor):

    def can_handle(self, result: AnalysisResult) -> bool:
        return result.instances is None

    def process(self, result: AnalysisResult) -> None:
        result.instances = group_instances(result.records, result.settings.instances)
        logger.info('Identified %d scan instances', len(result.instances))
