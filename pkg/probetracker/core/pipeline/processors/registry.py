import logging
from typing import Dict, List, Type

from ..models import AnalysisResult
from ..processor_base import Processor

logger = logging.getLogger(__name__)


class ProcessorRegistry:
    _processors_by_priority: Dict[int, List[Processor]] = {}
    _initialized: bool = False

    @classmethod
    def _initialize(cls):
        if cls._initialized:
            return
        cls._initialized = True
        from . import instance_grouper, device_clusterer, temporal_merger  # noqa: F401

    @classmethod
    def register_processor(cls, processor_class: Type[Processor], priority: int = 100) -> None:
        bucket = cls._processors_by_priority.setdefault(priority, [])
        if any(type(existing) is processor_class for existing in bucket):
            return
        processor = processor_class()
        bucket.append(processor)
        logger.debug('Registered processor: %s with priority %d', processor.name, priority)

    @classmethod
    def processors(cls) -> List[Processor]:
        cls._initialize()
        ordered = []
        for priority in sorted(cls._processors_by_priority.keys()):
            ordered.extend(cls._processors_by_priority[priority])
        return ordered

    @classmethod
    def process_result(cls, result: AnalysisResult) -> bool:
        """
        Runs every applicable stage processor in priority order. The first
        failure is recorded on the result and stops the remaining stages.

        Returns:
            True if all stages succeeded
        """
        for processor in cls.processors():
            if not processor.can_handle(result):
                logger.debug('Skipping processor %s', processor.name)
                continue
            try:
                processor.process(result)
            except Exception as e:
                error_msg = f'Error during processing by {processor.name}: {e}'
                logger.error(error_msg)
                result.add_error(error_msg)
                result.attributes['exception'] = e
                return False
            result.add_processor(processor.name)
        return True
