"""
Main pipeline for analysing probe-request captures.
"""
import logging
from typing import List, Optional

from probetracker.core.settings import AnalysisSettings
from .models import AnalysisResult
from .processor_base import GlobalPreProcessor, PostProcessor, PreProcessor
from .processors.registry import ProcessorRegistry

logger = logging.getLogger(__name__)


class Pipeline:
    """
    Main pipeline: decode, filter and rewrite records, run the registered
    stage processors in priority order, then check the result.
    """

    def __init__(self, settings: Optional[AnalysisSettings] = None):
        """Initializes the pipeline with empty lists of processors."""
        self.settings = settings or AnalysisSettings()
        self.global_preprocessor: Optional[GlobalPreProcessor] = None
        self.pre_processors: List[PreProcessor] = []
        self.post_processors: List[PostProcessor] = []

    def set_global_preprocessor(self, preprocessor: GlobalPreProcessor) -> None:
        self.global_preprocessor = preprocessor

    def add_preprocessor(self, preprocessor: PreProcessor) -> None:
        """
        Adds a record pre-processor. Pre-processors run in insertion order.

        Args:
            preprocessor: The pre-processor to add
        """
        self.pre_processors.append(preprocessor)

    def add_postprocessor(self, postprocessor: PostProcessor) -> None:
        self.post_processors.append(postprocessor)

    def _run_preprocessors(self, result: AnalysisResult) -> None:
        for pre_processor in self.pre_processors:
            kept = []
            try:
                for record in result.records:
                    if pre_processor.can_handle(record):
                        record = pre_processor.process(record, result)
                    if record is not None:
                        kept.append(record)
            except Exception as e:
                error_msg = f'Error in pre-processor {pre_processor.name}: {e}'
                logger.error(error_msg)
                result.add_error(error_msg)
                result.attributes['exception'] = e
                return
            result.records = kept
            result.add_preprocessor(pre_processor.name)

    def run(self, source) -> AnalysisResult:
        """
        Runs the pipeline on a capture.

        Args:
            source: path, bytes or binary stream of a capture

        Returns:
            AnalysisResult; check has_errors() before using it
        """
        if not self.global_preprocessor:
            raise ValueError('No global pre-processor set')
        result = AnalysisResult(settings=self.settings)
        try:
            self.global_preprocessor.process(source, result)
            result.add_preprocessor(self.global_preprocessor.name)
        except Exception as e:
            error_msg = f'Error in global pre-processor {self.global_preprocessor.name}: {e}'
            logger.error(error_msg)
            result.add_error(error_msg)
            result.attributes['exception'] = e
            return result
        logger.info('Decoded %d probe requests', len(result.records))

        self._run_preprocessors(result)
        if result.has_errors():
            return result

        ProcessorRegistry.process_result(result)
        if result.has_errors():
            return result

        for post_processor in self.post_processors:
            if not post_processor.can_handle(result):
                continue
            try:
                post_processor.process(result)
                result.add_postprocessor(post_processor.name)
            except Exception as e:
                error_msg = f'Error in post-processor {post_processor.name}: {e}'
                logger.error(error_msg)
                result.add_error(error_msg)
                result.attributes['exception'] = e
        return result
