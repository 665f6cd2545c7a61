"""
Base classes for processors in the analysis pipeline.
"""
from abc import ABC, abstractmethod
from typing import Optional

from probetracker.core.capture.base import CaptureRecord
from .models import AnalysisResult


class BaseProcessor(ABC):
    """
    Base class for all processors.
    """

    @property
    def name(self) -> str:
        """
        The name of the processor used in logs and the result history.
        Defaults to the class name, but can be overridden.
        """
        return self.__class__.__name__


class PreProcessor(BaseProcessor):
    """
    Base class for record pre-processors, which filter or rewrite single
    records before any grouping happens.
    """

    @abstractmethod
    def can_handle(self, record: CaptureRecord) -> bool:
        """
        Checks if the pre-processor applies to the given record.

        Args:
            record: The record to check

        Returns:
            bool: True if the pre-processor should see the record
        """
        pass

    @abstractmethod
    def process(self, record: CaptureRecord, result: AnalysisResult) -> Optional[CaptureRecord]:
        """
        Processes the record.

        Args:
            record: The record to process
            result: The result being built, for bookkeeping

        Returns:
            The record to keep (possibly rewritten), or None to drop it
        """
        pass


class Processor(BaseProcessor):
    """
    Base class for stage processors, which derive instances and devices.
    """

    @abstractmethod
    def can_handle(self, result: AnalysisResult) -> bool:
        """
        Checks if the inputs this stage needs are present on the result.
        """
        pass

    @abstractmethod
    def process(self, result: AnalysisResult) -> None:
        pass


class PostProcessor(BaseProcessor):
    """
    Base class for post-processors, which check or annotate finished results.
    """

    def can_handle(self, result: AnalysisResult) -> bool:
        return not result.has_errors()

    @abstractmethod
    def process(self, result: AnalysisResult) -> None:
        """
        Processes the result.

        Args:
            result: The result to process
        """
        pass


class GlobalPreProcessor(ABC):
    """
    Special class for the global pre-processor, which turns the raw capture
    into the initial result.
    """

    @property
    def name(self) -> str:
        return self.__class__.__name__

    @abstractmethod
    def process(self, source, result: AnalysisResult) -> None:
        """
        Decodes the source into records on the result.

        Args:
            source: path, bytes or binary stream
            result: the result to fill
        """
        pass
