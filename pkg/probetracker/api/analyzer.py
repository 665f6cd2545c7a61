"""
Programmatic entry point running the full analysis pipeline.
"""
import logging
from typing import Any, Dict, Optional, Tuple

from probetracker.core.anonymizer import AnonymizationKey
from probetracker.core.config import Config
from probetracker.core.errors import ProbeTrackerError
from probetracker.core.pipeline.models import AnalysisResult
from probetracker.core.pipeline.pipeline import Pipeline
from probetracker.core.pipeline.post_processors import ConsistencyChecker
from probetracker.core.pipeline.pre_processors import CaptureDecoder, GroupAddressFilter, ProbeAnonymizer
from probetracker.core.settings import AnalysisSettings
from probetracker.report.report import AnalysisReport, build_report

logger = logging.getLogger(__name__)


def _setup_pipeline(settings: AnalysisSettings, key: Optional[AnonymizationKey] = None,
                    fmt: Optional[str] = None) -> Pipeline:
    """Set up the processing pipeline."""
    pipeline = Pipeline(settings)
    pipeline.set_global_preprocessor(CaptureDecoder(fmt))
    pipeline.add_preprocessor(GroupAddressFilter())
    if settings.anonymize:
        pipeline.add_preprocessor(ProbeAnonymizer(key))
    pipeline.add_postprocessor(ConsistencyChecker())
    return pipeline


class ProbeTrackerAPI:
    """Main class for running ProbeTracker programmatically."""

    def __init__(self, settings: Optional[AnalysisSettings] = None, config: Optional[Dict[str, Any]] = None,
                 key: Optional[AnonymizationKey] = None, fmt: Optional[str] = None,
                 logger: Optional[logging.Logger] = None):
        """
        Initialize the API.

        Args:
            settings: resolved settings; built from defaults and config when omitted
            config: flat configuration overrides (keys as in the config file)
            key: anonymization salt, random when anonymizing without one
            fmt: capture format, sniffed when omitted
            logger: Custom logger
        """
        if settings is None:
            settings = Config(load=False).resolve(config)
        elif config:
            raise ValueError('pass either settings or config overrides, not both')
        self.settings = settings
        self.key = key
        self.fmt = fmt
        self.logger = logger or logging.getLogger(__name__)
        self.pipeline = _setup_pipeline(settings, key, fmt)

    def run(self, source) -> AnalysisResult:
        """
        Run every stage on a capture.

        Args:
            source: path, bytes or binary stream

        Returns:
            AnalysisResult with instances, devices and merged devices

        Raises:
            ProbeTrackerError, OSError: the first stage failure; partial
                results are never returned
        """
        result = self.pipeline.run(source)
        if result.has_errors():
            error = result.attributes.get('exception')
            if isinstance(error, (ProbeTrackerError, OSError)):
                raise error
            raise ProbeTrackerError('; '.join(result.errors)) from error
        return result

    def analyze(self, source) -> AnalysisReport:
        return build_report(self.run(source))

    def analyze_with_result(self, source) -> Tuple[AnalysisResult, AnalysisReport]:
        result = self.run(source)
        report = build_report(result)
        self.logger.debug('Report: %d probes, %d instances, %d -> %d devices', report.probe_count,
                          report.instance_count, report.device_count_pre_merge, report.device_count_post_merge)
        return (result, report)


def analyze(capture, settings: Optional[AnalysisSettings] = None, key: Optional[AnonymizationKey] = None,
            fmt: Optional[str] = None) -> AnalysisReport:
    """
    Analyse a capture end to end.

    Args:
        capture: path, bytes or binary stream
        settings: analysis settings, defaults when omitted
        key: anonymization salt (used when settings.anonymize is set)
        fmt: capture format, sniffed when omitted

    Returns:
        AnalysisReport
    """
    return ProbeTrackerAPI(settings=settings, key=key, fmt=fmt).analyze(capture)
