from .models import AnalysisResult, AppearanceCluster, DeviceCluster, ScanInstance, TemporalProfile
from .processor_base import BaseProcessor, GlobalPreProcessor, PostProcessor, PreProcessor, Processor
from .pipeline import Pipeline

__all__ = [
    'AnalysisResult',
    'AppearanceCluster',
    'DeviceCluster',
    'ScanInstance',
    'TemporalProfile',
    'BaseProcessor',
    'PreProcessor',
    'Processor',
    'PostProcessor',
    'GlobalPreProcessor',
    'Pipeline',
]
