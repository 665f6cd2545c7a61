"""
Validated parameter sets for the analysis stages.
"""
from dataclasses import asdict, dataclass, field
from typing import Any, Dict

from probetracker.core.errors import ConfigError

METRICS = ('jaccard', 'overlap')
COMPARATORS = ('strict', 'inclusive')
MERGE_SCOPES = ('randomized', 'all')


@dataclass(frozen=True)
class SimilarityConfig:
    metric: str = 'jaccard'
    threshold: float = 0.5
    comparator: str = 'strict'

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ConfigError(f"must be one of {', '.join(METRICS)}, got {self.metric!r}", 'similarity_metric')
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError(f'must lie in [0, 1], got {self.threshold}', 'similarity_threshold')
        if self.comparator not in COMPARATORS:
            raise ConfigError(f"must be one of {', '.join(COMPARATORS)}, got {self.comparator!r}",
                              'similarity_comparator')

    def accepts(self, score: float) -> bool:
        if self.comparator == 'inclusive':
            return score >= self.threshold
        return score > self.threshold


@dataclass(frozen=True)
class MergeConfig:
    gap_s: float = 600.0
    pad_s: float = 30.0
    overlap: float = 0.5
    scope: str = 'randomized'

    def __post_init__(self):
        if self.gap_s <= 0:
            raise ConfigError(f'must be positive, got {self.gap_s}', 'merge_gap_s')
        if self.pad_s < 0:
            raise ConfigError(f'must not be negative, got {self.pad_s}', 'merge_pad_s')
        if not 0.0 < self.overlap <= 1.0:
            raise ConfigError(f'must lie in (0, 1], got {self.overlap}', 'merge_overlap')
        if self.scope not in MERGE_SCOPES:
            raise ConfigError(f"must be one of {', '.join(MERGE_SCOPES)}, got {self.scope!r}", 'merge_scope')


@dataclass(frozen=True)
class InstanceConfig:
    gap_s: float = 10.0
    wraparound: bool = True

    def __post_init__(self):
        if self.gap_s < 0:
            raise ConfigError(f'must not be negative (0 = unbounded), got {self.gap_s}', 'instance_gap_s')


@dataclass(frozen=True)
class AnalysisSettings:
    instances: InstanceConfig = field(default_factory=InstanceConfig)
    similarity: SimilarityConfig = field(default_factory=SimilarityConfig)
    merge: MergeConfig = field(default_factory=MergeConfig)
    fcs_mode: str = 'auto'
    anonymize: bool = False

    def __post_init__(self):
        if self.fcs_mode not in ('auto', 'present', 'absent'):
            raise ConfigError(f"must be auto, present or absent, got {self.fcs_mode!r}", 'fcs_mode')

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
