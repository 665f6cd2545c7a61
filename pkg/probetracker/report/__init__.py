from .report import AnalysisReport, build_report
from .timeline import render_timeline
from .stats import stats_csv, stats_table, summary_table

__all__ = ['AnalysisReport', 'build_report', 'render_timeline', 'stats_csv', 'stats_table', 'summary_table']
