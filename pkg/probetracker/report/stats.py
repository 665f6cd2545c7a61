"""
Console and CSV rendering of IE statistics and analysis summaries.
"""
import csv
import io
from typing import List

from rich.table import Table

from probetracker.core.fingerprint import StatRow
from .report import AnalysisReport


def stats_table(rows: List[StatRow], title: str = 'Probe request fields used for device fingerprint') -> Table:
    table = Table(title=title)
    table.add_column('Field', style='cyan')
    table.add_column('Count', justify='right')
    table.add_column('%', justify='right')
    for row in rows:
        table.add_row(row.field, str(row.count), row.percent_text())
    return table


def stats_csv(rows: List[StatRow]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(['field', 'count', 'percent'])
    for row in rows:
        writer.writerow([row.field, row.count, row.percent_text()])
    return out.getvalue()


def summary_table(report: AnalysisReport) -> Table:
    """Funnel counts plus the global/randomized split before and after merging."""
    table = Table(title='Analysis summary')
    table.add_column('Stage', style='cyan')
    table.add_column('Count', justify='right')
    for (label, count) in report.funnel():
        table.add_row(label, str(count))
    table.add_section()
    table.add_row('Devices with a global MAC', str(report.global_mac_devices))
    table.add_row('Randomized devices (before)', str(report.randomized_devices_pre))
    table.add_row('Randomized devices (after)', str(report.randomized_devices_post))
    table.add_row('Single-instance devices', str(report.singleton_devices))
    if report.group_probes:
        table.add_row('Probes from group addresses (excluded)', f'[yellow]{report.group_probes}[/yellow]')
    return table
