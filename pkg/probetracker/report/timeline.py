"""
Presence timeline rendering (CSV rows or a static SVG with one lane per device).
"""
import csv
import io
from typing import Dict, List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt  # noqa: E402

from probetracker.core.errors import ContractError  # noqa: E402
from .report import AnalysisReport, Interval  # noqa: E402

FORMATS = ('csv', 'svg')
STAGES = ('pre', 'post')

LANE_COLORS = {'global': '#1f77b4', 'randomized': '#d62728'}


def _select(report: AnalysisReport, stage: str) -> Tuple[Dict[int, List[Interval]], Dict[int, str]]:
    if stage == 'pre':
        return report.timelines_pre, report.classes_pre
    if stage == 'post':
        return report.timelines, report.classes
    raise ContractError(f"stage must be 'pre' or 'post', got {stage!r}")


def _check_ids(device_ids: Sequence[int], timelines: Dict[int, List[Interval]]) -> None:
    unknown = [i for i in device_ids if i not in timelines]
    if unknown:
        valid = sorted(timelines)
        shown = ', '.join(str(i) for i in valid[:50]) + (' ...' if len(valid) > 50 else '')
        raise ContractError(f"unknown device id(s) {', '.join(map(str, unknown))}; valid ids: {shown or 'none'}")


def timeline_csv(timelines: Dict[int, List[Interval]], device_ids: Sequence[int]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(['device_id', 'start', 'end'])
    for device_id in device_ids:
        for (start, end) in timelines[device_id]:
            writer.writerow([device_id, f'{start:.6f}', f'{end:.6f}'])
    return out.getvalue()


def timeline_svg(timelines: Dict[int, List[Interval]], classes: Dict[int, str], device_ids: Sequence[int],
                 title: Optional[str] = None) -> str:
    """
    Horizontal occurrence bars, one lane per device, over a shared time axis
    in seconds from the first appearance shown.
    """
    intervals = [iv for device_id in device_ids for iv in timelines[device_id]]
    origin = min((start for (start, _) in intervals), default=0.0)
    with matplotlib.rc_context({'svg.fonttype': 'none', 'svg.hashsalt': 'probetracker'}):
        (fig, ax) = plt.subplots(figsize=(10, 0.5 * len(device_ids) + 1.5))
        try:
            for (lane, device_id) in enumerate(device_ids):
                bars = [(start - origin, end - start) for (start, end) in timelines[device_id]]
                color = LANE_COLORS.get(classes.get(device_id, ''), '#7f7f7f')
                ax.broken_barh(bars, (lane - 0.4, 0.8), facecolors=color)
            ax.set_yticks(range(len(device_ids)))
            ax.set_yticklabels([f'device {i} ({classes.get(i, "unknown")})' for i in device_ids])
            ax.set_ylim(-1, len(device_ids))
            ax.invert_yaxis()
            ax.set_xlabel('seconds since first appearance')
            if title:
                ax.set_title(title)
            fig.tight_layout()
            out = io.StringIO()
            fig.savefig(out, format='svg', metadata={'Date': None})
        finally:
            plt.close(fig)
    return out.getvalue()


def render_timeline(report: AnalysisReport, device_ids: Sequence[int], fmt: str = 'csv', stage: str = 'post') -> str:
    """
    Render presence timelines of selected devices.

    Args:
        report: analysis report holding the timelines
        device_ids: devices to render, in lane order
        fmt: 'csv' or 'svg'
        stage: 'post' for merged devices, 'pre' for devices before temporal matching

    Returns:
        The document as text
    """
    if fmt not in FORMATS:
        raise ContractError(f"format must be one of {', '.join(FORMATS)}, got {fmt!r}")
    (timelines, classes) = _select(report, stage)
    device_ids = list(device_ids)
    _check_ids(device_ids, timelines)
    if fmt == 'csv':
        return timeline_csv(timelines, device_ids)
    title = 'Device presence before temporal matching' if stage == 'pre' else 'Device presence'
    return timeline_svg(timelines, classes, device_ids, title)
