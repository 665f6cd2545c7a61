"""
Command-line interface for ProbeTracker.

Data (JSON lines, JSON, CSV, SVG) goes to stdout or to the file given with
--out; progress and tables go to stderr so stages can be piped.
"""
import argparse
import json
import os
import sys
import traceback
from typing import Any, Dict, List, Optional

from rich.panel import Panel
from rich.table import Table

from probetracker import APP_NAME, VERSION
from probetracker.api import ProbeTrackerAPI
from probetracker.core.anonymizer import AnonymizationKey, anonymize_capture
from probetracker.core.capture import read_capture, write_capture
from probetracker.core.config import DEFAULT_CONFIG, config, settings_to_mapping
from probetracker.core.console import console, setup_logging
from probetracker.core.device_id import cluster_devices
from probetracker.core.errors import CaptureFormatError, ConfigError, ConsistencyError, ContractError, ProbeTrackerError
from probetracker.core.fingerprint import ie_statistics
from probetracker.core.settings import AnalysisSettings
from probetracker.core.temporal import merge_devices
from probetracker.report import render_timeline, stats_csv, stats_table, summary_table
from probetracker.report.artifacts import (
    devices_document,
    devices_from_document,
    dumps_instance,
    read_instances,
    verify_artifacts,
    write_artifacts,
)
from probetracker.report.report import AnalysisReport
from probetracker.synth import bundled_scenarios, generate, read_truth, scenario_from_file, write_truth
from probetracker.synth.evaluation import device_ari

CAPTURE_FORMATS = ('pcap', 'records')


def print_banner():
    console.print(Panel.fit(f'[bold blue]{APP_NAME}[/bold blue] [cyan]v{VERSION}[/cyan]\n'
                            f'[yellow]Device re-identification from 802.11 probe requests[/yellow]',
                            border_style='blue'))


def print_config():
    """Displays the current configuration settings."""
    table = Table(title='Current Configuration')
    table.add_column('Setting', style='cyan')
    table.add_column('Value', style='green')
    table.add_column('Default', style='dim')
    for (key, value) in sorted(config.data.items()):
        table.add_row(key, str(value), str(DEFAULT_CONFIG[key]))
    console.print(table)
    console.print(f'[dim]{config.config_path}[/dim]')


def _analysis_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group('analysis parameters (override the configuration)')
    group.add_argument('--instance-gap', type=float, metavar='SECONDS',
                       help='Largest gap inside one scan instance (0 = unbounded)')
    group.add_argument('--no-wraparound', action='store_true', help='Compare sequence numbers without wrapping at 4096')
    group.add_argument('--metric', choices=('jaccard', 'overlap'), help='SSID set similarity')
    group.add_argument('--threshold', type=float, help='Similarity threshold')
    group.add_argument('--inclusive', action='store_true', help='Accept similarity equal to the threshold')
    group.add_argument('--gap', type=float, metavar='SECONDS', help='Appearance clustering gap')
    group.add_argument('--pad', type=float, metavar='SECONDS', help='Appearance cluster padding')
    group.add_argument('--overlap', type=float, help='Minimum mean overlap for a temporal merge')
    group.add_argument('--scope', choices=('randomized', 'all'), help='Devices eligible for temporal merging')
    group.add_argument('--fcs', choices=('auto', 'present', 'absent'), help='Trailing FCS handling')
    return parent


def _salt_flags(required: bool = False) -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    salt = parent.add_mutually_exclusive_group(required=required)
    salt.add_argument('--salt-hex', metavar='HEX', help='Anonymization salt, 32 hex characters')
    salt.add_argument('--random-salt', action='store_true', help='Anonymize with a fresh random salt')
    return parent


def setup_argument_parser():
    """
    Configures the command-line argument parser.

    Returns:
        ArgumentParser: Configured argument parser
    """
    parser = argparse.ArgumentParser(
        prog='ptrack',
        description='Re-identify wireless devices from probe-request captures despite MAC randomization.',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog='\nExamples:\n'
               '  ptrack synth --scenario office --out office.pcap --format pcap --truth truth.jsonl\n'
               '  ptrack analyze --in office.pcap --out-dir results\n'
               '  ptrack verify results --truth truth.jsonl\n'
               '  ptrack timeline --report results/report.json --ids 0 1 --format svg > timeline.svg\n'
               '  ptrack instances --in office.pcap | ptrack devices --in - | ptrack merge --in -\n')
    parser.add_argument('--version', action='store_true', help='Show version information')
    parser.add_argument('--debug', action='store_true', help='Enable debug logging and tracebacks')
    parser.add_argument('--config', metavar='FILE', help='Configuration file overlaid on the user configuration')
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    analysis = _analysis_flags()

    p = commands.add_parser('anonymize', parents=[_salt_flags(required=True)],
                            help='Replace MACs, SSIDs and WPS identity fields with salted tokens')
    p.add_argument('--in', dest='input', required=True, help='Capture file (pcap or records)')
    p.add_argument('--out', required=True, help='Anonymized capture')
    p.add_argument('--format', choices=CAPTURE_FORMATS, help='Output format (default: output_format setting)')
    p.add_argument('--fcs', choices=('auto', 'present', 'absent'), help='Trailing FCS handling')
    p.set_defaults(handler=cmd_anonymize)

    p = commands.add_parser('stats', help='Information-element statistics')
    p.add_argument('--in', dest='input', required=True, help='Capture file')
    p.add_argument('--csv', action='store_true', help='Also write the table as CSV to stdout')
    p.add_argument('--fcs', choices=('auto', 'present', 'absent'), help='Trailing FCS handling')
    p.set_defaults(handler=cmd_stats)

    p = commands.add_parser('instances', parents=[analysis, _salt_flags()], help='Scan instances as JSON lines')
    p.add_argument('--in', dest='input', required=True, help='Capture file')
    p.add_argument('--out', help='Output file (default: stdout)')
    p.set_defaults(handler=cmd_instances)

    p = commands.add_parser('devices', parents=[analysis, _salt_flags()], help='Device clusters as JSON')
    p.add_argument('--in', dest='input', required=True, help="Capture file or instances JSON lines ('-' for stdin)")
    p.add_argument('--out', help='Output file (default: stdout)')
    p.set_defaults(handler=cmd_devices)

    p = commands.add_parser('merge', parents=[analysis], help='Temporal pattern matching over a device file')
    p.add_argument('--in', dest='input', required=True, help="Device JSON from 'devices' ('-' for stdin)")
    p.add_argument('--out', help='Output file (default: stdout)')
    p.set_defaults(handler=cmd_merge)

    p = commands.add_parser('analyze', parents=[analysis, _salt_flags()], help='Run the whole pipeline')
    p.add_argument('--in', dest='input', required=True, help='Capture file')
    p.add_argument('--out-dir', help='Write report.json, instances.jsonl, devices.json, merged.json, timeline.csv')
    p.set_defaults(handler=cmd_analyze)

    p = commands.add_parser('synth', help='Generate a labelled synthetic capture')
    p.add_argument('--scenario', required=True,
                   help=f"Scenario file or bundled name ({', '.join(bundled_scenarios())})")
    p.add_argument('--out', required=True, help='Capture file to write')
    p.add_argument('--format', choices=CAPTURE_FORMATS, help='Capture format (default: output_format setting)')
    p.add_argument('--truth', help='Ground-truth JSON lines sidecar')
    p.add_argument('--seed', type=int, help='Override the scenario seed')
    p.set_defaults(handler=cmd_synth)

    p = commands.add_parser('verify', help='Recompute a report from its artifacts')
    p.add_argument('directory', help='Output directory of analyze --out-dir')
    p.add_argument('--truth', help='Ground-truth sidecar; reports adjusted Rand index')
    p.set_defaults(handler=cmd_verify)

    p = commands.add_parser('timeline', help='Render presence timelines from a saved report')
    p.add_argument('--report', required=True, help='report.json written by analyze')
    p.add_argument('--ids', type=int, nargs='*', help='Device ids (default: all)')
    p.add_argument('--format', choices=('csv', 'svg'), default='csv')
    p.add_argument('--stage', choices=('pre', 'post'), default='post',
                   help='Devices before or after temporal matching')
    p.add_argument('--out', help='Output file (default: stdout)')
    p.set_defaults(handler=cmd_timeline)

    p = commands.add_parser('config', help='Show or change the configuration')
    actions = p.add_subparsers(dest='action', metavar='ACTION')
    actions.add_parser('show', help='Show current configuration')
    set_parser = actions.add_parser('set', help='Set a configuration value')
    set_parser.add_argument('key', choices=sorted(DEFAULT_CONFIG))
    set_parser.add_argument('value')
    actions.add_parser('reset', help='Reset configuration to defaults')
    p.set_defaults(handler=cmd_config)
    return parser


def resolve_settings(args: argparse.Namespace) -> AnalysisSettings:
    overrides: Dict[str, Any] = {
        'instance_gap_s': getattr(args, 'instance_gap', None),
        'sequence_wraparound': False if getattr(args, 'no_wraparound', False) else None,
        'similarity_metric': getattr(args, 'metric', None),
        'similarity_threshold': getattr(args, 'threshold', None),
        'similarity_comparator': 'inclusive' if getattr(args, 'inclusive', False) else None,
        'merge_gap_s': getattr(args, 'gap', None),
        'merge_pad_s': getattr(args, 'pad', None),
        'merge_overlap': getattr(args, 'overlap', None),
        'merge_scope': getattr(args, 'scope', None),
        'fcs_mode': getattr(args, 'fcs', None),
    }
    if getattr(args, 'salt_hex', None) or getattr(args, 'random_salt', False):
        overrides['anonymize'] = True
    return config.resolve(overrides)


def anonymization_key(args: argparse.Namespace) -> Optional[AnonymizationKey]:
    if getattr(args, 'salt_hex', None):
        try:
            return AnonymizationKey.from_hex(args.salt_hex)
        except ValueError as e:
            raise ConfigError(str(e), 'salt_hex') from e
    if getattr(args, 'random_salt', False):
        return AnonymizationKey.random()
    return None


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, 'w', encoding='utf-8') as f:
            f.write(text)
        console.print(f'[green]Wrote {out}[/green]')
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _read_text(path: str) -> List[str]:
    if path == '-':
        return sys.stdin.read().splitlines()
    if not os.path.exists(path):
        raise FileNotFoundError(f"File '{path}' not found")
    with open(path, 'r', encoding='utf-8') as f:
        return f.read().splitlines()


def _capture_source(path: str):
    if path == '-':
        return sys.stdin.buffer.read()
    return path


def _looks_like_instances(path: str) -> bool:
    """True for JSON lines written by 'instances' (records carry no probe_indices)."""
    if path == '-' or not os.path.exists(path):
        return False
    with open(path, 'rb') as f:
        head = f.readline(1 << 20).strip()
    try:
        data = json.loads(head.decode('utf-8'))
    except (UnicodeDecodeError, ValueError):
        return False
    return isinstance(data, dict) and 'probe_indices' in data


def _run_pipeline(args: argparse.Namespace):
    settings = resolve_settings(args)
    api = ProbeTrackerAPI(settings=settings, key=anonymization_key(args))
    console.print(f'[blue]Analysing {args.input}...[/blue]')
    return api.analyze_with_result(_capture_source(args.input))


def cmd_anonymize(args: argparse.Namespace) -> int:
    key = anonymization_key(args)
    settings = resolve_settings(args)
    (records, stats) = read_capture(_capture_source(args.input), fcs_mode=settings.fcs_mode)
    fmt = args.format or config.get('output_format')
    written = write_capture(list(anonymize_capture(records, key)), args.out, fmt)
    console.print(f'[green]Anonymized {len(records)} probe requests into {args.out} ({fmt}, {written} bytes)[/green]')
    if stats.warnings:
        console.print(f'[yellow]{len(stats.warnings)} frame(s) could not be decoded[/yellow]')
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    (records, _) = read_capture(_capture_source(args.input), fcs_mode=settings.fcs_mode)
    rows = ie_statistics(records)
    console.print(stats_table(rows))
    if args.csv:
        _emit(stats_csv(rows), None)
    return 0


def cmd_instances(args: argparse.Namespace) -> int:
    (result, _) = _run_pipeline(args)
    _emit(''.join(dumps_instance(instance) + '\n' for instance in result.instances), args.out)
    console.print(f'[green]{len(result.instances)} scan instances from {len(result.records)} probes[/green]')
    return 0


def _json_text(document: Any) -> str:
    return json.dumps(document, sort_keys=True, indent=2) + '\n'


def cmd_devices(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    if args.input == '-' or _looks_like_instances(args.input):
        instances = read_instances(_read_text(args.input))
        devices = cluster_devices(instances, settings.similarity)
    else:
        (result, _) = _run_pipeline(args)
        (instances, devices) = (result.instances, result.devices)
    _emit(_json_text(devices_document(instances, devices, settings_to_mapping(settings))), args.out)
    console.print(f'[green]{len(devices)} devices from {len(instances)} scan instances[/green]')
    return 0


def cmd_merge(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    try:
        document = json.loads('\n'.join(_read_text(args.input)))
    except ValueError as e:
        raise CaptureFormatError(f'{args.input}: invalid JSON: {e}') from e
    (instances, devices) = devices_from_document(document)
    merged = merge_devices(devices, settings.merge)
    _emit(_json_text(devices_document(instances, merged, settings_to_mapping(settings))), args.out)
    console.print(f'[green]Temporal pattern matching: {len(devices)} -> {len(merged)} devices[/green]')
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    print_banner()
    (result, report) = _run_pipeline(args)
    if result.read_stats is not None and result.read_stats.warnings:
        console.print(f'[yellow]{len(result.read_stats.warnings)} frame(s) could not be decoded[/yellow]')
    if args.out_dir:
        for path in write_artifacts(args.out_dir, result, report):
            console.print(f'[green]Wrote {path}[/green]')
    console.print(summary_table(report))
    _emit(report.to_json() + '\n', None)
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    scenario = scenario_from_file(args.scenario)
    (records, truth) = generate(scenario, seed=args.seed)
    fmt = args.format or config.get('output_format')
    write_capture(records, args.out, fmt)
    console.print(f'[green]Generated {len(records)} probe requests from {truth.expected_devices} devices '
                  f'into {args.out} ({fmt})[/green]')
    if args.truth:
        write_truth(truth, args.truth)
        console.print(f'[green]Ground truth written to {args.truth}[/green]')
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    loaded = verify_artifacts(args.directory)
    if args.truth:
        truth = read_truth(args.truth)
        if len(truth) != loaded.report.probe_count:
            console.print(f'[yellow]Ground truth labels {len(truth)} probes, the report '
                          f'{loaded.report.probe_count}; skipping adjusted Rand index[/yellow]')
        else:
            table = Table(title='Agreement with ground truth')
            table.add_column('Stage', style='cyan')
            table.add_column('Devices', justify='right')
            table.add_column('Adjusted Rand index', justify='right')
            table.add_row('Ground truth', str(truth.expected_devices), '')
            table.add_row('Before temporal matching', str(len(loaded.devices)),
                          f'{device_ari(loaded.devices, truth.device_ids):.4f}')
            table.add_row('After temporal matching', str(len(loaded.merged)),
                          f'{device_ari(loaded.merged, truth.device_ids):.4f}')
            console.print(table)
    if loaded.problems:
        for problem in loaded.problems:
            console.print(f'[red]  - {problem}[/red]')
        raise ConsistencyError(f'{len(loaded.problems)} inconsistencies in {args.directory}')
    console.print(f'[bold green]All report counts in {args.directory} match the artifacts.[/bold green]')
    return 0


def cmd_timeline(args: argparse.Namespace) -> int:
    lines = _read_text(args.report)
    try:
        report = AnalysisReport.from_dict(json.loads('\n'.join(lines)))
    except ValueError as e:
        raise CaptureFormatError(f'{args.report}: invalid report: {e}') from e
    timelines = report.timelines_pre if args.stage == 'pre' else report.timelines
    ids = args.ids if args.ids else sorted(timelines)
    _emit(render_timeline(report, ids, args.format, args.stage), args.out)
    return 0


def cmd_config(args: argparse.Namespace) -> int:
    if args.action == 'set':
        value = config.set(args.key, args.value)
        console.print(f'[green]Configuration updated: {args.key} = {value}[/green]')
    elif args.action == 'reset':
        config.reset()
        console.print('[green]Configuration reset to defaults[/green]')
    else:
        print_config()
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = setup_argument_parser()
    args = parser.parse_args(argv)
    setup_logging(args.debug)
    if args.version:
        print_banner()
        return 0
    if not args.command:
        parser.print_help(sys.stderr)
        return 1
    try:
        config.load()
        if args.config:
            if not os.path.exists(args.config):
                raise ConfigError(f"File '{args.config}' not found", 'config')
            config.update_from_file(args.config)
        return args.handler(args)
    except KeyboardInterrupt:
        console.print('\n[yellow]Operation cancelled by user.[/yellow]')
        return 130
    except ConfigError as e:
        console.print(f'[red]Configuration error: {e}[/red]')
        return 2
    except ConsistencyError as e:
        console.print(f'[red]Consistency check failed: {e}[/red]')
        return 3
    except (CaptureFormatError, ContractError, ProbeTrackerError, OSError) as e:
        if args.debug:
            console.print(f'[dim]{traceback.format_exc()}[/dim]')
        console.print(f'[red]Error: {e}[/red]')
        return 1
