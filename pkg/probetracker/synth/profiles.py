"""
Synthetic scenario schema: device profiles and their validation.

A scenario file is a JSON object:

    {"seed": 7, "start_ts": 1600000000, "devices": [
        {"id": "phone", "randomization": "per-scan", "scan_period_s": 60,
         "burst_size": 4, "sessions": [[0, 1800]], "pnl": ["home"],
         "pnl_policy": "full", "ie": {"model": "pixel"}, "wps": null}]}

Session bounds are seconds relative to start_ts.
"""
import json
import os
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from probetracker.core.errors import ConfigError
from probetracker.core.frames import SEQUENCE_MODULUS, MacAddress, MacClass, WpsInfo, classify_mac
from .templates import MAX_VENDOR_ELEMENTS, IeTemplate, template_for_model, wps_element

RANDOMIZATION_POLICIES = ('none', 'per-session', 'per-scan', 'per-probe')
PNL_POLICIES = ('full', 'rotating-subset', 'wildcard-only')

DEFAULT_START_TS = 1600000000
DEFAULT_FAST_FRACTION = 0.98
MAX_SSID_LEN = 32

SCENARIO_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'scenarios')
SCENARIO_SUFFIX = '.scenario'

_ROOT_KEYS = {'seed', 'start_ts', 'devices'}
_DEVICE_REQUIRED = {'id', 'randomization', 'scan_period_s', 'burst_size', 'sessions'}
_DEVICE_OPTIONAL = {'pnl', 'pnl_policy', 'pnl_subset_size', 'ie', 'wps', 'mac', 'sn_start',
                    'burst_fast_fraction', 'drop_probability'}
_IE_KEYS = {'model', 'rates', 'ext_rates', 'ht_cap', 'vht_cap', 'ext_cap', 'vendor_elements'}
_WPS_KEYS = {'uuid_e', 'name', 'manufacturer', 'model'}
_WPS_LIMITS = {'name': 32, 'manufacturer': 64, 'model': 32}


@dataclass(frozen=True)
class DeviceProfile:
    id: str
    ie: IeTemplate
    randomization: str
    sessions: Tuple[Tuple[float, float], ...]
    scan_period_s: float
    burst_size: int
    pnl: Tuple[bytes, ...] = ()
    pnl_policy: str = 'wildcard-only'
    pnl_subset_size: int = 1
    wps: Optional[WpsInfo] = None
    mac: Optional[MacAddress] = None
    sn_start: Optional[int] = None
    burst_fast_fraction: float = DEFAULT_FAST_FRACTION
    drop_probability: float = 0.0

    def pnl_chunks(self) -> List[Tuple[bytes, ...]]:
        """SSID subsets for rotating-subset transmission, in rotation order."""
        k = self.pnl_subset_size
        return [self.pnl[i:i + k] for i in range(0, len(self.pnl), k)]


@dataclass(frozen=True)
class Scenario:
    devices: Tuple[DeviceProfile, ...]
    seed: int = 0
    start_ts: float = DEFAULT_START_TS

    def __len__(self) -> int:
        return len(self.devices)


def _check_keys(data: Mapping[str, Any], allowed: Iterable[str], path: str, required: Iterable[str] = ()) -> None:
    if not isinstance(data, Mapping):
        raise ConfigError('must be an object', path)
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(unknown)}", path)
    for key in sorted(required):
        if key not in data:
            raise ConfigError('is required', f'{path}.{key}' if path else key)


def _number(value: Any, path: str, minimum: Optional[float] = None, exclusive: bool = False,
            maximum: Optional[float] = None) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f'must be a number, got {value!r}', path)
    if minimum is not None and (value < minimum or (exclusive and value == minimum)):
        bound = f'greater than {minimum}' if exclusive else f'at least {minimum}'
        raise ConfigError(f'must be {bound}, got {value}', path)
    if maximum is not None and value > maximum:
        raise ConfigError(f'must be at most {maximum}, got {value}', path)
    return float(value)


def _integer(value: Any, path: str, minimum: int, maximum: Optional[int] = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f'must be an integer, got {value!r}', path)
    _number(value, path, minimum, maximum=maximum)
    return value


def _hex(value: Any, path: str, length: Optional[int] = None) -> bytes:
    try:
        data = bytes.fromhex(value)
    except (TypeError, ValueError):
        raise ConfigError(f'must be a hex string, got {value!r}', path) from None
    if length is not None and len(data) != length:
        raise ConfigError(f'must be {length} bytes, got {len(data)}', path)
    return data


def _text(value: Any, path: str, limit: int) -> bytes:
    if not isinstance(value, str):
        raise ConfigError(f'must be a string, got {value!r}', path)
    data = value.encode('utf-8')
    if len(data) > limit:
        raise ConfigError(f'must be at most {limit} bytes, got {len(data)}', path)
    return data


def _ie_template(data: Optional[Mapping[str, Any]], device_id: str, path: str) -> IeTemplate:
    data = {} if data is None else data
    _check_keys(data, _IE_KEYS, path)
    model = data.get('model', device_id)
    if not isinstance(model, str) or not model:
        raise ConfigError('must be a non-empty string', f'{path}.model')
    fields: Dict[str, Any] = {}
    for key in ('rates', 'ext_rates', 'ht_cap', 'vht_cap', 'ext_cap'):
        if key not in data:
            continue
        value = data[key]
        if isinstance(value, bool) or value is None:
            if key == 'rates' and not value:
                raise ConfigError('supported rates cannot be disabled', f'{path}.rates')
            fields[key] = bool(value)
        else:
            payload = _hex(value, f'{path}.{key}')
            if not payload or len(payload) > 255:
                raise ConfigError('payload must be 1 to 255 bytes', f'{path}.{key}')
            fields[key] = payload
    vendor_count = _integer(data.get('vendor_elements', 1), f'{path}.vendor_elements', 0, MAX_VENDOR_ELEMENTS)
    return template_for_model(model, vendor_elements=vendor_count, **fields)


def _wps(data: Optional[Mapping[str, Any]], path: str) -> Optional[WpsInfo]:
    if data is None:
        return None
    _check_keys(data, _WPS_KEYS, path)
    uuid_e = _hex(data['uuid_e'], f'{path}.uuid_e', 16) if data.get('uuid_e') is not None else None
    texts = {key: _text(data[key], f'{path}.{key}', limit) if data.get(key) is not None else None
             for (key, limit) in _WPS_LIMITS.items()}
    wps = WpsInfo(uuid_e=uuid_e, device_name=texts['name'], manufacturer=texts['manufacturer'], model=texts['model'])
    if len(wps_element(wps).payload) > 255:
        raise ConfigError('WPS attributes do not fit in one element', path)
    return wps


def _sessions(value: Any, path: str) -> Tuple[Tuple[float, float], ...]:
    if not isinstance(value, list) or not value:
        raise ConfigError('must be a non-empty list of [start_s, end_s] pairs', path)
    sessions = []
    for (i, pair) in enumerate(value):
        item_path = f'{path}[{i}]'
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ConfigError('must be a [start_s, end_s] pair', item_path)
        start = _number(pair[0], f'{item_path}[0]', 0)
        end = _number(pair[1], f'{item_path}[1]')
        if end <= start:
            raise ConfigError(f'session ends ({end}) before it starts ({start})', item_path)
        if sessions and start < sessions[-1][1]:
            raise ConfigError('sessions must be time-ordered and non-overlapping', item_path)
        sessions.append((start, end))
    return tuple(sessions)


def profile_from_dict(data: Mapping[str, Any], path: str = 'device') -> DeviceProfile:
    """
    Validate one device entry of a scenario.

    Raises:
        ConfigError: naming the offending key path and the profile id
    """
    _check_keys(data, _DEVICE_REQUIRED | _DEVICE_OPTIONAL, path, _DEVICE_REQUIRED)
    device_id = data['id']
    if not isinstance(device_id, (str, int)) or isinstance(device_id, bool):
        raise ConfigError('must be a string or integer', f'{path}.id')
    device_id = str(device_id)
    path = f'{path}({device_id})'

    randomization = data['randomization']
    if randomization not in RANDOMIZATION_POLICIES:
        raise ConfigError(f"must be one of {', '.join(RANDOMIZATION_POLICIES)}, got {randomization!r}",
                          f'{path}.randomization')
    scan_period = _number(data['scan_period_s'], f'{path}.scan_period_s', 0, exclusive=True)
    burst_size = _integer(data['burst_size'], f'{path}.burst_size', 1)
    sessions = _sessions(data['sessions'], f'{path}.sessions')

    raw_pnl = data.get('pnl', [])
    if not isinstance(raw_pnl, list):
        raise ConfigError('must be a list of SSIDs', f'{path}.pnl')
    pnl = tuple(_text(ssid, f'{path}.pnl[{i}]', MAX_SSID_LEN) for (i, ssid) in enumerate(raw_pnl))
    if any(not ssid for ssid in pnl):
        raise ConfigError('SSIDs must not be empty', f'{path}.pnl')
    if len(set(pnl)) != len(pnl):
        raise ConfigError('SSIDs must be distinct', f'{path}.pnl')
    pnl_policy = data.get('pnl_policy', 'full' if pnl else 'wildcard-only')
    if pnl_policy not in PNL_POLICIES:
        raise ConfigError(f"must be one of {', '.join(PNL_POLICIES)}, got {pnl_policy!r}", f'{path}.pnl_policy')
    subset_size = _integer(data.get('pnl_subset_size', 1), f'{path}.pnl_subset_size', 1)
    if pnl_policy != 'wildcard-only' and not pnl:
        raise ConfigError(f'policy {pnl_policy!r} needs a non-empty PNL', f'{path}.pnl')
    if pnl_policy == 'full' and burst_size < len(pnl):
        raise ConfigError(f'a burst of {burst_size} cannot carry the full PNL of {len(pnl)} SSIDs',
                          f'{path}.burst_size')
    if pnl_policy == 'rotating-subset':
        if subset_size > len(pnl):
            raise ConfigError(f'larger than the PNL ({len(pnl)} SSIDs)', f'{path}.pnl_subset_size')
        if burst_size < subset_size:
            raise ConfigError(f'a burst of {burst_size} cannot carry a subset of {subset_size} SSIDs',
                              f'{path}.burst_size')

    mac = None
    if data.get('mac') is not None:
        try:
            mac = MacAddress.parse(data['mac'])
        except (TypeError, ValueError) as e:
            raise ConfigError(str(e), f'{path}.mac') from e
        if randomization != 'none':
            raise ConfigError('a fixed MAC needs randomization "none"', f'{path}.mac')
        if classify_mac(mac) != MacClass.GLOBAL:
            raise ConfigError(f'{mac} is not a global unicast address', f'{path}.mac')

    sn_start = None
    if data.get('sn_start') is not None:
        sn_start = _integer(data['sn_start'], f'{path}.sn_start', 0, SEQUENCE_MODULUS - 1)

    return DeviceProfile(
        id=device_id,
        ie=_ie_template(data.get('ie'), device_id, f'{path}.ie'),
        randomization=randomization,
        sessions=sessions,
        scan_period_s=scan_period,
        burst_size=burst_size,
        pnl=pnl,
        pnl_policy=pnl_policy,
        pnl_subset_size=subset_size,
        wps=_wps(data.get('wps'), f'{path}.wps'),
        mac=mac,
        sn_start=sn_start,
        burst_fast_fraction=_number(data.get('burst_fast_fraction', DEFAULT_FAST_FRACTION),
                                    f'{path}.burst_fast_fraction', 0, maximum=1),
        drop_probability=_number(data.get('drop_probability', 0.0), f'{path}.drop_probability', 0, maximum=0.99),
    )


def scenario_from_dict(data: Mapping[str, Any]) -> Scenario:
    _check_keys(data, _ROOT_KEYS, '', {'devices'})
    seed = _integer(data.get('seed', 0), 'seed', 0)
    start_ts = _number(data.get('start_ts', DEFAULT_START_TS), 'start_ts', 0)
    raw_devices = data['devices']
    if not isinstance(raw_devices, list):
        raise ConfigError('must be a list', 'devices')
    devices = tuple(profile_from_dict(device, f'devices[{i}]') for (i, device) in enumerate(raw_devices))
    ids = [device.id for device in devices]
    duplicates = sorted({i for i in ids if ids.count(i) > 1})
    if duplicates:
        raise ConfigError(f"duplicate device id(s): {', '.join(duplicates)}", 'devices')
    return Scenario(devices=devices, seed=seed, start_ts=start_ts)


def bundled_scenarios() -> List[str]:
    return sorted(name[:-len(SCENARIO_SUFFIX)] for name in os.listdir(SCENARIO_DIR)
                  if name.endswith(SCENARIO_SUFFIX))


def resolve_scenario_path(name_or_path: Union[str, os.PathLike]) -> str:
    """A path as given, or the bundled scenario of that name."""
    path = os.fspath(name_or_path)
    if os.path.exists(path):
        return path
    bundled = os.path.join(SCENARIO_DIR, path + SCENARIO_SUFFIX)
    if os.path.exists(bundled):
        return bundled
    raise FileNotFoundError(f"File '{path}' not found (bundled scenarios: {', '.join(bundled_scenarios())})")


def scenario_from_file(path: Union[str, os.PathLike]) -> Scenario:
    """
    Load and validate a scenario file.

    Args:
        path: scenario file, or the name of a bundled scenario such as 'office'

    Returns:
        Scenario

    Raises:
        FileNotFoundError: no such file or bundled scenario
        ConfigError: schema violation, naming the key path
    """
    resolved = resolve_scenario_path(path)
    try:
        with open(resolved, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except ValueError as e:
        raise ConfigError(f'invalid JSON in scenario {resolved}: {e}') from e
    return scenario_from_dict(data)


def as_scenario(scenario: Union[Scenario, Sequence[DeviceProfile]], seed: Optional[int] = None) -> Scenario:
    if not isinstance(scenario, Scenario):
        scenario = Scenario(devices=tuple(scenario))
    if seed is not None and seed != scenario.seed:
        scenario = Scenario(devices=scenario.devices, seed=seed, start_ts=scenario.start_ts)
    return scenario
