"""
Scan-instance identification: grouping consecutive probes of one device
scan into bursts.
"""
import logging
from typing import Dict, Iterable, List, Optional, Union

from probetracker.core.capture.base import CaptureRecord
from probetracker.core.fingerprint import Fingerprint, fingerprint
from probetracker.core.frames import SEQUENCE_MODULUS, MacAddress, ProbeRequest
from probetracker.core.pipeline.models import ScanInstance
from probetracker.core.settings import InstanceConfig

logger = logging.getLogger(__name__)

SEQUENCE_WINDOW = 5


def sequence_follows(sn1: int, sn2: int, wraparound: bool = True) -> bool:
    """True when sn2 is 1 to 4 frames after sn1."""
    if wraparound:
        distance = (sn2 - sn1) % SEQUENCE_MODULUS
        return 0 < distance < SEQUENCE_WINDOW
    return sn1 < sn2 < sn1 + SEQUENCE_WINDOW


def same_instance(p1: ProbeRequest, p2: ProbeRequest, wraparound: bool = True,
                  fp1: Optional[Fingerprint] = None, fp2: Optional[Fingerprint] = None) -> bool:
    """
    Decide whether p2 continues the scan burst that p1 belongs to.

    Args:
        p1: earlier probe
        p2: later probe
        wraparound: compare sequence numbers modulo 4096
        fp1, fp2: precomputed fingerprints, computed on demand otherwise

    Returns:
        bool
    """
    if p1.mac != p2.mac:
        return False
    if p1.uuid_e is not None and p2.uuid_e is not None:
        return p1.uuid_e == p2.uuid_e
    if (fp1 or fingerprint(p1)) == (fp2 or fingerprint(p2)):
        return sequence_follows(p1.sequence_number, p2.sequence_number, wraparound)
    return False


class _OpenInstance:
    __slots__ = ('probes', 'indices', 'fingerprints', 'uuid_e')

    def __init__(self, probe: ProbeRequest, index: int, fp: Fingerprint):
        self.probes = [probe]
        self.indices = [index]
        self.fingerprints = [fp]
        self.uuid_e = probe.uuid_e

    @property
    def last(self) -> ProbeRequest:
        return self.probes[-1]

    def accepts_uuid(self, probe: ProbeRequest) -> bool:
        return probe.uuid_e is None or self.uuid_e is None or probe.uuid_e == self.uuid_e

    def add(self, probe: ProbeRequest, index: int, fp: Fingerprint) -> None:
        self.probes.append(probe)
        self.indices.append(index)
        self.fingerprints.append(fp)
        if self.uuid_e is None:
            self.uuid_e = probe.uuid_e


def group_instances(items: Iterable[Union[CaptureRecord, ProbeRequest]],
                    config: Optional[InstanceConfig] = None) -> List[ScanInstance]:
    """
    Fold a probe stream into scan instances.

    Each probe extends the most recent open instance carrying its MAC when
    same_instance holds against that instance's latest probe and the gap
    since it is within config.gap_s (0 disables the bound). Otherwise it
    opens a new instance. Input is stably sorted by timestamp first; probe
    indices refer to positions in the input as given.

    Args:
        items: capture records or probes
        config: gap bound and sequence wraparound mode

    Returns:
        Instances ordered by first timestamp, ids 0..n-1
    """
    config = config or InstanceConfig()
    probes = [item.probe if isinstance(item, CaptureRecord) else item for item in items]
    order = sorted(range(len(probes)), key=lambda i: probes[i].timestamp)
    open_by_mac: Dict[MacAddress, _OpenInstance] = {}
    emitted: List[_OpenInstance] = []

    for index in order:
        probe = probes[index]
        fp = fingerprint(probe)
        current = open_by_mac.get(probe.mac)
        if current is not None:
            last = current.last
            within_gap = config.gap_s == 0 or probe.timestamp - last.timestamp <= config.gap_s
            if (within_gap and current.accepts_uuid(probe)
                    and same_instance(last, probe, config.wraparound, current.fingerprints[-1], fp)):
                current.add(probe, index, fp)
                continue
            emitted.append(current)
        open_by_mac[probe.mac] = _OpenInstance(probe, index, fp)
    emitted.extend(open_by_mac.values())

    # ties on first timestamp keep input order
    emitted.sort(key=lambda inst: (inst.probes[0].timestamp, inst.indices[0]))
    instances = [ScanInstance.from_probes(i, inst.probes, inst.indices, inst.fingerprints[0])
                 for (i, inst) in enumerate(emitted)]
    logger.debug('Grouped %d probes into %d scan instances', len(probes), len(instances))
    return instances
