"""
Scoring of clustering results against generated ground truth.
"""
from typing import Dict, List, Sequence

import numpy as np

from probetracker.core.errors import ContractError
from probetracker.core.pipeline.models import DeviceCluster, ScanInstance


def _pairs(counts: np.ndarray) -> float:
    return float(np.sum(counts * (counts - 1)) / 2.0)


def adjusted_rand_index(labels_true: Sequence[int], labels_pred: Sequence[int]) -> float:
    """
    Adjusted Rand index of two labelings of the same items.

    Returns 1.0 for identical partitions up to renaming, and also when the
    index is undefined (fewer than two items, or both labelings trivial).
    """
    if len(labels_true) != len(labels_pred):
        raise ContractError(f'labelings differ in length: {len(labels_true)} != {len(labels_pred)}')
    if len(labels_true) < 2:
        return 1.0
    (_, true_codes) = np.unique(np.asarray(labels_true), return_inverse=True)
    (_, pred_codes) = np.unique(np.asarray(labels_pred), return_inverse=True)
    contingency = np.zeros((true_codes.max() + 1, pred_codes.max() + 1), dtype=np.int64)
    np.add.at(contingency, (true_codes, pred_codes), 1)

    index = _pairs(contingency.ravel())
    sum_true = _pairs(contingency.sum(axis=1))
    sum_pred = _pairs(contingency.sum(axis=0))
    expected = sum_true * sum_pred / _pairs(np.array([len(labels_true)]))
    maximum = (sum_true + sum_pred) / 2.0
    if maximum == expected:
        return 1.0
    return (index - expected) / (maximum - expected)


def probe_labels(devices: Sequence[DeviceCluster], probe_count: int) -> List[int]:
    """Device id of every probe index; -1 for probes in no device."""
    labels = [-1] * probe_count
    for device in devices:
        for instance in device.instances:
            for index in instance.probe_indices:
                labels[index] = device.id
    return labels


def instance_labels(instances: Sequence[ScanInstance], probe_count: int) -> List[int]:
    labels = [-1] * probe_count
    for instance in instances:
        for index in instance.probe_indices:
            labels[index] = instance.id
    return labels


def instance_truth(instances: Sequence[ScanInstance], device_ids: Sequence[int]) -> List[int]:
    """
    True device of each instance, taken from its first probe.

    Raises:
        ContractError: an instance mixes probes of different true devices
    """
    labels = []
    for instance in instances:
        owners = {device_ids[index] for index in instance.probe_indices}
        if len(owners) != 1:
            raise ContractError(f'instance {instance.id} mixes devices {sorted(owners)}')
        labels.append(owners.pop())
    return labels


def device_purity(devices: Sequence[DeviceCluster], device_ids: Sequence[int]) -> Dict[int, int]:
    """Number of distinct true devices behind each predicted device."""
    return {device.id: len({device_ids[index] for instance in device.instances
                            for index in instance.probe_indices})
            for device in devices}


def device_ari(devices: Sequence[DeviceCluster], device_ids: Sequence[int]) -> float:
    """ARI of probe-level device labels, ignoring probes assigned to no device."""
    predicted = probe_labels(devices, len(device_ids))
    kept = [i for (i, label) in enumerate(predicted) if label >= 0]
    return adjusted_rand_index([device_ids[i] for i in kept], [predicted[i] for i in kept])
