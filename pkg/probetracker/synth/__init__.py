from .generator import GroundTruth, generate, random_scenario, read_truth, write_truth
from .profiles import DeviceProfile, Scenario, bundled_scenarios, profile_from_dict, scenario_from_dict, scenario_from_file
from .templates import IeTemplate, template_for_model
from .evaluation import adjusted_rand_index, device_ari, probe_labels

__all__ = ['GroundTruth', 'generate', 'random_scenario', 'read_truth', 'write_truth', 'DeviceProfile', 'Scenario',
           'bundled_scenarios', 'profile_from_dict', 'scenario_from_dict', 'scenario_from_file', 'IeTemplate',
           'template_for_model', 'adjusted_rand_index', 'device_ari', 'probe_labels']
