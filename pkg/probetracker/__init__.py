VERSION = '0.3.0'
APP_NAME = 'ProbeTracker'

def _get_version():
    return VERSION
__version__ = _get_version()
from .cli import main

# Export API classes and functions
from .api import ProbeTrackerAPI, analyze
