"""
ProbeTracker API - programmatic interface to the analysis pipeline.
"""
from probetracker.api.analyzer import ProbeTrackerAPI, analyze

__all__ = ['ProbeTrackerAPI', 'analyze']
