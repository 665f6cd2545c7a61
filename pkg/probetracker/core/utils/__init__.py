"""
Initialization of core utilities module.
"""
from probetracker.core.utils.union_find import UnionFind

__all__ = ['UnionFind']
