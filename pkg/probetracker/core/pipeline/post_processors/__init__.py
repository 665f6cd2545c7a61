"""
Initialization of post-processors module.
"""
from .consistency_checker import ConsistencyChecker, check_partitions

__all__ = ['ConsistencyChecker', 'check_partitions']
