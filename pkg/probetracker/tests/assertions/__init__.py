"""
Initialization of the assertion tests package.
"""
