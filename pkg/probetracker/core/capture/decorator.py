"""
Decorator for registering capture formats.
"""
from typing import Callable


def register_format(priority: int = 100) -> Callable:
    """
    Decorator for registering a capture format.

    Args:
        priority: sniffing priority (lower = tried first)

    Returns:
        The decorator function
    """
    def decorator(format_class):
        from .registry import FormatRegistry
        FormatRegistry.register_format(format_class, priority)
        return format_class
    return decorator
