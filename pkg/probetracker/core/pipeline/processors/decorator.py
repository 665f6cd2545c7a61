"""
Stage registration. Stages run in ascending priority: scan instances (10),
device clusters (20), temporal merging (30).
"""
from typing import Callable, Type

from ..processor_base import Processor


def register_processor(priority: int = 100) -> Callable[[Type[Processor]], Type[Processor]]:
    """
    Class decorator adding a stage processor to the registry.

    Raises:
        TypeError: the decorated class is not a Processor
    """
    def decorator(processor_class: Type[Processor]) -> Type[Processor]:
        if not issubclass(processor_class, Processor):
            raise TypeError(f'{processor_class.__name__} is not a stage processor')
        from .registry import ProcessorRegistry
        ProcessorRegistry.register_processor(processor_class, priority)
        return processor_class
    return decorator
