from .decorator import register_processor
from .registry import ProcessorRegistry

__all__ = ['ProcessorRegistry', 'register_processor']
