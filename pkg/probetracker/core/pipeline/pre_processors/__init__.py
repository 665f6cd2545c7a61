"""
Initialization of pre-processors module.
"""
from .anonymizer import ProbeAnonymizer
from .global_processor import CaptureDecoder
from .group_filter import GroupAddressFilter

__all__ = ['CaptureDecoder', 'GroupAddressFilter', 'ProbeAnonymizer']
