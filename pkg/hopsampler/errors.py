"""
Exception hierarchy; every error carries the CLI exit code it maps to
"""
from typing import Optional


class HopSamplerError(Exception):
    """Base class for all domain errors"""
    exit_code = 2


class UsageError(HopSamplerError):
    """Invalid flags or flag combinations"""
    exit_code = 1


class DataError(HopSamplerError):
    """Input data that cannot be processed as given"""
    exit_code = 2


class GraphFormatError(DataError):
    """Malformed edge-list, attribute or manifest input"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class CheckFailure(HopSamplerError):
    """A statistical check exceeded its tolerance"""
    exit_code = 3
