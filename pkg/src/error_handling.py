# src/error_handling.py

from typing import Optional
from datetime import datetime

class HarmonicAnalysisError(Exception):
    """Base class for harness exceptions"""
    def __init__(self, message: str, timestamp: Optional[datetime] = None):
        self.timestamp = timestamp or datetime.now()
        self.message = message
        # timestamp kept as an attribute only; messages end up in reports
        super().__init__(message)

class DomainError(HarmonicAnalysisError):
    """Exception for inputs outside the domain of an operation"""
    def __init__(self, function: str, message: str):
        super().__init__(f"Domain error ({function}): {message}")
        self.function = function

class AccuracyError(HarmonicAnalysisError):
    """Exception for numerical methods that missed their tolerance"""
    def __init__(self, function: str, achieved_tolerance: float, message: str):
        super().__init__(
            f"Accuracy error ({function}): {message} "
            f"(achieved tolerance {achieved_tolerance:.3e})"
        )
        self.function = function
        self.achieved_tolerance = achieved_tolerance

class ConfigurationError(HarmonicAnalysisError):
    """Exception for invalid user-facing parameters"""
    def __init__(self, context: str, message: str, line: Optional[int] = None):
        location = f"{context}:{line}" if line is not None else context
        super().__init__(f"Configuration error ({location}): {message}")
        self.context = context
        self.detail = message
        self.line = line

class IntegrabilityError(ConfigurationError):
    """Exception for test functions that do not beat the measure growth"""
    def __init__(self, condition: str, message: str):
        super().__init__(condition, message)
        self.condition = condition

class CalibrationError(HarmonicAnalysisError):
    """Exception for missing or degenerate Plancherel calibration"""
    def __init__(self, datum: str, message: str):
        super().__init__(f"Calibration error ({datum}): {message}")
        self.datum = datum

class SpectralTailError(HarmonicAnalysisError):
    """Exception raised when inversion refuses a slowly decaying spectrum"""
    def __init__(self, context: str, message: str):
        super().__init__(f"Spectral tail error ({context}): {message}")
        self.context = context
