"""
Exception hierarchy and machine-readable reason codes
"""
from enum import Enum
from typing import Any, Optional


class ReasonCode(str, Enum):
    """Reason codes reported by every failing command"""
    OK = "ok"
    INVARIANT_VIOLATION = "invariant_violation"
    CONFIG_ERROR = "config_error"
    IO_ERROR = "io_error"
    INSTABILITY = "instability"
    ORACLE_MISMATCH = "oracle_mismatch"
    HASH_MISMATCH = "hash_mismatch"
    DEGENERATE_TRACE = "degenerate_trace"
    DOMAIN_ERROR = "domain_error"
    INTERNAL_ERROR = "internal_error"

    @property
    def exit_code(self) -> int:
        return _EXIT_CODES[self]


_EXIT_CODES = {
    ReasonCode.OK: 0,
    ReasonCode.INVARIANT_VIOLATION: 1,
    ReasonCode.CONFIG_ERROR: 2,
    ReasonCode.IO_ERROR: 3,
    ReasonCode.INSTABILITY: 4,
    ReasonCode.ORACLE_MISMATCH: 5,
    ReasonCode.HASH_MISMATCH: 6,
    ReasonCode.DEGENERATE_TRACE: 7,
    ReasonCode.DOMAIN_ERROR: 8,
    ReasonCode.INTERNAL_ERROR: 70,
}


class DampwaveError(Exception):
    """Base error; carries a reason code and a context dict for the logs"""

    reason = ReasonCode.INTERNAL_ERROR

    def __init__(self, message: str, context: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.context = context or {}


class DomainError(DampwaveError):
    """Index out of range, unsupported transform size or mismatched domains"""
    reason = ReasonCode.DOMAIN_ERROR


class ConfigError(DampwaveError):
    reason = ReasonCode.CONFIG_ERROR


class PersistenceError(DampwaveError):
    reason = ReasonCode.IO_ERROR


class SimulationError(DampwaveError):
    """Non-finite state or energy growth beyond tolerance"""
    reason = ReasonCode.INSTABILITY

    def __init__(self, message: str, step: int, time: float, context: Optional[dict[str, Any]] = None):
        super().__init__(message, {"step": step, "time": time, **(context or {})})
        self.step = step
        self.time = time


class DegenerateTraceError(DampwaveError):
    reason = ReasonCode.DEGENERATE_TRACE


class OracleMismatch(DampwaveError):
    reason = ReasonCode.ORACLE_MISMATCH


class ConfigHashMismatch(DampwaveError):
    reason = ReasonCode.HASH_MISMATCH
