"""
Logging module for dampwave
Logs every command, its stages and its outcome as JSON events
"""

import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Optional

# Setup logging directory
LOG_DIR = Path(__file__).parent.parent / "logs"
LOG_DIR.mkdir(exist_ok=True)

# Create logger; numerical modules log through its children
logger = logging.getLogger("dampwave")
logger.setLevel(logging.DEBUG)

# File handler for all events
run_log = LOG_DIR / f"runs_{datetime.now().strftime('%Y%m%d')}.log"
file_handler = logging.FileHandler(run_log)
file_handler.setLevel(logging.DEBUG)

# Console handler for errors
console_handler = logging.StreamHandler()
console_handler.setLevel(logging.ERROR)

# Formatter
formatter = logging.Formatter(
    '%(asctime)s | %(levelname)s | %(message)s',
    datefmt='%Y-%m-%d %H:%M:%S'
)
file_handler.setFormatter(formatter)
console_handler.setFormatter(formatter)

logger.addHandler(file_handler)
logger.addHandler(console_handler)


def set_quiet(quiet: bool = True):
    """--quiet: keep the file log, silence the console"""
    console_handler.setLevel(logging.CRITICAL if quiet else logging.ERROR)


class RunLogger:
    """Logger for experiment commands"""

    @staticmethod
    def log_command(command: str, arguments: dict):
        """Log an incoming command (CLI or MCP tool)"""
        log_data = {
            "type": "command",
            "command": command,
            "arguments": arguments,
            "timestamp": datetime.now().isoformat()
        }
        logger.info(f"COMMAND | {json.dumps(log_data, default=str)}")

    @staticmethod
    def log_command_result(command: str, success: bool, result: Any,
                           wall_clock: Optional[float] = None, error: Optional[str] = None):
        """Log the outcome of a command; wall-clock time lives here, not in outputs"""
        # Truncate large results for logging
        result_preview = str(result)[:500] if result else None

        log_data = {
            "type": "result",
            "command": command,
            "success": success,
            "result_preview": result_preview,
            "wall_clock_seconds": wall_clock,
            "error": error,
            "timestamp": datetime.now().isoformat()
        }
        logger.info(f"RESULT | {json.dumps(log_data)}")

    @staticmethod
    def log_stage(command: str, stage: str, details: Optional[dict] = None):
        """Log progress inside a command (a member run, a fit)"""
        log_data = {
            "type": "stage",
            "command": command,
            "stage": stage,
            "details": details or {},
            "timestamp": datetime.now().isoformat()
        }
        logger.info(f"STAGE | {json.dumps(log_data, default=str)}")

    @staticmethod
    def log_warning(warning_type: str, message: str, context: Optional[dict] = None):
        """Log advisory conditions (unresolved levels, skipped fits)"""
        log_data = {
            "type": "warning",
            "warning_type": warning_type,
            "message": message,
            "context": context or {},
            "timestamp": datetime.now().isoformat()
        }
        logger.warning(f"WARNING | {json.dumps(log_data, default=str)}")

    @staticmethod
    def log_error(error_type: str, error_message: str, context: Optional[dict] = None):
        """Log errors"""
        log_data = {
            "type": "error",
            "error_type": error_type,
            "error_message": error_message,
            "context": context or {},
            "timestamp": datetime.now().isoformat()
        }
        logger.error(f"ERROR | {json.dumps(log_data, default=str)}")


# Global instance
run_logger = RunLogger()
