# services/log_service.py
from __future__ import annotations
import logging
from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:  # pragma: no cover
    from services.report_service import CheckResult

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

_CONFIGURED = False

log = logging.getLogger(__name__)


def level_from_verbosity(verbose: int, default: str = "WARNING") -> int:
    if verbose >= 2:
        return logging.DEBUG
    if verbose == 1:
        return logging.INFO
    return getattr(logging, default.upper(), logging.WARNING)


def setup_logging(level: Optional[int] = None) -> None:
    """Configure the root handler once; later calls only adjust the level."""
    global _CONFIGURED
    if level is None:
        from services.settings_service import get_settings
        level = getattr(logging, get_settings().log_level, logging.WARNING)
    root = logging.getLogger()
    if not _CONFIGURED:
        logging.basicConfig(format=LOG_FORMAT)
        _CONFIGURED = True
    root.setLevel(level)


def log_check(result: "CheckResult") -> None:
    if result.passed:
        log.info("[check] %s: pass (%d instances)", result.name, result.instances)
    else:
        shown = "; ".join(result.violations[:3])
        log.warning(
            "[check] %s: FAIL (%d of %d instances) %s",
            result.name, result.failures, result.instances, shown,
        )
