# services/pool.py
from __future__ import annotations
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from services.settings_service import get_settings

T = TypeVar("T")
R = TypeVar("R")

log = logging.getLogger(__name__)


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """
    Map fn over items on a thread pool; results come back in input order.
    workers=None reads SCHUR_THREADS; a single worker (or item) runs inline.
    """
    items = list(items)
    n = workers if workers is not None else get_settings().threads
    n = max(1, min(n, len(items) or 1))
    if n == 1:
        return [fn(x) for x in items]
    log.debug("[parallel_map] %d items on %d workers", len(items), n)
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
