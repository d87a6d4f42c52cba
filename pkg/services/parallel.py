"""
Order-preserving parallel map.

Results come back in input order whatever the schedule, so outputs built
from them are deterministic.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from config import get_settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> List[R]:
    """[fn(x) for x in items], on up to `threads` worker threads (default MICROCECH_THREADS)."""
    items = list(items)
    workers = get_settings().threads if threads is None else threads
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    workers = min(workers, len(items))
    logger.debug(f"parallel map: {len(items)} items on {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
