"""
Ordered worker pool for candidate sweeps
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from tqdm import tqdm

from ..config import config

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


def parallel_map(func: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None,
                 desc: Optional[str] = None) -> List[R]:
    """Apply func to every item, returning results in input order.

    Args:
        func: Pure function of one item
        items: Work items
        workers: Pool size (defaults to config.MAX_WORKERS)
        desc: Progress bar label

    Returns:
        List of results aligned with items
    """
    items = list(items)
    workers = min(workers or config.MAX_WORKERS, max(len(items), 1))
    disable = not config.SHOW_PROGRESS

    if workers <= 1:
        return [func(item) for item in tqdm(items, desc=desc, disable=disable)]

    logger.debug(f"Dispatching {len(items)} items to {workers} workers ({desc or 'batch'})")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(tqdm(pool.map(func, items), total=len(items), desc=desc, disable=disable))


def chunked(seq: List[T], size: int) -> List[List[T]]:
    """Split seq into consecutive chunks of at most size items"""
    size = max(int(size), 1)
    return [seq[i:i + size] for i in range(0, len(seq), size)]
