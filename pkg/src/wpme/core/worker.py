"""
Thread-pool fan-out for independent checks and sweep points.
Results come back in submission order, so reports and CSVs do not depend on
scheduling.
"""

import concurrent.futures
from typing import Callable, List, Optional, Sequence, TypeVar

from wpme.config.settings import settings
from wpme.services.common import log_debug

T = TypeVar("T")
R = TypeVar("R")


def run_parallel(fn: Callable[[T], R], items: Sequence[T], max_workers: Optional[int] = None) -> List[R]:
    """
    Apply fn to every item on up to max_workers threads (Settings.max_workers
    by default). The first exception raised by any call propagates.
    """
    workers = max_workers if max_workers is not None else settings.max_workers
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    results: List[Optional[R]] = [None] * len(items)
    with concurrent.futures.ThreadPoolExecutor(max_workers=min(workers, len(items))) as executor:
        future_to_index = {executor.submit(fn, item): i for i, item in enumerate(items)}
        for future in concurrent.futures.as_completed(future_to_index):
            index = future_to_index[future]
            results[index] = future.result()
            log_debug(f"worker finished item {index + 1}/{len(items)}")
    return results
