"""Bounded worker pool for per-image jobs.

Results are always returned in input order, so anything assembled from them
does not depend on the worker count.
"""

from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

T = TypeVar("T")
R = TypeVar("R")


def map_ordered(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """Apply ``fn`` to every item, fanning out to at most ``workers`` threads.

    Args:
        fn: Job run once per item; must not mutate shared state.
        items: Inputs, consumed in order.
        workers: Maximum concurrent jobs. 1 runs inline.

    Returns:
        Results in the order of ``items``.

    Raises:
        ValueError: If workers is not positive.
    """
    if workers <= 0:
        raise ValueError("workers must be greater than 0")
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))
