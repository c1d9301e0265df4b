import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "OVERLAPCTL_THREADS"


def resolve_threads(threads=None) -> int:
    """``None`` reads ``OVERLAPCTL_THREADS`` (default 1); ``0`` means all CPUs."""
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "1") or 1)
    if threads < 0:
        raise ValueError(f"thread count must be >= 0, got {threads}")
    if threads == 0:
        threads = os.cpu_count() or 1
    return threads


def ordered_map(fn, items, threads=1):
    """``list(map(fn, items))``, optionally on a thread pool; order is kept."""
    items = list(items)
    threads = resolve_threads(threads)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))
