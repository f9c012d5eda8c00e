"""
Deterministic chunked parallel map for per-sample work.

Samples are split into fixed-size chunks independent of the worker count, and
results are reassembled in chunk order. Reductions over the chunk results are
therefore bit-identical whatever QVA_THREADS is set to.
"""
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, TypeVar

T = TypeVar("T")

CHUNK_SIZE = 256

logger = logging.getLogger("qva.parallel")


def worker_count() -> int:
    """Number of threads to use, from QVA_THREADS (0 or unset means auto)."""
    raw = os.getenv("QVA_THREADS", "0").strip() or "0"
    try:
        requested = int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer QVA_THREADS={raw!r}")
        requested = 0
    if requested <= 0:
        return os.cpu_count() or 1
    return requested


def chunk_bounds(n_items: int, chunk_size: int = CHUNK_SIZE) -> List[slice]:
    return [slice(start, min(start + chunk_size, n_items)) for start in range(0, n_items, chunk_size)]


def chunked_map(fn: Callable[[slice], T], n_items: int) -> List[T]:
    """Apply `fn` to each chunk slice of range(n_items), returning results in chunk order."""
    chunks = chunk_bounds(n_items)
    workers = min(worker_count(), len(chunks))
    if workers <= 1:
        return [fn(chunk) for chunk in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))
