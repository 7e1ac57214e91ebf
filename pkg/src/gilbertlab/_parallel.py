"""Process-pool helper with deterministic, order-preserving results.

Work items carry their own derived random streams, so the mapping from item
to result never depends on how items are spread over workers; pmap only has
to keep results in input order, which multiprocessing.Pool.map already
guarantees. Worker count therefore changes wall time, never output.
"""

from __future__ import annotations

import multiprocessing
import os

from .errors import InvalidParameterError

__all__ = ["worker_count", "pmap"]


def worker_count(requested: int | None = None) -> int:
    """Resolve a worker count: explicit argument, else env, else 1."""
    if requested is None:
        raw = os.environ.get("GILBERTLAB_WORKERS", "1")
        try:
            requested = int(raw)
        except ValueError:
            raise InvalidParameterError(f"GILBERTLAB_WORKERS must be an integer, got {raw!r}")
    requested = int(requested)
    if requested < 1:
        raise InvalidParameterError("worker count must be >= 1")
    return requested


def pmap(fn, items, workers: int | None = None, chunksize: int = 1) -> list:
    """Map fn over items, in order, optionally across processes."""
    items = list(items)
    workers = worker_count(workers)
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    try:
        ctx = multiprocessing.get_context("fork")
    except ValueError:  # pragma: no cover
        ctx = multiprocessing.get_context("spawn")
    with ctx.Pool(processes=min(workers, len(items))) as pool:
        return pool.map(fn, items, chunksize=max(1, chunksize))
