"""Order-preserving parallel map; PINCHLAB_THREADS caps the worker count."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    raw = os.environ.get("PINCHLAB_THREADS", "")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def pmap(fn, items):
    """Map preserving input order, so results are deterministic for any worker count."""
    items = list(items)
    n = worker_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
