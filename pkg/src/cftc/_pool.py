"""Order-preserving parallel map capped by ``CFTC_JOBS``."""

import os
from concurrent.futures import ProcessPoolExecutor


def default_jobs():
    raw = os.environ.get("CFTC_JOBS")
    if raw:
        return max(1, int(raw))
    return os.cpu_count() or 1


def parallel_map(fn, items, jobs=None):
    items = list(items)
    jobs = default_jobs() if jobs is None else max(1, jobs)
    jobs = min(jobs, len(items))
    if jobs <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))
