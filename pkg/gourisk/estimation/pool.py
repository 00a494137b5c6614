"""Fan-out of per-path work over a thread pool.

Work items are path indices; results come back in index order, so what
an estimator computes depends on (seed, n) only and not on THREADS.
"""
import logging
from concurrent.futures import ThreadPoolExecutor

from django.conf import settings

logger = logging.getLogger(__name__)


def _batches(n):
    size = settings.GOU['BATCH_SIZE']
    return [range(lo, min(lo + size, n)) for lo in range(0, n, size)]


def fan_out(task, n):
    """[task(0), …, task(n − 1)] computed on GOU['THREADS'] workers."""
    batches = _batches(n)
    done = []

    def run(batch):
        results = [task(index) for index in batch]
        done.append(len(batch))
        logger.debug('paths done: %s of %s', sum(done), n)
        return results

    workers = max(1, settings.GOU['THREADS'])
    if workers == 1 or len(batches) <= 1:
        chunks = map(run, batches)
        return [item for chunk in chunks for item in chunk]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        chunks = list(pool.map(run, batches))
    return [item for chunk in chunks for item in chunk]
