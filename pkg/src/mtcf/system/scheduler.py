import multiprocessing as mp
from typing import Callable, Iterable, List, Optional, TypeVar

from ..system.logger import mlog

T = TypeVar("T")
R = TypeVar("R")


class TaskScheduler:
    """
    Bounded process pool that maps a function over independent tasks.

    Results always come back in input order, so the outcome does not depend
    on the number of workers. With one worker, or one task, everything runs
    inline in the calling process.
    """

    def __init__(self, max_jobs: int = 1):
        if max_jobs < 1:
            raise ValueError("Number of jobs must be at least 1")
        self.max_jobs = max_jobs

    def run(self, func: Callable[[T], R], items: Iterable[T], label: Optional[str] = None) -> List[R]:
        tasks = list(items)
        label = label or getattr(func, "__name__", "task")
        jobs = min(self.max_jobs, len(tasks))
        if jobs <= 1:
            mlog.debug(f"Run {len(tasks)} {label} task(s) inline")
            return [func(t) for t in tasks]

        mlog.debug(f"Run {len(tasks)} {label} task(s) on {jobs} workers")
        pool = mp.Pool(processes=jobs)
        try:
            results = pool.map(func, tasks, chunksize=1)
            pool.close()
        except KeyboardInterrupt:
            mlog.info(f"{label} interrupted by user")
            pool.terminate()
            raise
        except BaseException:
            pool.terminate()
            raise
        finally:
            pool.join()
        return results


def parallel_map(func: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> List[R]:
    """Ordered map over a worker pool; `func` and items must be picklable when jobs > 1."""
    return TaskScheduler(max(1, jobs)).run(func, items)
