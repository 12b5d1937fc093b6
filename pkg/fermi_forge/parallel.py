import logging
import os
from typing import Callable, Iterable, TypeVar

from joblib import Parallel, delayed

logger = logging.getLogger(__name__)

THREADS_ENV_VAR = "FERMI_FORGE_THREADS"

_T = TypeVar("_T")
_R = TypeVar("_R")


def n_jobs() -> int:
    """
    Returns the number of parallel workers allowed by the
    ``FERMI_FORGE_THREADS`` environment variable. Defaults to 1.
    """
    value = os.environ.get(THREADS_ENV_VAR, "1")

    try:
        jobs = int(value)
    except ValueError as err:
        msg = f"{THREADS_ENV_VAR} must be an integer, got {value!r}."
        raise ValueError(msg) from err

    return max(jobs, 1)


def parallel_map(
    func: Callable[[_T], _R],
    items: Iterable[_T],
    prefer: str = "processes",
) -> list[_R]:
    """
    Applies ``func`` to every item, in parallel when more than one worker is
    allowed. Results are returned in input order, so sweeps are reproducible
    regardless of the number of workers.

    Parameters
    ----------
    func
        The function to apply.
    items
        The inputs.
    prefer
        joblib backend preference. Use "threads" when ``func`` closes over
        objects that cannot be pickled, such as sparse factorizations.
    """
    items = list(items)
    jobs = min(n_jobs(), max(len(items), 1))

    if jobs == 1:
        return [func(item) for item in items]

    logger.debug(f"Running {len(items)} tasks on {jobs} workers.")
    parallel = Parallel(n_jobs=jobs, prefer=prefer)
    return parallel(delayed(func)(item) for item in items)
