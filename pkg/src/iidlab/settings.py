import logging
import os

logger = logging.getLogger(__name__)

THREADS_VARIABLE = "IIDLAB_THREADS"
_DEFAULT_MAX_THREADS = 4


def worker_count() -> int:
    """Worker threads for parallel batch work: IIDLAB_THREADS when it holds a positive
    integer, otherwise min(4, cpu count).

    :return: Number of workers, at least 1
    :rtype: int
    """

    default = max(1, min(_DEFAULT_MAX_THREADS, os.cpu_count() or 1))
    raw = os.environ.get(THREADS_VARIABLE)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning("ignoring %s=%r: not an integer; using %d", THREADS_VARIABLE, raw, default)
        return default
    if value <= 0:
        logger.warning("ignoring %s=%r: must be positive; using %d", THREADS_VARIABLE, raw, default)
        return default
    return value
