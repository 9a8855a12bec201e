import logging
log = logging.getLogger(__name__)

from concurrent.futures import ProcessPoolExecutor

from .config import get_config, set_config


def get_len_of_range(start, stop):
    """Get the length of a half-open (start, stop) range."""
    if start < stop:
        return stop - start
    return 0


def split_range(start, stop, chunklen):
    '''
    Split the half-open range [start, stop) into consecutive chunks

    Parameters
    ----------
    start : int
        First value in the range.
    stop : int
        One past the last value in the range.
    chunklen : int
        Maximum number of values in each chunk.

    Returns
    -------
    list of tuple
        (chunk_start, chunk_stop) pairs in ascending order. Empty if the
        range is empty.
    '''
    if chunklen < 1:
        raise ValueError('chunklen must be positive')
    n = get_len_of_range(start, stop)
    chunks = []
    for nchunk in range((n + chunklen - 1) // chunklen):
        lb = start + nchunk * chunklen
        ub = min(lb + chunklen, stop)
        chunks.append((lb, ub))
    return chunks


def map_ordered(fn, tasks, jobs=1, cb=None, mp_context=None):
    '''
    Apply `fn` to every task and return the results in task order

    The results do not depend on `jobs`; only the runtime does. With more
    than one job, `fn` and the tasks must be picklable.

    Parameters
    ----------
    fn : callable
        Function of one argument.
    tasks : iterable
        Arguments for `fn`.
    jobs : int
        Number of worker processes. A value of 1 runs everything in the
        calling process.
    cb : {None, callable}
        Called with the fraction of tasks completed after each task.
    mp_context : {None, multiprocessing context}
        Start method for the workers. Defaults to the platform default.
    '''
    if cb is None:
        cb = lambda *a, **kw: None

    tasks = list(tasks)
    n = len(tasks)
    results = []
    if jobs <= 1 or n <= 1:
        for i, task in enumerate(tasks):
            results.append(fn(task))
            cb((i + 1) / n)
    else:
        log.debug('Distributing %d tasks over %d workers', n, jobs)
        # Workers start from the settings of this process, not the environment.
        with ProcessPoolExecutor(max_workers=min(jobs, n), initializer=set_config,
                                 initargs=(get_config(),),
                                 mp_context=mp_context) as executor:
            # executor.map yields in submission order regardless of which
            # worker finishes first.
            for i, result in enumerate(executor.map(fn, tasks)):
                results.append(result)
                cb((i + 1) / n)
    cb(1)
    return results
