import importlib
import logging
import time
from queue import Queue
from threading import Thread

logger = logging.getLogger(__name__)


def sign(x):
    """Sign with sign(0) = 0, returned as int."""
    return int(x > 0) - int(x < 0)


def instantiate_from_config(config, **kwargs):
    if not "target" in config:
        raise KeyError("Expected key `target` to instantiate.")
    return get_obj_from_str(config["target"])(**config.get("params", dict()), **kwargs)


def get_obj_from_str(string):
    module, cls = string.rsplit(".", 1)
    return getattr(importlib.import_module(module, package=None), cls)


def _do_parallel_map(func, Q, part, idx):
    try:
        Q.put([idx, [func(item) for item in part]])
    except Exception as e:
        Q.put([idx, e])
    finally:
        Q.put("Done")


def parallel_map(func, items, n_proc=1):
    """Ordered map of `func` over `items` in `n_proc` threads.

    The callers are numpy-bound and release the GIL in the linear algebra.
    The first exception raised in a worker is re-raised here.
    """
    items = list(items)
    if n_proc <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    n_proc = min(n_proc, len(items))

    Q = Queue(1000)
    step = -(-len(items) // n_proc)
    parts = [items[i: i + step] for i in range(0, len(items), step)]
    processes = [Thread(target=_do_parallel_map, args=(func, Q, part, i)) for i, part in enumerate(parts)]

    start = time.time()
    gather_res = [[] for _ in parts]
    try:
        for p in processes:
            p.start()
        k = 0
        while k < len(parts):
            res = Q.get()
            if res == "Done":
                k += 1
            else:
                gather_res[res[0]] = res[1]
    finally:
        for p in processes:
            p.join()
        logger.debug(f"parallel_map over {len(items)} items done [{time.time() - start:.3f} sec.]")

    errors = [r for r in gather_res if isinstance(r, Exception)]
    if errors:
        raise errors[0]
    out = []
    for r in gather_res:
        out.extend(r)
    return out
