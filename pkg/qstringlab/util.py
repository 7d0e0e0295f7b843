"""Utility functions for qstringlab."""

import hashlib
import json
import os
import sys


def loggable_progress(things, file=sys.stderr):
    """'Progressbar' that doesn't clog up logs with escape codes.

    Loops over `things` and prints a status update every 10 elements.
    Writes status updates to `file` (standard error by default).

    Yields elements in `things`.
    """
    for ord, thing in enumerate(things, 1):
        if ord % 10 == 0:
            print(ord, '....', sep='', end='', file=file, flush=True)
        yield thing
    print('done.', file=file, flush=True)


def fmt_time_period(secs):
    secs = int(round(secs))
    mins, secs = secs // 60, secs % 60
    hrs, mins = mins // 60, mins % 60
    days, hrs = hrs // 24, hrs % 24
    if days:
        return f'{days}d{hrs}h{mins}m{secs}s'
    elif hrs:
        return f'{hrs}h{mins}m{secs}s'
    elif mins:
        return f'{mins}m{secs}s'
    else:
        return f'{secs}s'


def worker_count(default=1):
    """Get the number of sweep worker processes from the environment.

    Uses the `QSTRINGLAB_WORKERS` environment variable.
    """
    value = os.environ.get('QSTRINGLAB_WORKERS') or ''
    if not value.strip():
        return default
    try:
        workers = int(value)
    except ValueError:
        raise ValueError(f'QSTRINGLAB_WORKERS is not a number: {value!r}')
    return max(workers, 1)


def canonical_json(data):
    return json.dumps(data, sort_keys=True, separators=(',', ':'))


def answer_digest(answer, algo='sha256'):
    """Hash the canonical JSON of `answer`.

    Returns a string that looks like `hashing_algorithm:hex_checksum`.
    """
    h = hashlib.new(algo)
    h.update(canonical_json(answer).encode('utf-8'))
    return f'{algo}:{h.hexdigest()}'


def ceil_log2(x):
    """Smallest integer `e` with `2**e >= x` (0 for x <= 1)."""
    return max(int(x) - 1, 0).bit_length()
