# coding=utf-8
r"""
pygmreduce
Copyright (C) 2021 PlayerG9

This program is free software: you can redistribute it and/or modify it under
the terms of the GNU Lesser General Public License as published by the Free
Software Foundation, either version 3 of the License, or (at your option) any
later version.

This program is distributed in the hope that it will be useful, but WITHOUT
ANY WARRANTY; without even the implied warranty of MERCHANTABILITY or FITNESS
FOR A PARTICULAR PURPOSE. See the GNU Lesser General Public License for more
details.

You should have received a copy of the GNU Lesser General Public License
along with this program. If not, see <http://www.gnu.org/licenses/>.
"""

import logging
import threading

from six.moves import queue


_log = logging.getLogger(__name__)


def parallel_map(func, items, threads=1):
    """Applies ``func`` to every item, optionally from several threads.

    Results are stored by index, so the returned list is in input order no
    matter how the jobs were scheduled.

    :param callable func: The function to apply.

    :param items: The items.

    :param int threads: The number of worker threads. Values below ``2`` run
        everything in the calling thread.

    :return: a list of results
    """
    items = list(items)
    if threads is None or threads < 2 or len(items) < 2:
        return [func(item) for item in items]

    jobs = queue.Queue()
    for index, item in enumerate(items):
        jobs.put((index, item))

    results = [None] * len(items)
    errors = []

    def worker():
        while True:
            try:
                index, item = jobs.get_nowait()
            except queue.Empty:
                return
            try:
                results[index] = func(item)
            except BaseException as e:
                errors.append((index, e))

    workers = [
        threading.Thread(target=worker)
        for _ in range(min(threads, len(items)))]
    for w in workers:
        w.start()
    for w in workers:
        w.join()

    if errors:
        # Report the failure of the first item, as a sequential run would
        index, error = min(errors, key=lambda e: e[0])
        _log.debug('job %d failed in worker thread', index)
        raise error

    return results
