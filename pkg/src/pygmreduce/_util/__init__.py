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

import contextlib
import os
import tempfile


@contextlib.contextmanager
def serialized_output(path, mode='w'):
    """Writes a file atomically.

    This function is a context manager that yields an open file object for a
    temporary file next to ``path``. When the block exits normally, the
    temporary file replaces ``path``; otherwise it is removed and ``path`` is
    left untouched.

    :param str path: The destination path.

    :param str mode: The file mode; ``'w'`` for text, ``'wb'`` for bytes.
    """
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(
        '.%s' % (os.path.splitext(path)[1].lstrip('.') or 'tmp'),
        dir=directory)
    try:
        with os.fdopen(fd, mode) as f:
            yield f
        os.replace(tmp, path)

    except:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
