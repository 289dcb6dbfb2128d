"""A process-wide cap on the number of cells a construction may allocate.

Constructions call :func:`charge` as they create cells.  Outside a
:func:`cell_budget` block nothing is counted.
"""

from contextlib import contextmanager
from contextvars import ContextVar

from .errors import ResourceLimit

_remaining: ContextVar = ContextVar("segalpy_cell_budget", default=None)


class _Budget:
    __slots__ = ("limit", "used")

    def __init__(self, limit):
        self.limit = limit
        self.used = 0


@contextmanager
def cell_budget(limit):
    """Raise :class:`ResourceLimit` once more than ``limit`` cells are built."""
    if limit is None:
        yield None
        return
    budget = _Budget(int(limit))
    token = _remaining.set(budget)
    try:
        yield budget
    finally:
        _remaining.reset(token)


def charge(n=1):
    budget = _remaining.get()
    if budget is None:
        return
    budget.used += n
    if budget.used > budget.limit:
        raise ResourceLimit(f"cell budget of {budget.limit} exceeded")
