import numpy as np
import pytest

from tandemlearn import SignalModel


class TableProfile:
    """Minimal duck-typed profile: a fixed per-agent list of rule tables.

    Agents beyond the list reuse the last table.
    """

    class _Rule:
        def __init__(self, table):
            self.table = table

    def __init__(self, tables, descriptor="table"):
        self.tables = [np.asarray(t, dtype=float) for t in tables]
        self.descriptor = descriptor

    @property
    def K(self):
        return int(np.log2(len(self.tables[0])))

    def rule(self, n):
        return self._Rule(self.tables[min(n, len(self.tables)) - 1])

    def searching_mask(self, n, windows, decisions):
        return np.zeros(len(windows), dtype=bool)


@pytest.fixture
def m37():
    return SignalModel(0.3, 0.7)


@pytest.fixture
def m46():
    return SignalModel(0.4, 0.6)
