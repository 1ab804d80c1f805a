import numpy as np
import pytest


class ScriptedRng:
    """Deterministic random-stream stub for forcing specific branches.

    Each supported method pops the next scripted value: scalars broadcast
    when a size is requested, sequences are returned as arrays.
    """

    def __init__(self, random=(), uniform=(), integers=(), standard_normal=()):
        self._random = list(random)
        self._uniform = list(uniform)
        self._integers = list(integers)
        self._standard_normal = list(standard_normal)

    @staticmethod
    def _shape(value, size):
        if size is None:
            return value if np.isscalar(value) else np.asarray(value, dtype=float)
        if np.isscalar(value):
            return np.full(size, float(value))
        return np.asarray(value, dtype=float)

    def random(self, size=None):
        return self._shape(self._random.pop(0), size)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._shape(self._uniform.pop(0), size)

    def integers(self, n):
        return self._integers.pop(0)

    def standard_normal(self, size=None):
        return self._shape(self._standard_normal.pop(0), size)


@pytest.fixture
def scripted_rng():
    return ScriptedRng
