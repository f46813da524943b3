"""Streaming mean/variance over arrays with mergeable partial states."""

import numpy as np


class RunningMoments:
    """Count / mean / M2 accumulator over same-shaped array samples.

    Batches enter with the sample axis first; partial states from disjoint
    blocks merge associatively (up to floating point), so a fixed block
    partition reduced in block order gives results independent of how many
    workers produced the blocks.
    """

    __slots__ = ("count", "mean", "m2")

    def __init__(self, count: int = 0, mean=None, m2=None):
        self.count = count
        self.mean = mean
        self.m2 = m2

    @classmethod
    def from_batch(cls, batch: np.ndarray) -> "RunningMoments":
        batch = np.asarray(batch, dtype=np.float64)
        n = batch.shape[0]
        if n == 0:
            return cls()
        mean = batch.mean(axis=0)
        m2 = ((batch - mean) ** 2).sum(axis=0)
        return cls(n, mean, m2)

    def merge(self, other: "RunningMoments") -> "RunningMoments":
        if other.count == 0:
            return self
        if self.count == 0:
            self.count, self.mean, self.m2 = other.count, other.mean, other.m2
            return self
        n = self.count + other.count
        delta = other.mean - self.mean
        frac = other.count / n
        self.mean = self.mean + delta * frac
        self.m2 = self.m2 + other.m2 + delta**2 * (self.count * frac)
        self.count = n
        return self

    def update(self, batch: np.ndarray) -> "RunningMoments":
        return self.merge(RunningMoments.from_batch(batch))

    @property
    def variance(self):
        # Unbiased sample variance.
        if self.count == 0:
            return float("nan")
        if self.count < 2:
            return np.full_like(np.asarray(self.mean, dtype=np.float64), np.nan)
        return self.m2 / (self.count - 1)

    @property
    def std_err(self):
        return np.sqrt(self.variance / self.count)
