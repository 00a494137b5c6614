"""Per-path random streams.

A path's randomness depends only on (seed, path index): each path gets a
Philox generator keyed by SeedSequence([seed, index]), so paths can be
generated in any order and on any number of workers with the same result.
"""
import numpy as np

GAUSSIAN, JUMPS, BRIDGE = range(3)


class PathStream:
    """Three independent substreams for one path.

    With ``antithetic`` the paths 2k and 2k + 1 share their draws and the
    odd one sees negated Gaussian increments.
    """

    def __init__(self, seed, index, antithetic=False):
        self.seed = int(seed)
        self.index = int(index)
        self.antithetic = antithetic
        key = self.index // 2 if antithetic else self.index
        children = np.random.SeedSequence([self.seed, key]).spawn(3)
        self.generators = [
            np.random.Generator(np.random.Philox(child)) for child in children
        ]

    @property
    def sign(self):
        return -1.0 if self.antithetic and self.index % 2 else 1.0

    @property
    def jumps(self):
        return self.generators[JUMPS]

    @property
    def bridge(self):
        return self.generators[BRIDGE]

    def normal(self, size):
        return self.sign * self.generators[GAUSSIAN].standard_normal(size)
