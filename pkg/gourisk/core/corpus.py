"""Random atom triplets for property checks.

Each triplet carries at most ``max_atoms`` atoms, a mix of unit-disk and
large jumps with occasional axis atoms, and a Σ that is zero, of the
rank-1 form σ²·[[1, −u₀], [−u₀, u₀²]] or of full rank.
"""
import math

import numpy as np

from levy.regions import drift_lhs_piecewise, thetas
from levy.triplets import AtomMeasure, JumpAtom, LevyTriplet2D

SIGMA_KINDS = ('zero', 'rank1', 'full')


def _atom(rng):
    while True:
        reach = 0.9 if rng.random() < 0.5 else 3.0
        x, y = rng.uniform(-reach, reach, 2)
        roll = rng.random()
        if roll < 0.1:
            x = 0.0
        elif roll < 0.2:
            y = 0.0
        if x != 0 or y != 0:
            return JumpAtom(x, y, rng.uniform(0.1, 3.0))


def _sigma(rng, kind):
    if kind == 'zero':
        return ((0.0, 0.0), (0.0, 0.0))
    if kind == 'rank1':
        scale, u0 = rng.uniform(0.1, 2.0), rng.uniform(-3.0, 3.0)
        return (
            (scale, -u0 * scale), (-u0 * scale, u0 * u0 * scale)
        )
    a = rng.normal(size=(2, 2))
    matrix = a @ a.T + 0.1 * np.eye(2)
    return tuple(tuple(float(v) for v in row) for row in matrix)


def random_triplet(rng, max_atoms=8, kind=None):
    if kind is None:
        kind = SIGMA_KINDS[rng.integers(len(SIGMA_KINDS))]
    sigma = _sigma(rng, kind)
    count = int(rng.integers(0, max_atoms + 1))
    atoms = AtomMeasure(tuple(_atom(rng) for _ in range(count)))
    gamma = (rng.uniform(-2.0, 2.0), rng.uniform(-1.0, 3.0))
    return LevyTriplet2D(gamma, sigma, atoms)


def random_corpus(seed, size, max_atoms=8):
    rng = np.random.default_rng(seed)
    return [random_triplet(rng, max_atoms) for _ in range(size)]


def u_grid(t, rng, size=50):
    """Random u values plus the points where verdicts can switch."""
    bounds = thetas(t.jumps)
    special = [0.0] + [
        value for value in (
            bounds.theta1, bounds.theta2, bounds.theta3, bounds.theta4
        ) if math.isfinite(value)
    ]
    if t.sigma_xi2 > 0:
        special.append(-t.cov / t.sigma_xi2)
    if t.sigma_is_zero:
        special.extend(drift_lhs_piecewise(t).breakpoints)
    special = special[:size // 2]
    return special + list(rng.uniform(-4.0, 4.0, size - len(special)))
