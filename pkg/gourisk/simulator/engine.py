"""Jump-adapted simulation of (ξ, η), the integral Z and the GOU V.

Exact jump times are merged into the time grid so that jumps enter Z
without discretisation error. When Σ = 0 the driver is a drift plus a
compound Poisson process; such paths are integrated event by event in
closed form and need no grid at all.
"""
import logging
import math
from dataclasses import replace
from functools import partial

import numpy as np

from levy.exceptions import NotSupported
from levy.triplets import eta_coordinate, in_ball, xi_coordinate

from .paths import FirstPassage, Path
from .streams import PathStream

logger = logging.getLogger(__name__)

CONTINUOUS_SIGMA = ((1.0, -1.0), (-1.0, 1.0))


def sqrt_sigma(sigma):
    """L with L·Lᵀ = Σ for a positive semidefinite Σ."""
    values, vectors = np.linalg.eigh(np.asarray(sigma, dtype=float))
    return vectors * np.sqrt(np.clip(values, 0.0, None))


def _phi(x):
    """(1 − e^{−x}) / x, continuous at 0."""
    out = np.ones_like(x)
    nonzero = x != 0
    out[nonzero] = -np.expm1(-x[nonzero]) / x[nonzero]
    return out


class Driver:
    """A triplet made ready for repeated path simulation.

    Jump rates and the compensating drift are integrated once here and
    shared by every path of a run.
    """

    def __init__(self, t, cfg):
        self.t = t
        self.cfg = cfg
        jumps = t.jumps
        if t.is_atomic:
            kept = None
        else:
            eps = cfg.truncation_eps
            if eps is None:
                raise NotSupported(
                    'density jumps are only simulated with a truncation eps'
                )
            if jumps.is_transformed:
                raise NotSupported('transformed densities are not simulated')

            def kept(x, y):
                return x * x + y * y >= eps * eps

        def compensated(x, y):
            inside = in_ball(x, y)
            return inside if kept is None else np.logical_and(inside, kept(x, y))

        self.kept = kept
        integrate = jumps.integrate
        if kept is not None:
            integrate = partial(jumps.integrate, radii=(eps, 1.0))
        self.drift = (
            math.fsum((
                t.gamma_tilde[0], -integrate(xi_coordinate, compensated)
            )),
            math.fsum((
                t.gamma_tilde[1], -integrate(eta_coordinate, compensated)
            )),
        )
        self.rate = (
            jumps.total_rate if kept is None
            else jumps.mass(kept, radii=(eps,))
        )
        self.gaussian = not t.sigma_is_zero
        self.root = sqrt_sigma(t.sigma) if self.gaussian else None
        self.closed_form = continuous_example_drift(t)
        logger.debug(
            'driver ready: drift %s, jump rate %s, gaussian %s, '
            'closed form %s',
            self.drift, self.rate, self.gaussian, self.closed_form is not None,
        )

    @property
    def exact(self):
        return not self.gaussian

    def _jumps(self, rng):
        horizon = self.cfg.horizon
        if self.kept is None:
            xs, ys, rates = self.t.jumps.arrays
            counts = rng.poisson(rates * horizon)
            which = np.repeat(np.arange(xs.size), counts)
            times = rng.uniform(0.0, horizon, which.size)
            return times, xs[which], ys[which]
        count = int(rng.poisson(self.rate * horizon))
        times = rng.uniform(0.0, horizon, count)
        xs, ys = self.t.jumps.family.sample(rng, count, self.cfg.truncation_eps)
        return times, xs, ys

    def _base_times(self):
        horizon, step = self.cfg.horizon, self.cfg.step
        marks = [0.0, horizon, *self.cfg.checkpoints]
        if self.exact:
            return np.unique(marks)
        cells = int(math.ceil(horizon / step - 1e-9))
        grid = step * np.arange(cells)
        return np.union1d(grid, marks)

    def pair(self, index=0):
        """Path of (ξ, η) for the given path index."""
        stream = PathStream(self.cfg.seed, index, self.cfg.antithetic)
        jump_times, dx, dy = self._jumps(stream.jumps)
        base = self._base_times()
        times = np.concatenate([base, jump_times])
        flags = np.concatenate([
            np.zeros(base.size, dtype=bool), np.ones(jump_times.size, dtype=bool)
        ])
        dx = np.concatenate([np.zeros(base.size), dx])
        dy = np.concatenate([np.zeros(base.size), dy])
        order = np.argsort(times, kind='stable')
        times, flags, dx, dy = times[order], flags[order], dx[order], dy[order]

        xi = self.drift[0] * times + np.cumsum(dx)
        eta = self.drift[1] * times + np.cumsum(dy)
        if self.gaussian:
            draws = stream.normal((times.size - 1, 2))
            steps = (draws * np.sqrt(np.diff(times))[:, None]) @ self.root.T
            brownian = np.vstack([np.zeros(2), np.cumsum(steps, axis=0)])
            xi = xi + brownian[:, 0]
            eta = eta + brownian[:, 1]
        return Path(
            times=times,
            xi=xi,
            eta=eta,
            xi_left=xi - dx,
            eta_left=eta - dy,
            jump_flags=flags,
            exact=self.exact,
            gaussian=self.gaussian,
            drift=self.drift,
        )

    def path(self, index=0, z=None):
        """Path with Z computed and, when ``z`` is given, its V.

        The continuous example takes Z and V from their closed forms on
        the simulated Brownian path instead of the Euler sum.
        """
        p = self.pair(index)
        c = self.closed_form
        if c is None:
            p = p.with_Z(*compute_Z(p))
        else:
            Z = closed_form_continuous_example(c, p.times, p.xi - c * p.times)
            p = p.with_Z(Z, Z)
        if z is not None:
            p = p.with_start(z)
            if c is not None:
                V = 1.0 + (p.z - 1.0) * np.exp(p.xi)
                p = replace(p, V_values=V, V_left_values=V)
        return p

    def run(self, index, z):
        """(path, first passage) with the bridge correction drawn per path."""
        p = self.path(index, z)
        rng = None
        if self.gaussian:
            rng = PathStream(self.cfg.seed, index, self.cfg.antithetic).bridge
        if self.closed_form is not None:
            return p, continuous_example_passage(p, z, rng)
        return p, first_passage(p, z, self.t.sigma, rng)


def simulate_pair(t, cfg, index=0):
    return Driver(t, cfg).pair(index)


def compute_Z(p):
    """(Z, Z at left limits) for ``Z_t = ∫₀ᵗ e^{−ξ_{s−}} dη_s``.

    Between grid points the integrand is frozen at its left value; exact
    paths use the closed form of the drift segment instead. A jump adds
    e^{−ξ_{t−}}·Δη exactly.
    """
    dt = np.diff(p.times)
    weight = np.exp(-p.xi[:-1])
    if p.exact:
        a, b = p.drift
        growth = b * weight * dt * _phi(a * dt)
    else:
        growth = weight * (p.eta_left[1:] - p.eta[:-1])
    jumps = np.exp(-p.xi_left[1:]) * (p.eta[1:] - p.eta_left[1:])
    Z = np.concatenate([[0.0], np.cumsum(growth + jumps)])
    Z_left = Z - np.concatenate([[0.0], jumps])
    return Z, Z_left


def compute_V(p, z):
    return np.exp(p.xi) * (z + p.Z)


def _drift_crossing(v0, a, b, h):
    """Time in (0, h] at which dV = (aV + b) dt started from v0 ≥ 0 hits 0."""
    if a == 0:
        return min(h, -v0 / b) if b < 0 else h
    ratio = b / a
    if v0 + ratio == 0 or not ratio / (v0 + ratio) > 0:
        return h
    return min(h, math.log(ratio / (v0 + ratio)) / a)


def _bridge_cell(p, V, V_left, sigma, rng):
    """First cell crossed below 0 between two nonnegative grid values."""
    draws = rng.uniform(0.0, 1.0, p.times.size - 1)
    a, b = V[:-1], V_left[1:]
    (s_xx, s_xy), (_, s_yy) = sigma
    rate = s_xx * a * a + 2.0 * s_xy * a + s_yy
    dt = np.diff(p.times)
    both = np.logical_and(np.logical_and(a >= 0, b >= 0), rate * dt > 0)
    chance = np.zeros_like(a)
    with np.errstate(divide='ignore', over='ignore', invalid='ignore'):
        chance[both] = np.exp(-2.0 * a[both] * b[both] / (rate[both] * dt[both]))
    crossed = np.flatnonzero(draws < chance)
    return int(crossed[0]) + 1 if crossed.size else None


def first_passage(p, z, sigma=None, rng=None):
    """First time V drops strictly below 0.

    On grid paths a crossing by the continuous part is reported at the
    first grid value below 0 and tagged ``continuous_crossing``. With
    ``sigma`` and ``rng`` a Brownian-bridge test also catches crossings
    hidden between two nonnegative grid values. Exact paths report the
    exact crossing time of the drift segment.
    """
    if z < 0:
        return FirstPassage(True, 0.0, float(z))
    p = p if p.z == z else p.with_start(z)
    V, V_left = p.V, p.V_left
    below = np.flatnonzero(np.logical_or(V < 0, V_left < 0))
    k = int(below[0]) if below.size else None
    if sigma is not None and rng is not None and p.gaussian:
        cell = _bridge_cell(p, V, V_left, sigma, rng)
        if cell is not None and (k is None or cell <= k):
            return FirstPassage(True, float(p.times[cell]), 0.0, True)
    if k is None:
        return FirstPassage(False)
    if V_left[k] >= 0:
        return FirstPassage(True, float(p.times[k]), float(V[k]))
    if p.exact:
        a, b = p.drift
        h = p.times[k] - p.times[k - 1]
        time = p.times[k - 1] + _drift_crossing(float(V[k - 1]), a, b, h)
        return FirstPassage(True, float(time), 0.0, True)
    return FirstPassage(True, float(p.times[k]), float(V_left[k]), True)


def closed_form_continuous_example(c, times, brownian):
    """Z_t = e^{−(B_t + ct)} − 1 for (ξ, η) = (B + ct, −B + (½ − c)t)."""
    return np.expm1(-(np.asarray(brownian) + c * np.asarray(times)))


def continuous_example_drift(t):
    """c when t is the continuous example for some c, otherwise None."""
    if not t.jumps.is_empty:
        return None
    if not np.array_equal(t.sigma, CONTINUOUS_SIGMA):
        return None
    c, rest = t.gamma_tilde
    if not math.isclose(c + rest, 0.5, rel_tol=0.0, abs_tol=1e-12):
        return None
    return c


def continuous_example_passage(p, z, rng=None):
    """Ruin of V = 1 + (z − 1)e^ξ, which happens once ξ passes −log(1 − z).

    ξ has unit variance, so between grid points it is a Brownian bridge
    and the crossing chance of a cell is exact.
    """
    if z < 0:
        return FirstPassage(True, 0.0, float(z))
    if z >= 1:
        return FirstPassage(False)
    level = -math.log1p(-z)
    above = np.flatnonzero(p.xi > level)
    k = int(above[0]) if above.size else None
    if rng is not None:
        draws = rng.uniform(0.0, 1.0, p.times.size - 1)
        gap, next_gap = level - p.xi[:-1], level - p.xi[1:]
        both = np.logical_and(gap >= 0, next_gap >= 0)
        chance = np.zeros_like(gap)
        chance[both] = np.exp(
            -2.0 * gap[both] * next_gap[both] / np.diff(p.times)[both]
        )
        crossed = np.flatnonzero(draws < chance)
        if crossed.size and (k is None or crossed[0] + 1 <= k):
            k = int(crossed[0]) + 1
    if k is None:
        return FirstPassage(False)
    return FirstPassage(True, float(p.times[k]), 0.0, True)


def path_infimum(p):
    """inf of V over the path; exact between events for exact paths."""
    return float(min(p.V.min(), p.V_left.min()))


def stochastic_exponential(p, sigma_xi2):
    """(W, ε(W)) built from the randomness of a ξ path.

    W = −ξᶜ + ½σ_ξ²t + Σ (e^{−Δξ} − 1), with ξᶜ the continuous part of ξ,
    and ε(W)_t = exp(W_t − ½σ_ξ²t) · ∏ (1 + ΔW)e^{−ΔW}. Up to rounding
    ε(W) equals e^{−ξ}.
    """
    dx = p.xi - p.xi_left
    continuous = p.xi - np.cumsum(dx)
    dW = np.expm1(-dx)
    half = 0.5 * sigma_xi2 * p.times
    W = -continuous + half + np.cumsum(dW)
    factors = np.cumprod((1.0 + dW) * np.exp(-dW))
    return W, np.exp(W - half) * factors
