"""Monte Carlo estimators: ruin, P(Z_T < 0), the law of Z_∞ and the
two-sided check of the ruin formula ψ(z) = G(−z) / E[G(−V_{T_z}) | T_z < ∞].
"""
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd
from django.conf import settings

from classification.convergence import z_infinity_converges
from classification.reports import Verdict
from levy.exceptions import PreconditionError
from levy.extended import to_json
from simulator.engine import (Driver, closed_form_continuous_example,
                              compute_Z, path_infimum)
from simulator.paths import Path
from simulator.streams import PathStream

from .pool import fan_out
from .stats import (dkw_epsilon, ks_two_sample, mean_interval, wilson)

logger = logging.getLogger(__name__)

FINITE_HORIZON_NOTE = (
    'ruin is only observed up to the horizon; the estimate is a lower '
    'bound for the infinite-horizon probability'
)
PASSAGE_COLUMNS = ('index', 'hit', 'T_z', 'V_Tz', 'continuous_crossing', 'Z_T')


@dataclass(frozen=True)
class EstimateWithCI:
    point: float
    ci_low: float
    ci_high: float
    n_paths: int
    n_events: int
    horizon: float = None
    warnings: tuple = ()
    diagnostics: dict = field(default_factory=dict)

    @classmethod
    def proportion(cls, events, n, **extra):
        low, high = wilson(events, n)
        return cls(events / n, low, high, n, events, **extra)

    def to_json(self):
        return {
            'point': self.point,
            'ci_low': self.ci_low,
            'ci_high': self.ci_high,
            'n_paths': self.n_paths,
            'n_events': self.n_events,
            'horizon': self.horizon,
            'warnings': list(self.warnings),
            'diagnostics': {
                key: to_json(value) for key, value in self.diagnostics.items()
            },
        }


class EmpiricalCDF:
    """Right-continuous empirical distribution function of a sample."""

    QUANTILES = (0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99)

    def __init__(self, values, diagnostics=None):
        self.values = np.sort(np.asarray(values, dtype=float))
        self.diagnostics = diagnostics or {}

    def __len__(self):
        return self.values.size

    def count(self, x):
        return np.searchsorted(self.values, x, side='right')

    def __call__(self, x):
        return self.count(x) / self.values.size

    @property
    def dkw_epsilon(self):
        return dkw_epsilon(self.values.size)

    def to_json(self):
        return {
            'n': int(self.values.size),
            'quantiles': {
                str(q): float(np.quantile(self.values, q))
                for q in self.QUANTILES
            },
            'dkw_epsilon': self.dkw_epsilon,
            'diagnostics': {
                key: to_json(value) for key, value in self.diagnostics.items()
            },
        }


@dataclass(frozen=True)
class PassageRecord:
    index: int
    passage: object
    Z_T: float
    Z_half: float = None


@dataclass(frozen=True)
class Theorem3Record:
    """Direct ruin estimate against the formula through G = law of Z_∞.

    ``consistent`` is None when the right-hand side could not be formed.
    """

    lhs: EstimateWithCI
    rhs: EstimateWithCI = None
    consistent: bool = None
    warnings: tuple = ()

    @property
    def verdict(self):
        if self.consistent is None:
            return Verdict.UNDETERMINED
        return Verdict.YES if self.consistent else Verdict.NO

    def to_json(self):
        return {
            'lhs': self.lhs.to_json(),
            'rhs': self.rhs.to_json() if self.rhs else None,
            'consistent': self.consistent,
            'verdict': self.verdict.value,
            'warnings': list(self.warnings),
        }


@dataclass(frozen=True)
class StrongOrderReport:
    steps: tuple
    rmse: tuple
    order: float
    min_margin: float

    @property
    def stays_above_minus_one(self):
        """Every Euler Z stayed above −1 − 10·step."""
        return self.min_margin >= 0

    def to_json(self):
        return {
            'steps': list(self.steps),
            'rmse': list(self.rmse),
            'order': self.order,
            'stays_above_minus_one': self.stays_above_minus_one,
        }


def _require_convergence(t):
    report = z_infinity_converges(t)
    if report.verdict is not Verdict.YES:
        raise PreconditionError('Z_∞ does not converge for this spec')
    return report


def _with_half(cfg):
    half = 0.5 * cfg.horizon
    if half in cfg.checkpoints:
        return cfg, half
    return replace(cfg, checkpoints=cfg.checkpoints + (half,)), half


def passages(t, z, cfg, n):
    """Per-path first passages and Z at the horizon and at half of it."""
    cfg, half = _with_half(cfg)
    driver = Driver(t, cfg)

    def task(index):
        p, passage = driver.run(index, z)
        return PassageRecord(
            index, passage, float(p.Z[-1]), float(p.Z[p.index_of(half)])
        )

    return fan_out(task, n)


def estimate_ruin(t, z, cfg, n, records=None):
    """Fraction of n paths ruined before the horizon, with a Wilson interval."""
    if records is None:
        records = passages(t, z, cfg, n)
    events = sum(record.passage.hit for record in records)
    diagnostics = {}
    if z_infinity_converges(t).verdict is Verdict.YES:
        eps = settings.GOU['TAIL_EPS']
        near = sum(
            not record.passage.hit and abs(z + record.Z_T) <= eps
            for record in records
        )
        diagnostics['near_zero_fraction'] = near / n
    logger.info('ruin from z = %s: %s of %s paths', z, events, n)
    return EstimateWithCI.proportion(
        events, n, horizon=cfg.horizon,
        warnings=(FINITE_HORIZON_NOTE,), diagnostics=diagnostics,
    )


def _terminal_Z(t, cfg, n):
    driver = Driver(t, cfg)
    return np.array(fan_out(lambda index: driver.path(index).Z[-1], n))


def estimate_negative_prob(t, cfg, n):
    """Fraction of paths with Z_T < 0."""
    values = _terminal_Z(t, cfg, n)
    events = int(np.count_nonzero(values < 0))
    return EstimateWithCI.proportion(events, n, horizon=cfg.horizon)


def estimate_Zinf_cdf(t, cfg, n):
    """Empirical law of Z_T standing in for G, the law of Z_∞.

    The KS distance between the samples at T and T/2 is reported as a
    convergence-in-T diagnostic.
    """
    _require_convergence(t)
    cfg, half = _with_half(cfg)
    driver = Driver(t, cfg)

    def task(index):
        p = driver.path(index)
        return p.Z[-1], p.Z[p.index_of(half)]

    pairs = np.array(fan_out(task, n)).reshape(n, 2)
    return EmpiricalCDF(pairs[:, 0], {
        'horizon': cfg.horizon,
        'ks_half_horizon': ks_two_sample(pairs[:, 0], pairs[:, 1]),
    })


def _clip(value):
    return min(1.0, max(0.0, value))


def theorem3_validate(t, z, cfg, n):
    """Compare ψ̂(z) with Ĝ(−z) / mean of Ĝ(−V_{T_z}) over ruined paths.

    Continuous crossings enter the mean as Ĝ(0). Both sides get 95%
    intervals, the right one widened by the DKW band of Ĝ; they are
    consistent when the intervals overlap.
    """
    _require_convergence(t)
    records = passages(t, z, cfg, n)
    lhs = estimate_ruin(t, z, cfg, n, records)
    G = EmpiricalCDF([record.Z_T for record in records])
    eps = G.dkw_epsilon
    below = int(G.count(-z))
    ruined = [record for record in records if record.passage.hit]
    diagnostics = {
        'G_minus_z': below / n,
        'dkw_epsilon': eps,
        'ks_half_horizon': ks_two_sample(
            [record.Z_T for record in records],
            [record.Z_half for record in records],
        ),
    }
    minimum = settings.GOU['MIN_RUIN_EVENTS']
    if not ruined and below == 0:
        rhs = EstimateWithCI.proportion(0, n, diagnostics=diagnostics)
        message = 'no ruined paths; the right-hand side is taken as Ĝ(−z) = 0'
        return Theorem3Record(lhs, rhs, True, (message,))
    if len(ruined) < minimum:
        message = (
            f'{len(ruined)} ruined paths; at least {minimum} are needed '
            'for the right-hand side'
        )
        logger.warning(message)
        return Theorem3Record(lhs, warnings=(message,))

    num_low, num_high = wilson(below, n)
    num_low, num_high = _clip(num_low - eps), _clip(num_high + eps)
    weights = [G(-record.passage.overshoot) for record in ruined]
    mean, den_low, den_high = mean_interval(weights)
    den_low, den_high = max(den_low - eps, 0.0), den_high + eps
    if mean == 0:
        message = 'Ĝ(−V_{T_z}) vanishes on every ruined path'
        return Theorem3Record(lhs, warnings=(message,))
    diagnostics['denominator'] = mean
    rhs = EstimateWithCI(
        point=_clip((below / n) / mean),
        ci_low=_clip(num_low / den_high),
        ci_high=_clip(num_high / den_low) if den_low > 0 else 1.0,
        n_paths=n,
        n_events=len(ruined),
        horizon=cfg.horizon,
        diagnostics=diagnostics,
    )
    consistent = (
        lhs.ci_low <= rhs.ci_high and rhs.ci_low <= lhs.ci_high
    )
    logger.info(
        'ruin formula at z = %s: lhs %.4f, rhs %.4f, consistent %s',
        z, lhs.point, rhs.point, consistent,
    )
    return Theorem3Record(lhs, rhs, consistent)


def empirical_lower_bound(t, z, cfg, n):
    """min over paths of inf_t V_t."""
    driver = Driver(t, cfg)
    return float(min(fan_out(lambda i: path_infimum(driver.path(i, z)), n)))


def _euler_Z(c, times, brownian):
    """Z of the continuous example on one grid, through ``compute_Z``."""
    xi = brownian + c * times
    eta = -brownian + (0.5 - c) * times
    p = Path(
        times=times,
        xi=xi,
        eta=eta,
        xi_left=xi,
        eta_left=eta,
        jump_flags=np.zeros(times.size, dtype=bool),
        gaussian=True,
    )
    return compute_Z(p)[0]


def strong_order(c, steps, n, seed, horizon=1.0):
    """RMSE of the Euler Z against its closed form for the continuous
    example, on nested grids driven by the same Brownian increments, and
    the least-squares slope of log RMSE against log step.
    """
    steps = tuple(sorted(float(step) for step in steps))
    finest = steps[0]
    cells = int(round(horizon / finest))
    factors = [int(round(step / finest)) for step in steps]
    if any(
        cells % factor or abs(factor * finest - step) > 1e-9 * step
        for step, factor in zip(steps, factors)
    ) or abs(cells * finest - horizon) > 1e-9 * horizon:
        raise PreconditionError('steps must be nested divisors of the horizon')
    increments = np.stack(fan_out(
        lambda index: PathStream(seed, index).normal(cells), n
    )) * math.sqrt(finest)
    rmse, margin = [], math.inf
    for step, factor in zip(steps, factors):
        coarse = increments.reshape(n, -1, factor).sum(axis=2)
        brownian = np.hstack([np.zeros((n, 1)), np.cumsum(coarse, axis=1)])
        times = step * np.arange(brownian.shape[1])
        Z = np.stack(fan_out(
            lambda index: _euler_Z(c, times, brownian[index]), n
        ))
        exact = closed_form_continuous_example(c, times[-1], brownian[:, -1])
        rmse.append(float(np.sqrt(np.mean((Z[:, -1] - exact) ** 2))))
        margin = min(margin, float(Z.min()) + 1.0 + 10.0 * step)
    order = float(np.polyfit(np.log(steps), np.log(rmse), 1)[0])
    logger.info('strong order fit %.3f over %s steps', order, len(steps))
    return StrongOrderReport(steps, tuple(rmse), order, margin)


def dump_passages(records, filename):
    """Per-path (T_z, V_{T_z}) pairs as CSV."""
    frame = pd.DataFrame([
        {
            'index': record.index,
            'hit': record.passage.hit,
            'T_z': record.passage.time,
            'V_Tz': record.passage.v_at_hit,
            'continuous_crossing': record.passage.continuous_crossing,
            'Z_T': record.Z_T,
        }
        for record in records
    ], columns=PASSAGE_COLUMNS)
    frame.to_csv(filename, index=False)
    return filename
