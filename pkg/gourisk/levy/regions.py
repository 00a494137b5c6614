"""Quadrant regions, the thresholds θ₁…θ₄ and the drift inequality in u.

Quadrants are closed: A₁ = {x ≥ 0, y ≥ 0}, A₂ = {x ≥ 0, y ≤ 0},
A₃ = {x ≤ 0, y ≤ 0}, A₄ = {x ≤ 0, y ≥ 0}. The moving region
A_i^u = A_i ∩ {y − u(e^{−x} − 1) < 0} holds the jumps that push V down
when V₋ = u.
"""
import bisect
import enum
import logging
import math
from dataclasses import dataclass

import numpy as np
from django.conf import settings
from scipy import optimize

from .exceptions import NotSupported, QuadratureError
from .extended import INF, ext_sum, to_json
from .intervals import Interval, normalize
from .transforms import s_jump, w_jump
from .triplets import in_ball

logger = logging.getLogger(__name__)


class Variation(str, enum.Enum):
    FINITE = 'Finite'
    INFINITE = 'Infinite'
    UNDETERMINED = 'Undetermined'


def quadrant(i):
    def where(x, y):
        right = x >= 0 if i in (1, 2) else x <= 0
        upper = y >= 0 if i in (1, 4) else y <= 0
        return np.logical_and(right, upper)
    return where


def moving_region(i, u):
    inside = quadrant(i)

    def where(x, y):
        return np.logical_and(inside(x, y), s_jump(x, y, u) < 0)
    return where


def region_mass(m, i, u):
    """Π(A_i^u) for quadrant index ``i`` in 1..4."""
    if i not in (1, 2, 3, 4):
        raise ValueError(f'quadrant index must be 1..4, got {i}')
    return m.mass(moving_region(i, u))


def gate_mass(m, i):
    """Mass of A₂ or A₃ off the x-axis.

    Pure ξ-jumps sit on the shared edge of two quadrants and never make
    η − uW jump down at u = 0, so the gates of the subordinator test
    ignore them; they still enter the thresholds.
    """
    right = i == 2
    return m.mass(lambda x, y: np.logical_and(
        x >= 0 if right else x <= 0, y < 0
    ))


def threshold(x, y):
    """The u at which y − u(e^{−x} − 1) changes sign, for x ≠ 0."""
    return y / w_jump(x) + 0.0


@dataclass(frozen=True)
class ThetaBounds:
    theta1: float
    theta2: float
    theta3: float
    theta4: float
    warnings: tuple = ()

    def to_json(self):
        return {
            'theta1': to_json(self.theta1),
            'theta2': to_json(self.theta2),
            'theta3': to_json(self.theta3),
            'theta4': to_json(self.theta4),
        }


def thetas(m):
    if m.is_atomic:
        return _atom_thetas(m)
    return _density_thetas(m)


def _atom_thetas(m):
    candidates = {1: [], 2: [], 3: [], 4: []}
    on_axis = {1: -INF, 2: INF, 3: -INF, 4: INF}
    for atom in m.atoms:
        for i in (1, 2, 3, 4):
            if not quadrant(i)(atom.x, atom.y):
                continue
            if atom.x == 0:
                candidates[i].append(on_axis[i])
            else:
                candidates[i].append(threshold(atom.x, atom.y))
    return ThetaBounds(
        theta1=max(candidates[1], default=-INF),
        theta2=max([0.0] + candidates[2]),
        theta3=min([0.0] + candidates[3]),
        theta4=min(candidates[4], default=INF),
    )


def _density_thetas(m):
    cap = settings.GOU['THETA_SEARCH_CAP']
    tol = m.tol
    warnings = []

    def mass_fn(i):
        return lambda u: region_mass(m, i, u)

    theta1 = _sup_positive(mass_fn(1), -cap, 0.0, -INF, tol)
    theta2 = _sup_positive(mass_fn(2), 0.0, cap, 0.0, tol)
    theta3 = _inf_positive(mass_fn(3), -cap, 0.0, 0.0, tol)
    theta4 = _inf_positive(mass_fn(4), 0.0, cap, INF, tol)
    for name, value, i in (
        ('theta1', theta1, 1), ('theta2', theta2, 2),
        ('theta3', theta3, 3), ('theta4', theta4, 4),
    ):
        if math.isinf(value) or value == 0:
            continue
        step = 1e-6 * max(1.0, abs(value))
        probe = value - step if i in (1, 2) else value + step
        if region_mass(m, i, probe) <= tol:
            message = (
                f'{name}: region mass vanishes next to {value:.6g}'
            )
            logger.warning(message)
            warnings.append(message)
    return ThetaBounds(theta1, theta2, theta3, theta4, tuple(warnings))


def _sup_positive(mass, lo, hi, empty, tol):
    """sup{u ∈ [lo, hi] : mass(u) > tol} for a nonincreasing ``mass``."""
    if mass(lo) <= tol:
        return empty
    if mass(hi) > tol:
        return INF if hi > 0 else hi
    return optimize.brentq(lambda u: mass(u) - tol, lo, hi, xtol=tol)


def _inf_positive(mass, lo, hi, empty, tol):
    """inf{u ∈ [lo, hi] : mass(u) > tol} for a nondecreasing ``mass``."""
    if mass(hi) <= tol:
        return empty
    if mass(lo) > tol:
        return -INF if lo < 0 else lo
    return optimize.brentq(lambda u: mass(u) - tol, lo, hi, xtol=tol)


def drift_lhs_terms(t, u):
    """Summands of γ̃_η + uγ̃_ξ − ½uσ_ξ² − ∫ (y + ux) dΠ.

    The integral runs over unit-disk jumps with y − u(e^{−x} − 1) ≥ 0:
    jumps on which η − uW does not move leave its drift unchanged.
    """
    def active(x, y):
        return np.logical_and(in_ball(x, y), s_jump(x, y, u) >= 0)

    integral = t.jumps.integrate(lambda x, y: y + u * x, active)
    return (
        t.gamma_tilde[1],
        u * t.gamma_tilde[0],
        -0.5 * u * t.sigma_xi2,
        -integral,
    )


def drift_lhs(t, u):
    return ext_sum(*drift_lhs_terms(t, u))


@dataclass(frozen=True)
class PiecewiseLinearFn:
    """Affine on each open piece between breakpoints.

    ``slopes``/``intercepts`` have one entry per piece (one more than the
    breakpoints); ``point_values`` hold the value at each breakpoint,
    which may differ from both one-sided limits.
    """

    breakpoints: tuple
    slopes: tuple
    intercepts: tuple
    point_values: tuple

    def __call__(self, u):
        k = bisect.bisect_left(self.breakpoints, u)
        if k < len(self.breakpoints) and self.breakpoints[k] == u:
            return self.point_values[k]
        return self.slopes[k] * u + self.intercepts[k]

    def left_limit(self, k):
        point = self.breakpoints[k]
        return self.slopes[k] * point + self.intercepts[k]

    def right_limit(self, k):
        point = self.breakpoints[k]
        return self.slopes[k + 1] * point + self.intercepts[k + 1]

    def _bounds(self, k):
        lo = self.breakpoints[k - 1] if k > 0 else -INF
        hi = self.breakpoints[k] if k < len(self.breakpoints) else INF
        return lo, hi

    def nonnegative_set(self, tol=0.0):
        """{u : f(u) ≥ 0}; flat pieces and breakpoints accept f ≥ −tol."""
        pieces = []
        for k, (slope, intercept) in enumerate(
            zip(self.slopes, self.intercepts)
        ):
            lo, hi = self._bounds(k)
            if slope == 0:
                if intercept >= -tol:
                    pieces.append(Interval(lo, hi, False, False))
                continue
            root = -intercept / slope
            if slope > 0:
                pieces.append(
                    Interval(lo, hi, False, False) & Interval(root, INF)
                )
            else:
                pieces.append(
                    Interval(lo, hi, False, False) & Interval(-INF, root)
                )
        for point, value in zip(self.breakpoints, self.point_values):
            if value >= -tol:
                pieces.append(Interval.point(point))
        return normalize(pieces)

    def to_json(self):
        return {
            'breakpoints': list(self.breakpoints),
            'pieces': [
                {'slope': slope, 'intercept': intercept}
                for slope, intercept in zip(self.slopes, self.intercepts)
            ],
            'point_values': list(self.point_values),
        }


def _active(x, y, u):
    if x > 0:
        return u >= threshold(x, y)
    if x < 0:
        return u <= threshold(x, y)
    return y > 0


def drift_lhs_piecewise(t):
    """Exact u ↦ drift_lhs(t, u) for atom triplets."""
    if not t.is_atomic:
        raise NotSupported('the piecewise drift form needs atom triplets')
    disk = [atom for atom in t.jumps.atoms if in_ball(atom.x, atom.y)]
    breakpoints = sorted({
        threshold(atom.x, atom.y) for atom in disk if atom.x != 0
    })
    base_slope = t.gamma_tilde[0] - 0.5 * t.sigma_xi2
    base_intercept = t.gamma_tilde[1]

    def affine_at(u):
        live = [atom for atom in disk if _active(atom.x, atom.y, u)]
        slope = math.fsum(
            [base_slope] + [-atom.rate * atom.x for atom in live]
        )
        intercept = math.fsum(
            [base_intercept] + [-atom.rate * atom.y for atom in live]
        )
        return slope, intercept

    if breakpoints:
        probes = (
            [breakpoints[0] - 1.0]
            + [0.5 * (a + b) for a, b in zip(breakpoints, breakpoints[1:])]
            + [breakpoints[-1] + 1.0]
        )
    else:
        probes = [0.0]
    affine = [affine_at(u) for u in probes]
    point_values = []
    for point in breakpoints:
        slope, intercept = affine_at(point)
        point_values.append(slope * point + intercept)
    return PiecewiseLinearFn(
        breakpoints=tuple(breakpoints),
        slopes=tuple(s for s, _ in affine),
        intercepts=tuple(c for _, c in affine),
        point_values=tuple(point_values),
    )


def small_jump_variation(t, u):
    """Whether ∫ f 1(0 < f < 1) dΠ is finite for f = y − u(e^{−x} − 1)."""
    if t.is_atomic:
        return Variation.FINITE

    def jump(x, y):
        return s_jump(x, y, u)

    try:
        value = t.jumps.integrate(
            jump, lambda x, y: np.logical_and(jump(x, y) > 0, jump(x, y) < 1)
        )
    except QuadratureError as error:
        logger.info('small-jump variation undetermined: %s', error)
        return Variation.UNDETERMINED
    return Variation.INFINITE if math.isinf(value) else Variation.FINITE
