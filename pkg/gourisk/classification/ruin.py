"""The no-ruin decision, the feasible set of u and the lower bound δ.

u is feasible when η − uW is a subordinator. The feasible set is the
intersection of three constraints: the covariance form, the quadrant
conditions and the drift inequality. Ruin from z is impossible exactly
when δ(z) = sup{u ≤ z : u feasible} is nonnegative.
"""
import logging
import math

import numpy as np
from django.conf import settings
from scipy import optimize

from levy.exceptions import ExtendedRealError, Undetermined
from levy.extended import INF
from levy.intervals import (Interval, closure, contains, intersect,
                            normalize)
from levy.regions import (drift_lhs, drift_lhs_piecewise, gate_mass,
                          thetas)
from levy.transforms import drift_vector
from levy.triplets import in_ball

from .reports import (Branch, Decision, FiniteVariationReport, RuinReport,
                      Verdict)
from .subordinators import gates, is_subordinator_s

logger = logging.getLogger(__name__)

NON_NEGATIVE = Interval(0.0, INF)


def region_set(m, bounds):
    gate2, gate3 = gates(m)
    pieces = []
    if gate3 and bounds.theta2 <= bounds.theta4:
        pieces.append(Interval(bounds.theta2, bounds.theta4))
    if gate2 and bounds.theta1 <= bounds.theta3:
        pieces.append(Interval(bounds.theta1, bounds.theta3))
    if gate2 and gate3:
        pieces.append(Interval(bounds.theta1, bounds.theta4))
    return normalize(pieces)


def _drift_tol(t):
    scale = math.fsum((
        abs(t.gamma_tilde[0]),
        abs(t.gamma_tilde[1]),
        0.5 * t.sigma_xi2,
        t.jumps.integrate(lambda x, y: np.abs(x) + np.abs(y), in_ball),
    ))
    return settings.GOU['DRIFT_TOL'] * max(1.0, scale)


def _edge(t, a, b, tol):
    return optimize.brentq(lambda u: drift_lhs(t, u), a, b, xtol=tol)


def scan_drift_set(t, spans):
    """{u : drift_lhs ≥ 0} inside ``spans`` from a grid and root refinement.

    Used for density triplets, whose drift inequality has no closed form.
    Beyond THETA_SEARCH_CAP the sign found at the cap is assumed to hold.
    """
    cap = settings.GOU['THETA_SEARCH_CAP']
    points = settings.GOU['DRIFT_SCAN_POINTS']
    tol = t.jumps.tol
    pieces = []
    for span in spans:
        lo, hi = max(span.lo, -cap), min(span.hi, cap)
        if lo > hi:
            continue
        grid = np.linspace(lo, hi, points) if hi > lo else np.array([lo])
        values = [drift_lhs(t, u) for u in grid]
        refine = all(math.isfinite(value) for value in values)
        ok = [value >= 0 for value in values]
        k = 0
        while k < len(grid):
            if not ok[k]:
                k += 1
                continue
            j = k
            while j + 1 < len(grid) and ok[j + 1]:
                j += 1
            if k == 0:
                left = span.lo
            else:
                left = _edge(t, grid[k - 1], grid[k], tol) if refine else (
                    grid[k]
                )
            if j == len(grid) - 1:
                right = span.hi
            else:
                right = _edge(t, grid[j], grid[j + 1], tol) if refine else (
                    grid[j]
                )
            pieces.append(Interval(left, right))
            k = j + 1
    return normalize(pieces)


def _feasible(t, bounds):
    """(feasible intervals, piecewise drift or None, warnings)."""
    warnings = []
    region = region_set(t.jumps, bounds)
    if not t.sigma_is_zero:
        if t.sigma_xi2 == 0:
            return [], None, warnings
        u = -t.cov / t.sigma_xi2 + 0.0
        certificate = is_subordinator_s(t, u)
        if certificate.verdict is Verdict.UNDETERMINED:
            raise Undetermined('; '.join(certificate.warnings))
        if certificate.verdict is Verdict.YES:
            return [Interval.point(u)], None, warnings
        return [], None, warnings
    if t.is_atomic:
        drift_fn = drift_lhs_piecewise(t)
        drift_set = drift_fn.nonnegative_set(_drift_tol(t))
    else:
        drift_fn = None
        drift_set = scan_drift_set(t, region)
        warnings.append(
            'drift inequality solved on a grid of '
            f"{settings.GOU['DRIFT_SCAN_POINTS']} points per interval"
        )
    feasible = intersect(region, drift_set)
    if not all(piece.is_closed for piece in feasible):
        message = 'the feasible set is not closed; its closure is reported'
        logger.warning(message)
        warnings.append(message)
        feasible = closure(feasible)
    return feasible, drift_fn, warnings


def feasible_u_set(t):
    feasible, _, warnings = _feasible(t, thetas(t.jumps))
    for message in warnings:
        logger.info('feasible set: %s', message)
    return feasible


def _inf_positive(drift_set):
    for piece in drift_set:
        if piece.hi > 0:
            return max(piece.lo, 0.0)
    return INF


def literal_u_prime(t, bounds=None):
    """max{θ₂, inf{u > 0 : drift_lhs(t, u) ≥ 0}} for Σ = 0."""
    if bounds is None:
        bounds = thetas(t.jumps)
    if t.is_atomic:
        drift_set = drift_lhs_piecewise(t).nonnegative_set(_drift_tol(t))
    else:
        drift_set = scan_drift_set(t, [NON_NEGATIVE])
    return max(bounds.theta2, _inf_positive(drift_set))


def _candidate(t, bounds, literal):
    if t.sigma_xi2 > 0:
        return -t.cov / t.sigma_xi2 + 0.0
    for value in (literal, bounds.theta2):
        if value is not None and math.isfinite(value):
            return value
    return 0.0


def no_ruin_threshold(t):
    """ψ(z) = 0 exactly for z ≥ u*; ``RuinEverywhere`` when no u* exists."""
    branch = (
        Branch.SIGMA_POSITIVE if t.sigma_xi2 > 0 else Branch.SIGMA_ZERO
    )
    try:
        bounds = thetas(t.jumps)
        feasible, drift_fn, notes = _feasible(t, bounds)
        literal = literal_u_prime(t, bounds) if t.sigma_is_zero else None
    except (Undetermined, ExtendedRealError) as error:
        logger.info('no-ruin decision undetermined: %s', error)
        return RuinReport(
            Decision.UNDETERMINED, branch, warnings=(str(error),)
        )
    warnings = list(bounds.warnings) + notes
    admissible = intersect(feasible, [NON_NEGATIVE])
    u_star = admissible[0].lo + 0.0 if admissible else None
    if literal is not None and not contains(feasible, literal):
        message = (
            f'the literal threshold u′ = {literal:.12g} is not feasible'
        )
        logger.warning(message)
        warnings.append(message)
    certificate = is_subordinator_s(
        t, u_star if u_star is not None else _candidate(t, bounds, literal)
    )
    decision = (
        Decision.NO_RUIN_FROM if u_star is not None
        else Decision.RUIN_EVERYWHERE
    )
    logger.info('no-ruin decision %s, u* = %s', decision.value, u_star)
    return RuinReport(
        decision=decision,
        branch=branch,
        u_star=u_star,
        thetas=bounds,
        feasible_u=feasible,
        certificate=certificate,
        literal_u_prime=literal,
        drift_lhs=drift_fn,
        warnings=tuple(warnings),
    )


def delta(t, z, feasible=None):
    """δ(z) = sup{u ≤ z : η − uW is a subordinator}, −∞ if none."""
    if feasible is None:
        feasible = feasible_u_set(t)
    best = -INF
    for piece in feasible:
        if piece.lo <= z:
            best = max(best, min(piece.hi, z))
    return best


def finite_variation_decision(t):
    """The no-ruin decision read off the drift vector when Σ = 0."""
    d_xi, d_eta = drift_vector(t)
    bounds = thetas(t.jumps)
    theta2, theta4 = bounds.theta2, bounds.theta4
    report = FiniteVariationReport(Decision.RUIN_EVERYWHERE, d_xi, d_eta)
    if gate_mass(t.jumps, 3) > 0 or math.isinf(theta2) or theta2 > theta4:
        return report
    if d_xi == 0:
        if d_eta >= 0:
            return FiniteVariationReport(
                Decision.NO_RUIN_FROM, d_xi, d_eta, 1, theta2
            )
        return report
    ratio = -d_eta / d_xi + 0.0
    if d_xi > 0 and ratio <= theta4:
        return FiniteVariationReport(
            Decision.NO_RUIN_FROM, d_xi, d_eta, 2, max(theta2, ratio)
        )
    if d_xi < 0 and d_eta >= 0 and ratio >= theta2:
        return FiniteVariationReport(
            Decision.NO_RUIN_FROM, d_xi, d_eta, 3, theta2
        )
    return report
