"""Side conditions: convergence of Z_t, stationarity of V, degeneracy of Z_∞."""
import logging
import math

import numpy as np
from django.conf import settings

from levy.exceptions import Undetermined
from levy.moments import erickson_maller_integral, mean_at_one
from levy.transforms import l_process, negate_xi, s_process, w_jump
from levy.triplets import in_ball

from .reports import ConvergenceReport, StationarityReport, Verdict
from .subordinators import covariance_form

logger = logging.getLogger(__name__)


def _mean_scale(t):
    return abs(t.gamma_tilde[0]) + t.jumps.integrate(
        lambda x, y: np.abs(x), lambda x, y: np.logical_not(in_ball(x, y))
    )


def z_infinity_converges(t):
    """Z_t = ∫ e^{−ξ} dη converges a.s. when ξ → +∞ and the η-tail is tame.

    ξ → +∞ is read off the sign of E[ξ₁]; the tail condition is the
    finiteness of ∫_{|y|>e} ln|y| / A_ξ(ln|y|) Π_η(dy).
    """
    try:
        mean_xi, _ = mean_at_one(t)
        em = erickson_maller_integral(t)
        scale = _mean_scale(t)
    except Undetermined as error:
        logger.info('convergence of Z undetermined: %s', error)
        return ConvergenceReport(Verdict.UNDETERMINED, warnings=(str(error),))
    if not math.isfinite(mean_xi):
        return ConvergenceReport(
            Verdict.UNDETERMINED, mean_xi, em,
            warnings=('E[ξ₁] does not exist',),
        )
    if mean_xi <= settings.GOU['DRIFT_TOL'] * max(1.0, scale):
        return ConvergenceReport(Verdict.NO, mean_xi, em)
    if not math.isfinite(em):
        return ConvergenceReport(Verdict.NO, mean_xi, em)
    return ConvergenceReport(Verdict.YES, mean_xi, em)


def is_stationary_possible(t):
    """Convergence test applied to (−ξ, L)."""
    if not t.is_atomic:
        return StationarityReport(
            Verdict.UNDETERMINED,
            warnings=('the L-process is only built for atom triplets',),
        )
    report = z_infinity_converges(negate_xi(l_process(t)))
    return StationarityReport(report.verdict, report)


def _candidate(t):
    if t.sigma_xi2 > 0:
        return -t.cov / t.sigma_xi2
    if t.sigma_eta2 > 0:
        return None
    for atom in t.jumps.atoms:
        if atom.x != 0:
            return atom.y / float(w_jump(atom.x))
        return None
    slope = t.gamma_tilde[0] - 0.5 * t.sigma_xi2
    if slope == 0:
        return None
    return -t.gamma_tilde[1] / slope


def is_degenerate(t):
    """k ≠ 0 with η = −kW, so that Z_∞ = k a.s.; ``None`` otherwise."""
    if not t.is_atomic:
        # absolutely continuous jumps never all cancel in η + kW
        return None
    u = _candidate(t)
    if u is None or u == 0 or not math.isfinite(u):
        return None
    if not covariance_form(t, u):
        return None
    s = s_process(t, u)
    values, _ = s.jumps.values()
    if values.size:
        return None
    scale = abs(t.gamma_tilde[1]) + abs(u) * (
        abs(t.gamma_tilde[0]) + 0.5 * t.sigma_xi2
    ) + t.jumps.integrate(lambda x, y: np.abs(y) + abs(u) * np.abs(x))
    if abs(s.gamma) > settings.GOU['DRIFT_TOL'] * max(1.0, scale):
        return None
    logger.info('Z_∞ is degenerate at k = %s', -u)
    return -u + 0.0
