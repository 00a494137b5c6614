"""Subordinator tests for η and for S = η − uW.

Atom triplets are decided exactly, up to the boundary and drift
tolerances from settings. For density triplets a quantity within the
quadrature tolerance of its threshold makes the verdict Undetermined.
"""
import logging
import math

from django.conf import settings

from levy.exceptions import Undetermined
from levy.extended import ext_sum
from levy.regions import drift_lhs_terms, gate_mass, thetas
from levy.transforms import d_eta, s_jump, s_variance

from .reports import SubordinatorCertificate, Verdict, conclude

logger = logging.getLogger(__name__)


def measure_tol(m):
    """Quadrature tolerance of a density measure, ``None`` for atoms."""
    source = getattr(m, 'source', m)
    if source.is_atomic:
        return None
    return source.tol


def is_null(mass, tol=None):
    if mass == 0:
        return True
    if tol is not None and mass <= tol:
        return None
    return False


def nonnegative(value, scale, tol=None):
    """value ≥ 0 up to DRIFT_TOL relative to ``scale``."""
    if math.isinf(value):
        return value > 0
    margin = settings.GOU['DRIFT_TOL'] * max(1.0, scale)
    if tol is not None:
        margin = max(margin, tol)
        if abs(value) <= margin:
            return None
    return value >= -margin


def covariance_form(t, u):
    """Σ = σ_ξ²·[[1, −u], [−u, u²]], i.e. η − uW has no Gaussian part.

    For a positive semidefinite Σ this is the vanishing of the quadratic
    form at (u, 1), which is how it is evaluated.
    """
    return s_variance(t, u) == 0


def gates(m):
    """Whether Π(A₂) and Π(A₃), taken off the x-axis, vanish."""
    tol = measure_tol(m)
    gate2 = is_null(gate_mass(m, 2), tol)
    gate3 = is_null(gate_mass(m, 3), tol)
    if gate2 is None or gate3 is None:
        raise Undetermined('a quadrant mass is within tolerance of zero')
    return gate2, gate3


def _le(a, b, tol=None):
    if a == b or math.isinf(a) or math.isinf(b):
        return a <= b
    if tol is None:
        slack = 2.0 * settings.GOU['BOUNDARY_TOL']
        return a <= b + slack * max(abs(a), abs(b))
    if abs(a - b) <= tol * max(1.0, abs(a), abs(b)):
        raise Undetermined(
            f'{a:.12g} and {b:.12g} agree within the quadrature tolerance',
            residual=abs(a - b),
        )
    return a <= b


def region_bullet(m, bounds, u):
    """Which quadrant condition admits u, or ``None``.

    1: Π(A₃) = 0, θ₂ ≤ θ₄ and u ∈ [θ₂, θ₄];
    2: Π(A₂) = 0, θ₁ ≤ θ₃ and u ∈ [θ₁, θ₃];
    3: Π(A₂) = Π(A₃) = 0 and u ∈ [θ₁, θ₄].
    """
    tol = measure_tol(m)
    gate2, gate3 = gates(m)
    t1, t2, t3, t4 = bounds.theta1, bounds.theta2, bounds.theta3, bounds.theta4
    if gate3 and _le(t2, t4, tol) and _le(t2, u, tol) and _le(u, t4, tol):
        return 1
    if gate2 and _le(t1, t3, tol) and _le(t1, u, tol) and _le(u, t3, tol):
        return 2
    if gate2 and gate3 and _le(t1, u, tol) and _le(u, t4, tol):
        return 3
    return None


def is_subordinator_1d(m):
    """σ² = 0, Π((−∞, 0)) = 0 and d ≥ 0 for a one-dimensional triplet."""
    try:
        return _subordinator_1d(m)
    except Undetermined as error:
        logger.info('subordinator test undetermined: %s', error)
        return SubordinatorCertificate.undetermined(str(error))


def _subordinator_1d(m):
    tol = measure_tol(m.jumps)
    gaussian_ok = m.sigma2 == 0
    negative = m.jumps.mass(lambda v: v < 0)
    jumps_ok = is_null(negative, tol)
    drift_d = None
    drift_ok = None
    if jumps_ok:
        drift_d = d_eta(m)
        scale = math.inf if math.isinf(drift_d) else (
            abs(m.gamma) + abs(m.gamma - drift_d)
        )
        drift_ok = nonnegative(drift_d, scale, tol)
    verdict, failing = conclude(gaussian_ok, jumps_ok, drift_ok)
    return SubordinatorCertificate(
        verdict=verdict,
        gaussian_ok=gaussian_ok,
        jumps_ok=jumps_ok,
        negative_jumps_mass=negative,
        drift_d=drift_d,
        failing_condition=failing,
    )


def is_subordinator_s(t, u):
    """Quadrant and drift conditions for S = η − uW to be a subordinator.

    Agrees with ``is_subordinator_1d(s_process(t, u))``.
    """
    u = float(u)
    try:
        return _subordinator_s(t, u)
    except Undetermined as error:
        logger.info('subordinator test at u = %s undetermined: %s', u, error)
        return SubordinatorCertificate.undetermined(str(error), u)


def _subordinator_s(t, u):
    tol = measure_tol(t.jumps)
    gaussian_ok = covariance_form(t, u)
    bounds = thetas(t.jumps)
    bullet = region_bullet(t.jumps, bounds, u)
    terms = drift_lhs_terms(t, u)
    drift = ext_sum(*terms)
    drift_ok = nonnegative(drift, math.fsum(abs(term) for term in terms), tol)
    negative = t.jumps.mass(lambda x, y: s_jump(x, y, u) < 0)
    verdict, failing = conclude(gaussian_ok, bullet is not None, drift_ok)
    return SubordinatorCertificate(
        verdict=verdict,
        gaussian_ok=gaussian_ok,
        jumps_ok=bullet is not None,
        negative_jumps_mass=negative,
        drift_d=drift,
        failing_condition=failing,
        u=u,
        region_bullet=bullet,
        warnings=bounds.warnings,
    )
