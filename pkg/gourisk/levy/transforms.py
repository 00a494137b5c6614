"""Exact triplet-to-triplet maps.

Each map recomputes the truncated drift for the new jump geometry; the
corrections are integrals against the original jump measure, so atom
triplets stay exact and density triplets stay in the quadrature tier.
"""
import math

import numpy as np
from django.conf import settings

from .exceptions import (NotApplicable, NotFiniteVariation, SpecError,
                         Undetermined)
from .extended import ext_sum
from .triplets import (LevyTriplet2D, MarginalTriplet, Measure1D, in_ball,
                       eta_coordinate, xi_coordinate)


def _outside_ball_strip(coordinate):
    def where(x, y):
        return np.logical_and(
            np.abs(coordinate(x, y)) < 1.0, np.logical_not(in_ball(x, y))
        )
    return where


def marginal_xi(t):
    bridge = t.jumps.integrate(
        xi_coordinate, _outside_ball_strip(xi_coordinate)
    )
    return MarginalTriplet(
        math.fsum((t.gamma_tilde[0], bridge)),
        t.sigma_xi2,
        Measure1D(t.jumps, xi_coordinate),
    )


def marginal_eta(t):
    bridge = t.jumps.integrate(
        eta_coordinate, _outside_ball_strip(eta_coordinate)
    )
    return MarginalTriplet(
        math.fsum((t.gamma_tilde[1], bridge)),
        t.sigma_eta2,
        Measure1D(t.jumps, eta_coordinate),
    )


def w_jump(x):
    return np.expm1(-x)


def w_transform(t):
    """Triplet of (ξ, W) where e^{−ξ} is the stochastic exponential of W."""
    jumps = t.jumps.pushforward(lambda x, y: (x, w_jump(x)))
    gamma_xi = marginal_xi(t).gamma - jumps.integrate(
        xi_coordinate, _outside_ball_strip(xi_coordinate)
    )
    ball_sum = jumps.integrate(lambda x, w: x + w, in_ball)
    gamma_w = math.fsum((0.5 * t.sigma_xi2, ball_sum, -gamma_xi))
    s = t.sigma_xi2
    return LevyTriplet2D((gamma_xi, gamma_w), ((s, -s), (-s, s)), jumps)


def s_jump(x, y, u):
    """Jump of η − uW caused by a jump (x, y) of (ξ, η).

    Values within the boundary tolerance of zero are snapped to zero so
    that region predicates and the one-dimensional triplet agree.
    """
    w_part = u * w_jump(x)
    value = y - w_part
    scale = np.abs(y) + np.abs(w_part)
    return np.where(
        np.abs(value) <= settings.GOU['BOUNDARY_TOL'] * scale, 0.0, value
    )


def s_variance(t, u):
    variance = t.sigma_eta2 + u * u * t.sigma_xi2 + 2.0 * u * t.cov
    scale = t.sigma_eta2 + u * u * t.sigma_xi2 + 2.0 * abs(u * t.cov)
    if variance <= settings.GOU['DRIFT_TOL'] * scale:
        return 0.0
    return variance


def s_process(t, u):
    """One-dimensional triplet of S = η − uW."""
    u = float(u)

    def jump(x, y):
        return s_jump(x, y, u)

    def correction(x, y):
        f = jump(x, y)
        small = np.where(np.abs(f) < 1.0, f, 0.0)
        return small - np.where(in_ball(x, y), y + u * x, 0.0)

    gamma = math.fsum((
        t.gamma_tilde[1],
        u * t.gamma_tilde[0],
        -0.5 * u * t.sigma_xi2,
        t.jumps.integrate(correction),
    ))
    return MarginalTriplet(gamma, s_variance(t, u), Measure1D(t.jumps, jump))


def l_process(t):
    """Triplet of (ξ, L) with L = η + Σ(e^{−Δξ} − 1)Δη − t·Cov(B_ξ, B_η)."""
    if not t.is_atomic:
        raise Undetermined('the L-process is only built for atom triplets')
    jumps = t.jumps.pushforward(lambda x, y: (x, y * np.exp(-x)))
    gamma_xi = math.fsum((
        t.gamma_tilde[0],
        -t.jumps.integrate(xi_coordinate, in_ball),
        jumps.integrate(xi_coordinate, in_ball),
    ))
    gamma_l = math.fsum((
        t.gamma_tilde[1],
        -t.cov,
        -t.jumps.integrate(eta_coordinate, in_ball),
        jumps.integrate(eta_coordinate, in_ball),
    ))
    return LevyTriplet2D((gamma_xi, gamma_l), t.sigma, jumps)


def linear_image(t, a, b):
    """Triplet of (aξ, bη) for nonzero reals a, b."""
    if a == 0 or b == 0:
        raise SpecError('scale', 'coordinate factors must be nonzero')

    def shift(coordinate, factor):
        def moved(x, y):
            inside_after = np.asarray(in_ball(a * x, b * y), dtype=float)
            inside_before = np.asarray(in_ball(x, y), dtype=float)
            return factor * coordinate(x, y) * (inside_after - inside_before)
        return moved

    corrections = (
        t.jumps.integrate(shift(xi_coordinate, a)),
        t.jumps.integrate(shift(eta_coordinate, b)),
    )
    gamma = (
        math.fsum((a * t.gamma_tilde[0], corrections[0])),
        math.fsum((b * t.gamma_tilde[1], corrections[1])),
    )
    sigma = (
        (a * a * t.sigma_xi2, a * b * t.cov),
        (a * b * t.cov, b * b * t.sigma_eta2),
    )
    jumps = t.jumps.pushforward(lambda x, y: (a * x, b * y))
    return LevyTriplet2D(gamma, sigma, jumps)


def scale_eta(t, k):
    if not k > 0:
        raise SpecError('k', 'must be positive')
    if k == 1:
        return t
    return linear_image(t, 1.0, k)


def negate_xi(t):
    return linear_image(t, -1.0, 1.0)


def drift_vector(t):
    """(d_ξ, d_η) = γ̃ − ∫_{|z|<1} z Π(dz) for finite-variation triplets."""
    if not t.sigma_is_zero:
        raise NotFiniteVariation('the Gaussian part is not zero')
    if not t.is_atomic:
        variation = t.jumps.integrate(lambda x, y: np.hypot(x, y), in_ball)
        if math.isinf(variation):
            raise NotFiniteVariation('∫_{|z|<1} |z| Π(dz) diverges')
    return (
        math.fsum((
            t.gamma_tilde[0], -t.jumps.integrate(xi_coordinate, in_ball)
        )),
        math.fsum((
            t.gamma_tilde[1], -t.jumps.integrate(eta_coordinate, in_ball)
        )),
    )


def d_eta(m):
    """Drift of a one-dimensional triplet without negative jumps.

    Returns −∞ when ∫_(0,1) y Π(dy) diverges.
    """
    if m.jumps.mass(lambda v: v < 0) > 0:
        raise NotApplicable('the process has negative jumps')
    small = m.jumps.integrate(
        lambda v: v, lambda v: np.logical_and(v > 0, v < 1.0)
    )
    return ext_sum(m.gamma, -small)
