"""Moments and tail functionals used by the convergence tests."""
import math

import numpy as np

from .exceptions import Undetermined
from .transforms import marginal_eta, marginal_xi
from .triplets import eta_coordinate, in_ball, xi_coordinate


def _outside_ball(x, y):
    return np.logical_not(in_ball(x, y))


def mean_at_one(t):
    """E[(ξ₁, η₁)] = γ̃ + ∫_{|z|≥1} z Π(dz)."""
    return (
        math.fsum((
            t.gamma_tilde[0], t.jumps.integrate(xi_coordinate, _outside_ball)
        )),
        math.fsum((
            t.gamma_tilde[1], t.jumps.integrate(eta_coordinate, _outside_ball)
        )),
    )


def total_mass(t):
    return t.jumps.mass()


def a_xi(m_xi, level):
    """A_ξ(x) = 1 + ∫₁ˣ Π_ξ((z, ∞)) dz, with A_ξ(x) = 1 for x ≤ 1."""
    if level <= 1:
        return 1.0
    excess = m_xi.jumps.integrate(
        lambda s: np.minimum(s, level) - 1.0, lambda s: s > 1.0
    )
    return 1.0 + excess


def erickson_maller_integral(t):
    """∫_{|y|>e} ln|y| / A_ξ(ln|y|) Π_η(dy).

    Exact for atom triplets. Densities live on a bounded box, where
    A_ξ ≥ 1 gives the finite bound ln(max|y|)·Π_η(|y| > e), which is
    returned instead.
    """
    m_xi = marginal_xi(t)
    m_eta = marginal_eta(t)

    def big(v):
        return np.abs(v) > math.e

    if not t.is_atomic:
        y0, y1 = t.jumps.family.box[2:]
        reach = max(abs(y0), abs(y1))
        if t.jumps.is_transformed:
            raise Undetermined(
                'no tail bound for a transformed density'
            )
        if reach <= math.e:
            return 0.0
        return math.log(reach) * m_eta.jumps.mass(big)
    values, rates = m_eta.jumps.values()
    keep = big(values)
    terms = [
        rate * math.log(abs(v)) / a_xi(m_xi, math.log(abs(v)))
        for v, rate in zip(values[keep], rates[keep])
    ]
    return math.fsum(terms)
