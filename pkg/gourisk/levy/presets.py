"""The two worked examples as triplets."""
from .triplets import AtomMeasure, JumpAtom, LevyTriplet2D


def continuous_example(c=0.0):
    """(ξ_t, η_t) = (B_t + ct, −B_t + (1/2 − c)t)."""
    c = float(c)
    return LevyTriplet2D(
        gamma_tilde=(c, 0.5 - c),
        sigma=((1.0, -1.0), (-1.0, 1.0)),
    )


def jump_example(c=1.0, lam=1.0):
    """(ξ_t, η_t) = (−ct + N_t, 2ct − N_t), N a Poisson process of rate λ.

    The jump (1, −1) lies outside the unit ball, so γ̃ is the drift itself.
    """
    c = float(c)
    return LevyTriplet2D(
        gamma_tilde=(-c, 2.0 * c),
        jumps=AtomMeasure((JumpAtom(1.0, -1.0, lam),)),
    )
