"""Closed forms and exact simulators for the two worked examples."""
from levy.presets import jump_example

from .engine import (Driver, closed_form_continuous_example,
                     stochastic_exponential)

__all__ = (
    'closed_form_continuous_example',
    'continuous_example_brownian',
    'simulate_jump_example',
    'simulate_stochastic_exponential',
)


def continuous_example_brownian(p, c):
    """The Brownian motion B behind a simulated continuous-example path."""
    return p.xi - c * p.times


def simulate_jump_example(c, lam, cfg, z=0.0, index=0):
    """Event-driven path of (−ct + N_t, 2ct − N_t) with Z and V.

    The step of ``cfg`` is not used: between arrivals the path is
    integrated in closed form.
    """
    return Driver(jump_example(c, lam), cfg).path(index, z)


def simulate_stochastic_exponential(p, sigma_xi2=0.0):
    return stochastic_exponential(p, sigma_xi2)
