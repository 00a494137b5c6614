"""Value types of the simulator: configuration, paths and passages."""
import math
from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd
from django.conf import settings

from levy.exceptions import SpecError

SEED_LIMIT = 2 ** 64
CSV_COLUMNS = ('time', 'xi', 'eta', 'Z', 'V', 'jump')


@dataclass(frozen=True)
class PathConfig:
    horizon: float
    step: float
    seed: int = 0
    truncation_eps: float = None
    antithetic: bool = False
    checkpoints: tuple = ()

    def __post_init__(self):
        horizon, step = float(self.horizon), float(self.step)
        if not (math.isfinite(horizon) and horizon > 0):
            raise SpecError('horizon', 'must be positive')
        if not (math.isfinite(step) and step > 0):
            raise SpecError('step', 'must be positive')
        if step > horizon:
            raise SpecError('step', 'must not exceed the horizon')
        if not 0 <= int(self.seed) < SEED_LIMIT:
            raise SpecError('seed', 'must be a 64-bit unsigned integer')
        if self.truncation_eps is not None and not self.truncation_eps > 0:
            raise SpecError('truncation_eps', 'must be positive')
        marks = tuple(sorted(float(mark) for mark in self.checkpoints))
        if any(not 0 < mark <= horizon for mark in marks):
            raise SpecError('checkpoints', 'must lie in (0, horizon]')
        object.__setattr__(self, 'horizon', horizon)
        object.__setattr__(self, 'step', step)
        object.__setattr__(self, 'seed', int(self.seed))
        object.__setattr__(self, 'checkpoints', marks)

    @classmethod
    def from_settings(cls, **overrides):
        values = {
            'horizon': settings.GOU['DEFAULT_HORIZON'],
            'step': settings.GOU['DEFAULT_STEP'],
        }
        values.update(
            {key: value for key, value in overrides.items() if value is not None}
        )
        return cls(**values)

    def to_json(self):
        return {
            'horizon': self.horizon,
            'step': self.step,
            'seed': self.seed,
            'truncation_eps': self.truncation_eps,
            'antithetic': self.antithetic,
            'checkpoints': list(self.checkpoints),
        }


def _frozen(values):
    array = np.asarray(values, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Path:
    """A simulated path of (ξ, η) and, once computed, of Z and V.

    ``xi_left``/``eta_left`` hold the left limits; they differ from
    ``xi``/``eta`` only where ``jump_flags`` is set. ``exact`` marks paths
    from the event-driven integrator, whose Z and V carry no grid error.
    """

    times: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    xi_left: np.ndarray
    eta_left: np.ndarray
    jump_flags: np.ndarray
    exact: bool = False
    gaussian: bool = False
    Z: np.ndarray = None
    Z_left: np.ndarray = None
    z: float = None
    drift: tuple = field(default=(0.0, 0.0))
    V_values: np.ndarray = None
    V_left_values: np.ndarray = None

    def __post_init__(self):
        for name in ('times', 'xi', 'eta', 'xi_left', 'eta_left', 'Z',
                     'Z_left', 'V_values', 'V_left_values'):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, _frozen(value))
        flags = np.asarray(self.jump_flags, dtype=bool)
        flags.setflags(write=False)
        object.__setattr__(self, 'jump_flags', flags)

    def __len__(self):
        return self.times.size

    @property
    def jump_indices(self):
        return np.flatnonzero(self.jump_flags)

    @property
    def V(self):
        if self.V_values is not None:
            return self.V_values
        if self.Z is None or self.z is None:
            return None
        return np.exp(self.xi) * (self.z + self.Z)

    @property
    def V_left(self):
        if self.V_left_values is not None:
            return self.V_left_values
        if self.Z_left is None or self.z is None:
            return None
        return np.exp(self.xi_left) * (self.z + self.Z_left)

    def with_Z(self, Z, Z_left):
        return replace(self, Z=Z, Z_left=Z_left)

    def with_start(self, z):
        z = float(z)
        if not self.exact:
            return replace(self, z=z, V_values=None, V_left_values=None)
        V, V_left = exact_values(self, z)
        return replace(self, z=z, V_values=V, V_left_values=V_left)

    def index_of(self, time):
        k = int(np.searchsorted(self.times, time, side='right')) - 1
        return max(k, 0)

    def to_frame(self):
        V = self.V
        return pd.DataFrame({
            'time': self.times,
            'xi': self.xi,
            'eta': self.eta,
            'Z': self.Z if self.Z is not None else np.nan,
            'V': V if V is not None else np.nan,
            'jump': self.jump_flags.astype(int),
        }, columns=CSV_COLUMNS)

    def to_csv(self, filename):
        self.to_frame().to_csv(filename, index=False, float_format='%.17g')


@dataclass(frozen=True)
class FirstPassage:
    hit: bool
    time: float = None
    v_at_hit: float = None
    continuous_crossing: bool = False

    @property
    def overshoot(self):
        """V at ruin, with continuous crossings counted as exactly 0."""
        if not self.hit:
            return None
        return 0.0 if self.continuous_crossing else self.v_at_hit

    def to_json(self):
        return {
            'hit': self.hit,
            'time': self.time,
            'v_at_hit': self.v_at_hit,
            'continuous_crossing': self.continuous_crossing,
        }


def exact_values(p, z):
    """(V, V at left limits) of an exact path by forward recursion.

    On a drift segment of length h, V′ = aV + b gives
    V₋ = e^{ah}V + b·(e^{ah} − 1)/a; a jump maps V₋ to e^{Δξ}(V₋ + Δη).
    Unlike e^{ξ}(z + Z) this stays accurate when ξ wanders far from 0.
    """
    a, b = p.drift
    dt = np.diff(p.times)
    growth = np.exp(a * dt)
    with np.errstate(divide='ignore', invalid='ignore'):
        carry = np.where(a * dt == 0, dt, np.expm1(a * dt) / a)
    jump_growth = np.exp(p.xi - p.xi_left)
    d_eta = p.eta - p.eta_left
    V = np.empty(p.times.size)
    V_left = np.empty(p.times.size)
    V_left[0] = z
    V[0] = jump_growth[0] * (z + d_eta[0])
    for k in range(1, p.times.size):
        V_left[k] = growth[k - 1] * V[k - 1] + b * carry[k - 1]
        V[k] = jump_growth[k] * (V_left[k] + d_eta[k])
    return V, V_left
