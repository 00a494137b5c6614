"""Characteristic triplets of (ξ, η) and of one-dimensional processes.

Two truncation conventions coexist and are never mixed: the bivariate
``gamma_tilde`` is taken with respect to the Euclidean ball ``|z| < 1``,
the one-dimensional ``gamma`` with respect to the interval ``|x| < 1``.

Measures expose one primitive, ``integrate(g, where)``: the integral of
``g`` over the jumps for which ``where`` holds. Integrands and predicates
are vectorised numpy callables of ``(x, y)`` (or of the jump value, for
one-dimensional measures).
"""
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from django.conf import settings

from .exceptions import SpecError


def in_ball(x, y):
    return x * x + y * y < 1.0


def is_jump(x, y):
    return np.logical_or(x != 0, y != 0)


def xi_coordinate(x, y):
    return x


def eta_coordinate(x, y):
    return y


@dataclass(frozen=True)
class JumpAtom:
    x: float
    y: float
    rate: float

    def __post_init__(self):
        for name in ('x', 'y', 'rate'):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise SpecError(name, 'must be finite')
            object.__setattr__(self, name, value)
        if self.x == 0 and self.y == 0:
            raise SpecError('x', '(0, 0) is not a jump')
        if self.rate <= 0:
            raise SpecError('rate', 'must be positive')


@dataclass(frozen=True)
class AtomMeasure:
    """Finitely many jump sizes, each arriving at a Poisson rate."""

    atoms: tuple = ()

    is_atomic = True

    def __post_init__(self):
        object.__setattr__(self, 'atoms', tuple(self.atoms))

    @cached_property
    def arrays(self):
        return (
            np.array([atom.x for atom in self.atoms], dtype=float),
            np.array([atom.y for atom in self.atoms], dtype=float),
            np.array([atom.rate for atom in self.atoms], dtype=float),
        )

    @property
    def is_empty(self):
        return not self.atoms

    @property
    def total_rate(self):
        return math.fsum(self.arrays[2])

    def integrate(self, g, where=None):
        xs, ys, rates = self.arrays
        if xs.size == 0:
            return 0.0
        mask = np.ones(xs.size, dtype=bool)
        if where is not None:
            mask = np.asarray(where(xs, ys), dtype=bool)
        if not mask.any():
            return 0.0
        values = np.broadcast_to(
            np.asarray(g(xs[mask], ys[mask]), dtype=float), rates[mask].shape
        )
        return math.fsum(values * rates[mask])

    def mass(self, where=None):
        return self.integrate(lambda x, y: 1.0, where)

    def pushforward(self, fn):
        xs, ys, rates = self.arrays
        if xs.size == 0:
            return self
        new_x, new_y = fn(xs, ys)
        new_x = np.broadcast_to(np.asarray(new_x, dtype=float), xs.shape)
        new_y = np.broadcast_to(np.asarray(new_y, dtype=float), ys.shape)
        return AtomMeasure(tuple(
            JumpAtom(a, b, rate)
            for a, b, rate in zip(new_x, new_y, rates)
            if a != 0 or b != 0
        ))


@dataclass(frozen=True, eq=False)
class DensityMeasure:
    """A named density family, possibly seen through a pushforward map.

    ``transform`` maps the family's own coordinates to the coordinates
    this measure lives in; jumps sent to the origin are discarded.
    """

    family: object
    tol: float = field(default_factory=lambda: settings.GOU['QUAD_TOL'])
    transform: object = None

    is_atomic = False
    is_empty = False

    def __post_init__(self):
        tol = float(self.tol)
        if not (math.isfinite(tol) and tol > 0):
            raise SpecError('jumps.density.tol', 'must be positive')
        object.__setattr__(self, 'tol', tol)

    @property
    def is_transformed(self):
        return self.transform is not None

    def _mapped(self, x, y):
        if self.transform is None:
            return x, y
        return self.transform(x, y)

    def integrate(self, g, where=None, radii=()):
        """``radii`` are circles in the measure's own coordinates where
        ``where`` switches; they only guide quadrature of untransformed
        families.
        """
        def integrand(x, y):
            mx, my = self._mapped(x, y)
            inside = is_jump(mx, my)
            if where is not None:
                inside = np.logical_and(inside, where(mx, my))
            with np.errstate(all='ignore'):
                return np.where(inside, g(mx, my), 0.0)

        if self.transform is not None:
            radii = ()
        return self.family.integrate(integrand, self.tol, radii)

    def mass(self, where=None, radii=()):
        return self.integrate(lambda x, y: 1.0, where, radii)

    def pushforward(self, fn):
        inner = self.transform
        if inner is None:
            return DensityMeasure(self.family, self.tol, fn)
        return DensityMeasure(
            self.family, self.tol, lambda x, y: fn(*inner(x, y))
        )


@dataclass(frozen=True, eq=False)
class Measure1D:
    """Image of a bivariate jump measure under a scalar jump map.

    Jumps mapped to zero are not jumps of the one-dimensional process and
    are left out of every integral.
    """

    source: object
    coordinate: object = eta_coordinate

    @classmethod
    def from_atoms(cls, pairs):
        return cls(AtomMeasure(tuple(
            JumpAtom(0.0, value, rate) for value, rate in pairs
        )))

    @property
    def is_atomic(self):
        return self.source.is_atomic

    def values(self):
        """Atom tier only: (jump values, rates) with zero jumps dropped."""
        xs, ys, rates = self.source.arrays
        jumps = np.broadcast_to(
            np.asarray(self.coordinate(xs, ys), dtype=float), xs.shape
        )
        keep = jumps != 0
        return jumps[keep], rates[keep]

    def integrate(self, g, where=None):
        def mask(x, y):
            value = self.coordinate(x, y)
            inside = value != 0
            if where is not None:
                inside = np.logical_and(inside, where(value))
            return inside

        return self.source.integrate(
            lambda x, y: g(self.coordinate(x, y)), mask
        )

    def mass(self, where=None):
        return self.integrate(lambda v: 1.0, where)


@dataclass(frozen=True, eq=False)
class MarginalTriplet:
    gamma: float
    sigma2: float
    jumps: Measure1D = field(default_factory=lambda: Measure1D(AtomMeasure()))

    def __post_init__(self):
        gamma = float(self.gamma)
        sigma2 = float(self.sigma2)
        if not math.isfinite(gamma):
            raise SpecError('gamma', 'must be finite')
        if not (math.isfinite(sigma2) and sigma2 >= 0):
            raise SpecError('sigma2', 'must be finite and nonnegative')
        object.__setattr__(self, 'gamma', gamma)
        object.__setattr__(self, 'sigma2', sigma2)

    @classmethod
    def from_atoms(cls, gamma, sigma2=0.0, pairs=()):
        return cls(gamma, sigma2, Measure1D.from_atoms(pairs))

    @property
    def is_atomic(self):
        return self.jumps.is_atomic


@dataclass(frozen=True)
class LevyTriplet2D:
    gamma_tilde: tuple
    sigma: tuple = ((0.0, 0.0), (0.0, 0.0))
    jumps: object = field(default_factory=AtomMeasure)

    def __post_init__(self):
        if len(self.gamma_tilde) != 2:
            raise SpecError('gamma_tilde', 'expects [gamma_xi, gamma_eta]')
        gamma = tuple(float(v) for v in self.gamma_tilde)
        if not all(math.isfinite(v) for v in gamma):
            raise SpecError('gamma_tilde', 'must be finite')
        matrix = np.asarray(self.sigma, dtype=float)
        if matrix.shape != (2, 2):
            raise SpecError('sigma', 'expects a 2×2 matrix')
        if not np.all(np.isfinite(matrix)):
            raise SpecError('sigma', 'must be finite')
        scale = max(1.0, float(np.abs(matrix).max()))
        tol = settings.GOU['BOUNDARY_TOL'] * scale
        if abs(matrix[0, 1] - matrix[1, 0]) > tol:
            raise SpecError('sigma', 'must be symmetric')
        if np.linalg.eigvalsh(matrix).min() < -tol:
            raise SpecError('sigma', 'must be positive semidefinite')
        cov = float(matrix[0, 1])
        object.__setattr__(self, 'gamma_tilde', gamma)
        object.__setattr__(self, 'sigma', (
            (float(matrix[0, 0]), cov), (cov, float(matrix[1, 1]))
        ))

    @property
    def sigma_xi2(self):
        return self.sigma[0][0]

    @property
    def sigma_eta2(self):
        return self.sigma[1][1]

    @property
    def cov(self):
        return self.sigma[0][1]

    @property
    def sigma_matrix(self):
        return np.array(self.sigma, dtype=float)

    @property
    def sigma_is_zero(self):
        return self.sigma_xi2 == 0 and self.sigma_eta2 == 0 and self.cov == 0

    @property
    def is_atomic(self):
        return self.jumps.is_atomic
