"""Named Lévy density families for the quadrature tier.

A family is a density with respect to Lebesgue measure on a bounded box
``[x0, x1] × [y0, y1]`` (or on the segment ``{0} × [y0, y1]`` for the
axis family). Integrals of arbitrary integrands against the density are
computed with scipy's adaptive quadrature; families that blow up at the
origin go through a divergence detector instead of a single quad call.
"""
import logging
import math

import numpy as np
from django.conf import settings
from scipy import integrate

from .exceptions import QuadratureError, SpecError

logger = logging.getLogger(__name__)

DECAY_INFINITE = 1.0 - 1e-3
RATIO_DRIFT = 0.05


class DensityFamily:
    kind = None
    param_names = ()
    on_axis = False

    def __init__(self, params, box):
        params = params or {}
        self.params = {}
        for name in self.param_names:
            if name not in params:
                raise SpecError(f'jumps.density.params.{name}', 'is required')
            value = float(params[name])
            if not math.isfinite(value):
                raise SpecError(
                    f'jumps.density.params.{name}', 'must be finite'
                )
            self.params[name] = value
        if len(box) != 4:
            raise SpecError('jumps.density.box', 'expects [x0, x1, y0, y1]')
        self.box = tuple(float(v) for v in box)
        if not all(math.isfinite(v) for v in self.box):
            raise SpecError('jumps.density.box', 'must be bounded')
        self.validate()

    def validate(self):
        x0, x1, y0, y1 = self.box
        if not (x0 < x1 and y0 < y1):
            raise SpecError('jumps.density.box', 'needs x0 < x1 and y0 < y1')

    def pdf(self, x, y):
        raise NotImplementedError

    @property
    def singular(self):
        return False

    def pdf_bound(self):
        raise NotImplementedError

    def to_json(self):
        return {
            'kind': self.kind,
            'params': dict(self.params),
            'box': list(self.box),
        }

    def integrate(self, h, tol, radii=()):
        """∫ h(x, y) Π(dx, dy) for a vectorised integrand ``h``.

        ``radii`` lists the circles |z| = r across which ``h`` may jump;
        the quadrature is split along them.
        """
        if self.singular:
            return self._integrate_singular(h, tol, radii)
        x0, x1, y0, y1 = self.box
        value, abserr = integrate.nquad(
            lambda y, x: h(x, y) * self.pdf(x, y),
            [[y0, y1], [x0, x1]],
            opts=[
                lambda x: _quad_opts(tol, _chords(x, radii, y0, y1)),
                _quad_opts(tol, _breaks(radii, x0, x1)),
            ],
        )
        return _checked(value, abserr, tol)

    def _integrate_singular(self, h, tol, radii=()):
        raise NotImplementedError

    def sample(self, rng, n, eps):
        """Draws ``n`` jumps from the normalised density on ``|z| ≥ eps``."""
        x0, x1, y0, y1 = self.box
        bound = self.pdf_bound()
        xs = np.empty(0)
        ys = np.empty(0)
        while xs.size < n:
            batch = max(2 * (n - xs.size), 64)
            px = rng.uniform(x0, x1, batch)
            py = rng.uniform(y0, y1, batch)
            keep = np.logical_and(
                px * px + py * py >= eps * eps,
                rng.uniform(0.0, bound, batch) < self.pdf(px, py),
            )
            keep = np.logical_and(keep, np.logical_or(px != 0, py != 0))
            xs = np.concatenate([xs, px[keep]])
            ys = np.concatenate([ys, py[keep]])
        return xs[:n], ys[:n]


class UniformBox(DensityFamily):
    kind = 'uniform_box'
    param_names = ('intensity',)

    def validate(self):
        super().validate()
        if self.params['intensity'] <= 0:
            raise SpecError(
                'jumps.density.params.intensity', 'must be positive'
            )

    def pdf(self, x, y):
        return self.params['intensity'] + 0.0 * np.asarray(x, float)

    def pdf_bound(self):
        return self.params['intensity']


class ExpTails(DensityFamily):
    """c·exp(−a|x| − b|y|) restricted to the box."""

    kind = 'exp_tails'
    param_names = ('c', 'a', 'b')

    def validate(self):
        super().validate()
        if self.params['c'] <= 0:
            raise SpecError('jumps.density.params.c', 'must be positive')
        for name in ('a', 'b'):
            if self.params[name] < 0:
                raise SpecError(
                    f'jumps.density.params.{name}', 'must be nonnegative'
                )

    def pdf(self, x, y):
        c, a, b = (self.params[k] for k in self.param_names)
        return c * np.exp(-a * np.abs(x) - b * np.abs(y))

    def pdf_bound(self):
        x0, x1, y0, y1 = self.box
        near_x = 0.0 if x0 <= 0 <= x1 else min(abs(x0), abs(x1))
        near_y = 0.0 if y0 <= 0 <= y1 else min(abs(y0), abs(y1))
        return float(self.pdf(near_x, near_y))


class EtaPower(DensityFamily):
    """c·|y|^(−1−α) dy on the segment {0} × [y0, y1].

    Pure η-jumps. With a box touching zero and α ≥ 0 the measure has
    infinite activity; α ≥ 1 also makes ∫ y Π(dy) diverge near zero.
    """

    kind = 'eta_power'
    param_names = ('c', 'alpha')
    on_axis = True

    def validate(self):
        x0, x1, y0, y1 = self.box
        if x0 != 0 or x1 != 0:
            raise SpecError(
                'jumps.density.box', 'eta_power lives on x = 0 (x0 = x1 = 0)'
            )
        if not y0 < y1:
            raise SpecError('jumps.density.box', 'needs y0 < y1')
        if y0 < 0 < y1:
            raise SpecError(
                'jumps.density.box', 'eta_power cannot straddle y = 0'
            )
        if self.params['c'] <= 0:
            raise SpecError('jumps.density.params.c', 'must be positive')
        if self.params['alpha'] >= 2:
            raise SpecError(
                'jumps.density.params.alpha',
                'must be < 2 for ∫ min(y², 1) Π(dy) to converge',
            )

    def pdf(self, x, y):
        return self.params['c'] * np.abs(y) ** (-1.0 - self.params['alpha'])

    @property
    def singular(self):
        y0, y1 = self.box[2:]
        return y0 == 0 or y1 == 0

    def _segment(self, lo, hi, h, tol, radii=()):
        if lo >= hi:
            return 0.0
        value, abserr = integrate.quad(
            lambda y: h(0.0, y) * self.pdf(0.0, y),
            lo,
            hi,
            **_quad_opts(tol, _breaks(radii, lo, hi)),
        )
        return _checked(value, abserr, tol)

    def integrate(self, h, tol, radii=()):
        if self.singular:
            return self._integrate_singular(h, tol, radii)
        return self._segment(self.box[2], self.box[3], h, tol, radii)

    def _integrate_singular(self, h, tol, radii=()):
        """Decade by decade towards the origin, from either side.

        Piece k covers |y| in [far·10^-k, far·10^(1-k)], which keeps every
        quad call away from the singularity.
        """
        y0, y1 = self.box[2:]
        sign, far = (1.0, y1) if y0 == 0 else (-1.0, -y0)
        partial, total = [], 0.0
        for level in range(1, settings.GOU['DIVERGENCE_LEVELS'] + 1):
            near, edge = far * 10.0 ** -level, far * 10.0 ** (1 - level)
            lo, hi = sorted((sign * near, sign * edge))
            total += self._segment(lo, hi, h, tol, radii)
            partial.append(total)
        return extrapolate_decades(partial, tol)

    def sample(self, rng, n, eps):
        y0, y1 = self.box[2:]
        lo, hi = (y0, y1) if y0 >= 0 else (-y1, -y0)
        lo = max(lo, eps)
        alpha = self.params['alpha']
        u = rng.uniform(0.0, 1.0, n)
        if alpha == 0:
            mags = lo * np.exp(u * math.log(hi / lo))
        else:
            a_lo, a_hi = lo ** -alpha, hi ** -alpha
            mags = (a_lo + u * (a_hi - a_lo)) ** (-1.0 / alpha)
        ys = mags if y0 >= 0 else -mags
        return np.zeros(n), ys


FAMILIES = {
    family.kind: family for family in (UniformBox, ExpTails, EtaPower)
}


def build_family(kind, params, box):
    if kind not in FAMILIES:
        raise SpecError(
            'jumps.density.kind',
            f'unknown family {kind!r}; expected one of {sorted(FAMILIES)}',
        )
    return FAMILIES[kind](params, box)


def _quad_opts(tol, points):
    opts = {
        'epsabs': tol,
        'epsrel': tol,
        'limit': settings.GOU['QUAD_LIMIT'],
    }
    if points:
        opts['points'] = points
    return opts


def _breaks(radii, lo, hi):
    """±r for every radius r with ±r strictly inside (lo, hi)."""
    return sorted({
        mark for r in radii for mark in (-r, r) if lo < mark < hi
    })


def _chords(x, radii, lo, hi):
    """Heights where the vertical line through x meets the circles."""
    return _breaks(
        [math.sqrt(r * r - x * x) for r in radii if abs(x) < r], lo, hi
    )


def _checked(value, abserr, tol):
    if abserr > max(tol, tol * abs(value)):
        raise QuadratureError(
            f'quadrature error {abserr:.3g} exceeds tolerance {tol:.3g}',
            residual=abserr,
        )
    return value


def extrapolate_decades(partial, tol):
    """Limit of integrals over [10^-k, ·] as k grows.

    Power-law integrands give geometrically scaled increments from one
    decade to the next: a ratio near one means a logarithmic or worse
    divergence, a stable ratio below one a convergent geometric tail.
    """
    steps = np.diff(partial)
    last, prev, older = steps[-1], steps[-2], steps[-3]
    if abs(last) <= tol:
        return float(partial[-1])
    if prev == 0 or older == 0 or np.sign(last) != np.sign(prev):
        raise QuadratureError(
            'cannot decide convergence of a singular integral',
            residual=abs(last),
        )
    ratio = abs(last) / abs(prev)
    previous_ratio = abs(prev) / abs(older)
    if ratio >= DECAY_INFINITE and previous_ratio >= DECAY_INFINITE:
        logger.debug('singular integral diverges, ratio %.4f', ratio)
        return math.copysign(math.inf, last)
    if abs(ratio - previous_ratio) > RATIO_DRIFT or ratio >= DECAY_INFINITE:
        raise QuadratureError(
            f'unstable decay ratio {ratio:.4f} near the origin',
            residual=abs(last),
        )
    tail = last * ratio / (1.0 - ratio)
    logger.debug('singular integral converges, tail %.3g', tail)
    return float(partial[-1] + tail)
