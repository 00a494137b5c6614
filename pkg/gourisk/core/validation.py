"""The acceptance suite behind ``ruin_validate``.

Criteria 1-4 and 9 check the exact deciders, 5-8 the simulator and the
estimators. Every criterion is deterministic for a given seed.
"""
import logging
import math
import time
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.stats import norm

from classification.reports import Decision
from classification.ruin import delta, feasible_u_set, no_ruin_threshold
from classification.subordinators import is_subordinator_1d, is_subordinator_s
from estimation.estimators import (estimate_negative_prob, estimate_ruin,
                                   strong_order, theorem3_validate)
from levy.presets import continuous_example, jump_example
from levy.regions import thetas
from levy.transforms import s_process, scale_eta
from levy.triplets import LevyTriplet2D
from simulator.paths import PathConfig

from .corpus import random_corpus, u_grid

logger = logging.getLogger(__name__)

SUITES = {
    'exact': (1, 2, 3, 4, 9),
    'mc': (5, 6, 7, 8),
}
SUITES['all'] = tuple(sorted(SUITES['exact'] + SUITES['mc']))

JUMP_THRESHOLD = math.e / math.expm1(1.0)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str

    def to_json(self):
        return {
            'criterion': self.number,
            'title': self.title,
            'passed': self.passed,
            'detail': self.detail,
        }


def format_table(results):
    frame = pd.DataFrame(
        [
            (result.number, result.title,
             'PASS' if result.passed else 'FAIL', result.detail)
            for result in results
        ],
        columns=('#', 'criterion', 'result', 'detail'),
    )
    return frame.to_string(index=False)


class Validator:
    TITLES = {
        1: 'continuous example threshold',
        2: 'jump example threshold',
        3: 'subordinator test against the direct definition',
        4: 'lower-bound function laws',
        5: 'P(Z_T < 0) for Brownian η',
        6: 'ruin formula, closed-form case',
        7: 'strong order of the Euler Z',
        8: 'no ruin above the jump example threshold',
        9: 'scaling of η scales the threshold',
    }

    CORPUS_SIZE = 1000

    def __init__(self, seed=0, quick=False):
        self.seed = seed
        self.quick = quick
        self._corpus = None

    def size(self, n):
        return max(1, n // 10) if self.quick else n

    @property
    def corpus(self):
        if self._corpus is None:
            self._corpus = random_corpus(self.seed, self.CORPUS_SIZE)
        return self._corpus

    def run(self, suite='all'):
        return [self.check(number) for number in SUITES[suite]]

    def check(self, number):
        started = time.perf_counter()
        try:
            passed, detail = getattr(self, f'criterion_{number}')()
            passed = bool(passed)
        except Exception as error:
            logger.exception('criterion %s raised', number)
            passed, detail = False, f'{type(error).__name__}: {error}'
        logger.info(
            'criterion %s %s in %.2f s', number,
            'passed' if passed else 'failed', time.perf_counter() - started,
        )
        return CriterionResult(number, self.TITLES[number], passed, detail)

    def criterion_1(self):
        report = no_ruin_threshold(continuous_example(0.0))
        passed = (
            report.decision is Decision.NO_RUIN_FROM and report.u_star == 1.0
        )
        return passed, f'{report.decision.value}({report.u_star!r})'

    def criterion_2(self):
        t = jump_example(1.0, 1.0)
        theta2 = thetas(t.jumps).theta2
        feasible = feasible_u_set(t)
        passed = abs(theta2 - JUMP_THRESHOLD) <= 1e-12 and len(feasible) == 1
        if passed:
            piece = feasible[0]
            passed = (
                abs(piece.lo - JUMP_THRESHOLD) <= 1e-12
                and abs(piece.hi - 2.0) <= 1e-12
            )
        pieces = ', '.join(f'[{p.lo!r}, {p.hi!r}]' for p in feasible)
        return passed, f'θ₂ = {theta2!r}, feasible {pieces}'

    def criterion_3(self):
        rng = np.random.default_rng(self.seed)
        cases = mismatches = 0
        for t in self.corpus:
            for u in u_grid(t, rng, size=50):
                cases += 1
                if (
                    is_subordinator_s(t, u).verdict
                    != is_subordinator_1d(s_process(t, u)).verdict
                ):
                    mismatches += 1
        return mismatches == 0, f'{mismatches} of {cases} cases disagree'

    def criterion_4(self):
        zs = np.linspace(-5.0, 5.0, 21)
        violations = 0
        for t in self.corpus:
            feasible = feasible_u_set(t)
            values = [delta(t, z, feasible) for z in zs]
            violations += sum(
                later < earlier for earlier, later in zip(values, values[1:])
            )
            for z, value in zip(zs, values):
                if value > z:
                    violations += 1
                if math.isfinite(value) and delta(t, value, feasible) != value:
                    violations += 1
        return violations == 0, f'{violations} violations'

    def criterion_5(self):
        n = self.size(100_000)
        t = LevyTriplet2D((0.0, 0.0), ((0.0, 0.0), (0.0, 1.0)))
        cfg = PathConfig(1.0, 0.1, self.seed)
        estimate = estimate_negative_prob(t, cfg, n)
        bound = 3.0 * math.sqrt(0.25 / n)
        passed = abs(estimate.point - 0.5) <= bound
        return passed, f'{estimate.point:.5f} vs 0.5 ± {bound:.5f}, n = {n}'

    def criterion_6(self):
        n = self.size(100_000)
        t = LevyTriplet2D((1.0, 0.0), ((0.0, 0.0), (0.0, 1.0)))
        cfg = PathConfig(20.0, 1e-3, self.seed)
        passed, notes = True, []
        for z in (0.0, 0.5, 1.0):
            oracle = 2.0 * norm.cdf(-z * math.sqrt(2.0))
            record = theorem3_validate(t, z, cfg, n)
            lhs, rhs = record.lhs, record.rhs
            inside = lhs.ci_low <= oracle <= lhs.ci_high and rhs is not None
            if inside:
                inside = rhs.ci_low <= oracle <= rhs.ci_high
            passed = passed and inside
            notes.append(
                f'z={z}: ψ̂ {lhs.point:.4f}, rhs '
                f'{rhs.point if rhs else float("nan"):.4f}, oracle {oracle:.4f}'
            )
        return passed, '; '.join(notes)

    def criterion_7(self):
        steps = [2.0 ** -k for k in range(4, 11)]
        report = strong_order(0.0, steps, self.size(1000), self.seed)
        passed = 0.4 <= report.order <= 0.7 and report.stays_above_minus_one
        return passed, (
            f'order {report.order:.3f}, above −1: '
            f'{report.stays_above_minus_one}'
        )

    def criterion_8(self):
        n = self.size(10_000)
        t = jump_example(1.0, 1.0)
        cfg = PathConfig.from_settings(horizon=1000.0, seed=self.seed)
        safe = estimate_ruin(t, 1.7, cfg, n)
        unsafe = estimate_ruin(t, 0.5, cfg, n)
        passed = safe.n_events == 0 and unsafe.ci_low > 0
        return passed, (
            f'z=1.7: {safe.n_events} of {n} ruined; '
            f'z=0.5: ci_low {unsafe.ci_low:.4f}'
        )

    def criterion_9(self):
        failures, sample = 0, self.corpus[:100]
        for t in sample:
            base = no_ruin_threshold(t)
            for k in (0.5, 2.0, 10.0):
                scaled = no_ruin_threshold(scale_eta(t, k))
                if scaled.decision is not base.decision:
                    failures += 1
                elif base.u_star is not None and not math.isclose(
                    scaled.u_star, k * base.u_star,
                    rel_tol=1e-10, abs_tol=1e-12,
                ):
                    failures += 1
        return failures == 0, (
            f'{failures} of {3 * len(sample)} scalings disagree'
        )
