import math
import os
import tempfile
from unittest import mock

import numpy as np
import pandas as pd
from django.conf import settings
from django.test import SimpleTestCase, override_settings
from scipy import stats

from classification.convergence import is_degenerate
from classification.reports import Verdict
from levy.exceptions import PreconditionError
from levy.presets import continuous_example, jump_example
from levy.transforms import linear_image, w_transform
from levy.triplets import AtomMeasure, JumpAtom, LevyTriplet2D
from simulator.engine import compute_Z
from simulator.paths import PathConfig

from ..estimators import (PASSAGE_COLUMNS, EmpiricalCDF, EstimateWithCI,
                          dump_passages, empirical_lower_bound,
                          estimate_negative_prob, estimate_ruin,
                          estimate_Zinf_cdf, passages, strong_order,
                          theorem3_validate)
from ..stats import dkw_epsilon, wilson

BROWNIAN_ETA_UP = ((0.0, 0.0), (0.0, 1.0))
PSI_HALF = 2.0 * stats.norm.cdf(-0.5 * math.sqrt(2.0))


def xi_up_eta_brownian():
    """ξ_t = t, η: стандартное броуновское движение."""
    return LevyTriplet2D((1.0, 0.0), BROWNIAN_ETA_UP)


class StatsTests(SimpleTestCase):
    def test_wilson_at_zero_events(self):
        low, high = wilson(0, 100)

        self.assertEqual(low, 0.0)
        self.assertGreater(high, 0.0)
        self.assertLess(high, 0.05)

    def test_wilson_at_all_events(self):
        low, high = wilson(100, 100)

        self.assertEqual(high, 1.0)
        self.assertGreater(low, 0.95)

    def test_proportion_interval_contains_point(self):
        for n in (1, 7, 100, 10_000):
            for events in sorted({0, 1, n // 3, n - 1, n}):
                with self.subTest(n=n, events=events):
                    estimate = EstimateWithCI.proportion(events, n)
                    self.assertLessEqual(0.0, estimate.ci_low)
                    self.assertLessEqual(estimate.ci_low, estimate.point)
                    self.assertLessEqual(estimate.point, estimate.ci_high)
                    self.assertLessEqual(estimate.ci_high, 1.0)

    def test_zero_events_never_give_a_positive_lower_bound(self):
        for n in (10, 1000, 100_000):
            with self.subTest(n=n):
                self.assertEqual(EstimateWithCI.proportion(0, n).ci_low, 0.0)

    def test_dkw_band(self):
        self.assertAlmostEqual(
            dkw_epsilon(1000), math.sqrt(math.log(40.0) / 2000.0)
        )

    def test_empirical_cdf(self):
        G = EmpiricalCDF([3.0, 1.0, 2.0])
        cases = ((0.0, 0.0), (1.0, 1 / 3), (1.5, 1 / 3), (2.0, 2 / 3),
                 (10.0, 1.0))
        for x, expected in cases:
            with self.subTest(x=x):
                self.assertAlmostEqual(G(x), expected)
        self.assertEqual(G.to_json()['n'], 3)


class RuinEstimateTests(SimpleTestCase):
    def test_eta_subordinator_never_ruins_from_zero(self):
        t = LevyTriplet2D(
            (0.5, 1.0), jumps=AtomMeasure((JumpAtom(0.3, 0.4, 1.0),))
        )
        estimate = estimate_ruin(t, 0.0, PathConfig(10.0, 1.0, seed=1), 200)

        self.assertEqual(estimate.n_events, 0)
        self.assertEqual(estimate.point, 0.0)
        self.assertTrue(estimate.warnings)

    def test_continuous_example_above_threshold(self):
        cfg = PathConfig(horizon=5.0, step=1e-3, seed=2)
        estimate = estimate_ruin(continuous_example(), 1.2, cfg, 100)

        self.assertEqual(estimate.n_events, 0)
        self.assertEqual(estimate.ci_low, 0.0)

    def test_continuous_example_below_one_is_ruined(self):
        """При z < 1 процесс V = 1 + (z − 1)e^ξ уходит в минус."""
        cfg = PathConfig(horizon=5.0, step=1e-2, seed=2)
        records = passages(continuous_example(), 0.5, cfg, 50)

        for record in records:
            with self.subTest(index=record.index):
                if record.passage.hit:
                    self.assertTrue(record.passage.continuous_crossing)
                    self.assertEqual(record.passage.overshoot, 0.0)
        self.assertGreater(sum(r.passage.hit for r in records), 25)

    def test_jump_example_below_threshold(self):
        cfg = PathConfig(horizon=50.0, step=1.0, seed=3)
        estimate = estimate_ruin(jump_example(), 0.5, cfg, 500)

        self.assertGreater(estimate.ci_low, 0.0)

    def test_jump_example_above_threshold(self):
        cfg = PathConfig(horizon=200.0, step=1.0, seed=4)
        estimate = estimate_ruin(jump_example(), 1.7, cfg, 300)

        self.assertEqual(estimate.n_events, 0)

    def test_monotone_in_z_with_common_random_numbers(self):
        cfg = PathConfig(horizon=20.0, step=1.0, seed=5)
        events = [
            estimate_ruin(jump_example(), z, cfg, 300).n_events
            for z in (0.0, 0.2, 0.5, 1.0, 1.5, 2.0)
        ]

        self.assertEqual(events, sorted(events, reverse=True))

    def test_thread_count_does_not_change_results(self):
        cfg = PathConfig(horizon=20.0, step=1.0, seed=6)
        results = []
        for threads in (1, 4):
            with override_settings(
                GOU={**settings.GOU, 'THREADS': threads, 'BATCH_SIZE': 16}
            ):
                records = passages(jump_example(), 0.5, cfg, 100)
            results.append([
                (record.passage.hit, record.passage.time) for record in records
            ])

        self.assertEqual(results[0], results[1])

    def test_passages_csv(self):
        records = passages(jump_example(), 0.5, PathConfig(20.0, 1.0), 20)
        with tempfile.TemporaryDirectory() as directory:
            filename = dump_passages(
                records, os.path.join(directory, 'passages.csv')
            )
            frame = pd.read_csv(filename)

        self.assertEqual(tuple(frame.columns), PASSAGE_COLUMNS)
        self.assertEqual(len(frame), 20)


class NegativeProbabilityTests(SimpleTestCase):
    def test_brownian_eta_is_symmetric(self):
        t = LevyTriplet2D((0.0, 0.0), BROWNIAN_ETA_UP)
        estimate = estimate_negative_prob(t, PathConfig(1.0, 0.05, 7), 4000)

        self.assertLess(abs(estimate.point - 0.5), 4 * math.sqrt(0.25 / 4000))

    def test_increasing_eta(self):
        estimate = estimate_negative_prob(
            LevyTriplet2D((0.3, 1.0)), PathConfig(1.0, 0.05, 8), 100
        )

        self.assertEqual(estimate.n_events, 0)

    def test_negative_jumps_show_up(self):
        estimate = estimate_negative_prob(
            jump_example(), PathConfig(1.0, 0.1, 9), 1000
        )

        self.assertGreater(estimate.ci_low, 0.0)


class LimitLawTests(SimpleTestCase):
    def test_gaussian_limit(self):
        """Z_∞ ~ N(0, 1/2) по изометрии Ито."""
        G = estimate_Zinf_cdf(
            xi_up_eta_brownian(), PathConfig(10.0, 0.01, 10), 2000
        )
        limit = stats.norm(scale=math.sqrt(0.5))

        self.assertLess(stats.kstest(G.values, limit.cdf).statistic, 0.05)
        self.assertLess(G.diagnostics['ks_half_horizon'], 0.1)

    def test_refuses_without_convergence(self):
        t = LevyTriplet2D((-1.0, 0.0), BROWNIAN_ETA_UP)

        with self.assertRaisesMessage(
            PreconditionError, 'Z_∞ does not converge for this spec'
        ):
            estimate_Zinf_cdf(t, PathConfig(1.0, 0.1), 10)

    def test_drift_eta(self):
        G = estimate_Zinf_cdf(
            LevyTriplet2D((1.0, 0.7)), PathConfig(40.0, 1.0), 10
        )

        np.testing.assert_allclose(G.values, 0.7, rtol=1e-12)

    def test_degenerate_limit(self):
        base = LevyTriplet2D(
            (1.0, 0.0), jumps=AtomMeasure((JumpAtom(-0.5, 0.0, 1.0),))
        )
        t = linear_image(w_transform(base), 1.0, -2.0)
        G = estimate_Zinf_cdf(t, PathConfig(100.0, 1.0, 11), 50)

        self.assertAlmostEqual(is_degenerate(t), 2.0, places=9)
        np.testing.assert_allclose(G.values, 2.0, atol=1e-9)


class RuinFormulaTests(SimpleTestCase):
    def setUp(self):
        self.cfg = PathConfig(10.0, 0.01, 12)

    def test_closed_form_case(self):
        record = theorem3_validate(xi_up_eta_brownian(), 0.5, self.cfg, 2000)

        self.assertTrue(record.consistent)
        self.assertEqual(record.verdict, Verdict.YES)
        self.assertLess(abs(record.lhs.point - PSI_HALF), 0.05)
        self.assertLess(abs(record.rhs.point - PSI_HALF), 0.05)

    def test_start_at_zero(self):
        record = theorem3_validate(xi_up_eta_brownian(), 0.0, self.cfg, 300)

        self.assertGreater(record.lhs.point, 0.95)
        self.assertAlmostEqual(record.rhs.point, 1.0)
        self.assertTrue(record.consistent)

    def test_far_start(self):
        record = theorem3_validate(xi_up_eta_brownian(), 6.0, self.cfg, 200)

        self.assertEqual(record.lhs.n_events, 0)
        self.assertEqual(record.rhs.point, 0.0)
        self.assertTrue(record.consistent)

    @override_settings(GOU={**settings.GOU, 'MIN_RUIN_EVENTS': 10 ** 6})
    def test_too_few_ruined_paths(self):
        record = theorem3_validate(xi_up_eta_brownian(), 0.5, self.cfg, 100)

        self.assertIsNone(record.rhs)
        self.assertEqual(record.verdict, Verdict.UNDETERMINED)
        self.assertIsNone(record.to_json()['consistent'])

    def test_refuses_without_convergence(self):
        with self.assertRaises(PreconditionError):
            theorem3_validate(jump_example(), 0.5, self.cfg, 10)


class LowerBoundTests(SimpleTestCase):
    def test_jump_example_inside_the_feasible_interval(self):
        bound = empirical_lower_bound(
            jump_example(), 2.0, PathConfig(100.0, 1.0, 13), 100
        )

        self.assertGreaterEqual(bound, 2.0 - 1e-9)

    def test_continuous_example_stays_near_one(self):
        bound = empirical_lower_bound(
            continuous_example(), 1.0, PathConfig(1.0, 1e-4, 14), 20
        )

        self.assertGreater(bound, 0.9)

    def test_independent_brownian_motions_go_negative(self):
        t = LevyTriplet2D((0.0, 0.0), ((1.0, 0.0), (0.0, 1.0)))
        bound = empirical_lower_bound(t, 0.0, PathConfig(50.0, 0.05, 15), 20)

        self.assertLess(bound, 0.0)


class StrongOrderTests(SimpleTestCase):
    def test_fitted_order_is_near_one_half(self):
        report = strong_order(0.3, [2.0 ** -k for k in range(4, 10)], 300, 16)

        self.assertGreaterEqual(report.order, 0.35)
        self.assertLessEqual(report.order, 0.75)
        self.assertTrue(report.stays_above_minus_one)

    def test_rejects_steps_that_do_not_nest(self):
        with self.assertRaises(PreconditionError):
            strong_order(0.0, [0.1, 0.15], 10, 1)
        with self.assertRaises(PreconditionError):
            strong_order(0.0, [0.1, 0.3], 10, 1)

    def test_runs_the_production_integrator(self):
        """Каждая траектория на каждой сетке проходит через compute_Z."""
        with mock.patch(
            'estimation.estimators.compute_Z', wraps=compute_Z
        ) as spy:
            report = strong_order(0.0, [0.25, 0.125], 4, 3)

        self.assertEqual(spy.call_count, 2 * 4)
        self.assertEqual(len(report.rmse), 2)
        self.assertTrue(all(value > 0 for value in report.rmse))
