import math
import os
import tempfile

import numpy as np
import pandas as pd
from django.test import SimpleTestCase

from levy.densities import build_family
from levy.exceptions import NotSupported, SpecError
from levy.presets import continuous_example, jump_example
from levy.triplets import AtomMeasure, DensityMeasure, JumpAtom, LevyTriplet2D

from ..engine import (Driver, compute_V, compute_Z, continuous_example_passage,
                      first_passage, path_infimum, simulate_pair)
from ..examples import (closed_form_continuous_example,
                        continuous_example_brownian, simulate_jump_example,
                        simulate_stochastic_exponential)
from ..paths import CSV_COLUMNS, Path, PathConfig

THETA2_JUMP_EXAMPLE = math.e / (math.e - 1.0)
BROWNIAN_ETA = ((0.0, 0.0), (0.0, 1.0))


def jump_identity_gap(p):
    """max |ΔV − (e^{Δξ} − 1)V₋ − e^{Δξ}Δη| over jump instants."""
    k = p.jump_indices
    V, V_left = p.V[k], p.V_left[k]
    growth = np.exp(p.xi[k] - p.xi_left[k])
    expected = (growth - 1.0) * V_left + growth * (p.eta[k] - p.eta_left[k])
    scale = np.maximum(1.0, np.abs(V) + np.abs(V_left))
    return float(np.max(np.abs(V - V_left - expected) / scale, initial=0.0))


class PathConfigTests(SimpleTestCase):
    def test_rejects_bad_values(self):
        cases = (
            ('horizon', {'horizon': 0.0, 'step': 0.1}),
            ('step', {'horizon': 1.0, 'step': 2.0}),
            ('step', {'horizon': 1.0, 'step': -0.1}),
            ('seed', {'horizon': 1.0, 'step': 0.1, 'seed': -1}),
            ('seed', {'horizon': 1.0, 'step': 0.1, 'seed': 2 ** 64}),
            ('checkpoints', {'horizon': 1.0, 'step': 0.1,
                             'checkpoints': (2.0,)}),
        )
        for field, kwargs in cases:
            with self.subTest(field=field, kwargs=kwargs):
                with self.assertRaises(SpecError) as raised:
                    PathConfig(**kwargs)
                self.assertEqual(raised.exception.field, field)

    def test_defaults_from_settings(self):
        cfg = PathConfig.from_settings(seed=3, step=None)

        self.assertEqual(cfg.step, 1e-2)
        self.assertEqual(cfg.horizon, 10.0)
        self.assertEqual(cfg.seed, 3)


class SimulatePairTests(SimpleTestCase):
    def setUp(self):
        self.cfg = PathConfig(horizon=2.0, step=0.1, seed=7)

    def test_zero_triplet(self):
        p = simulate_pair(LevyTriplet2D((0.0, 0.0)), self.cfg)

        self.assertFalse(p.xi.any())
        self.assertFalse(p.eta.any())
        self.assertEqual(p.times[0], 0.0)
        self.assertEqual(p.times[-1], 2.0)

    def test_pure_drift_is_exact(self):
        p = simulate_pair(LevyTriplet2D((0.3, -1.7)), self.cfg)

        np.testing.assert_array_equal(p.xi, 0.3 * p.times)
        np.testing.assert_array_equal(p.eta, -1.7 * p.times)

    def test_grid_contains_steps_and_jumps(self):
        cfg = PathConfig(horizon=2.0, step=0.5, seed=1, checkpoints=(0.75,))
        p = simulate_pair(
            LevyTriplet2D((0.0, 0.0), BROWNIAN_ETA,
                          AtomMeasure((JumpAtom(1.0, 1.0, 3.0),))),
            cfg,
        )
        for time in (0.0, 0.5, 0.75, 1.0, 1.5, 2.0):
            with self.subTest(time=time):
                self.assertIn(time, p.times)
        self.assertTrue(np.all(np.diff(p.times) >= 0))
        np.testing.assert_allclose(
            (p.xi - p.xi_left)[p.jump_flags], 1.0, atol=1e-12
        )
        self.assertFalse((p.xi - p.xi_left)[~p.jump_flags].any())

    def test_same_seed_same_path(self):
        t = LevyTriplet2D((0.1, 0.2), ((1.0, 0.3), (0.3, 1.0)),
                          AtomMeasure((JumpAtom(0.5, -0.5, 2.0),)))
        first, second = simulate_pair(t, self.cfg, 4), simulate_pair(
            t, self.cfg, 4
        )
        other = simulate_pair(t, self.cfg, 5)

        np.testing.assert_array_equal(first.times, second.times)
        np.testing.assert_array_equal(first.eta, second.eta)
        self.assertFalse(np.array_equal(first.xi, other.xi))

    def test_antithetic_pairs_mirror_the_brownian_part(self):
        cfg = PathConfig(horizon=1.0, step=0.1, seed=3, antithetic=True)
        t = LevyTriplet2D((0.0, 0.0), ((1.0, 0.0), (0.0, 1.0)))
        even, odd = simulate_pair(t, cfg, 2), simulate_pair(t, cfg, 3)

        np.testing.assert_allclose(odd.xi, -even.xi, atol=1e-15)
        np.testing.assert_allclose(odd.eta, -even.eta, atol=1e-15)

    def test_poisson_counts(self):
        """Число скачков на [0, T] имеет распределение Пуассона(λT)."""
        cfg = PathConfig(horizon=5.0, step=5.0, seed=11)
        driver = Driver(jump_example(lam=2.0), cfg)
        counts = np.array([
            driver.pair(index).jump_flags.sum() for index in range(2000)
        ])

        self.assertLess(abs(counts.mean() - 10.0), 4 * math.sqrt(10.0 / 2000))
        self.assertLess(abs(counts.var() - 10.0), 1.5)

    def test_density_needs_truncation(self):
        family = build_family('uniform_box', {'intensity': 1.0}, [-1, 1, -1, 1])
        t = LevyTriplet2D((0.0, 0.0), jumps=DensityMeasure(family, 1e-6))

        with self.assertRaises(NotSupported):
            simulate_pair(t, self.cfg)
        cfg = PathConfig(horizon=5.0, step=0.1, seed=2, truncation_eps=0.2)
        p = simulate_pair(t, cfg)
        dx = (p.xi - p.xi_left)[p.jump_flags]
        dy = (p.eta - p.eta_left)[p.jump_flags]
        self.assertTrue(np.all(np.hypot(dx, dy) >= 0.2))
        self.assertTrue(np.all(np.abs(dx) <= 1.0))

    def test_truncated_density_rate_and_drift(self):
        """Симметричный квадрат: компенсатор нулевой, интенсивность 4 − πε²."""
        family = build_family('uniform_box', {'intensity': 1.0}, [-1, 1, -1, 1])
        t = LevyTriplet2D((0.3, -0.2), jumps=DensityMeasure(family, 1e-6))
        cases = (0.05, 0.2, 0.5)
        for eps in cases:
            with self.subTest(eps=eps):
                cfg = PathConfig(1.0, 0.1, truncation_eps=eps)
                driver = Driver(t, cfg)
                self.assertAlmostEqual(
                    driver.rate, 4.0 - math.pi * eps * eps, places=5
                )
                self.assertAlmostEqual(driver.drift[0], 0.3, places=5)
                self.assertAlmostEqual(driver.drift[1], -0.2, places=5)


class IntegralTests(SimpleTestCase):
    def test_eta_drift_alone(self):
        cfg = PathConfig(horizon=3.0, step=0.01)
        p = simulate_pair(LevyTriplet2D((0.0, 1.5)), cfg)
        Z, _ = compute_Z(p)

        np.testing.assert_allclose(Z, 1.5 * p.times, rtol=1e-12, atol=1e-12)

    def test_single_jump_adds_y(self):
        p = Path(
            times=[0.0, 1.0, 2.0],
            xi=[0.0, 0.5, 0.5],
            eta=[0.0, 2.0, 2.0],
            xi_left=[0.0, 0.0, 0.5],
            eta_left=[0.0, 0.0, 2.0],
            jump_flags=[False, True, False],
        )
        Z, Z_left = compute_Z(p)

        np.testing.assert_array_equal(Z, [0.0, 2.0, 2.0])
        self.assertEqual(Z_left[1], 0.0)

    def test_jump_identity_on_grid_paths(self):
        t = LevyTriplet2D((0.2, 0.1), ((0.5, 0.1), (0.1, 0.4)), AtomMeasure((
            JumpAtom(0.7, -0.4, 2.0), JumpAtom(-0.3, 0.9, 1.0),
        )))
        driver = Driver(t, PathConfig(horizon=3.0, step=0.05, seed=9))
        for index in range(10):
            with self.subTest(index=index):
                p = driver.path(index, z=0.8)
                self.assertGreater(p.jump_flags.sum(), 0)
                self.assertLess(jump_identity_gap(p), 1e-12)
                np.testing.assert_allclose(
                    compute_V(p, 0.8), np.exp(p.xi) * (0.8 + p.Z),
                    rtol=1e-9,
                )

    def test_continuous_example_tracks_closed_form(self):
        c = 0.3
        cfg = PathConfig(horizon=1.0, step=1e-4, seed=5)
        p = Driver(continuous_example(c), cfg).path(0, z=1.0)
        exact = closed_form_continuous_example(
            c, p.times, continuous_example_brownian(p, c)
        )

        np.testing.assert_array_equal(p.Z, exact)
        np.testing.assert_array_equal(p.V, 1.0)
        self.assertTrue(np.all(exact > -1.0))

    def test_continuous_example_v_stays_above_one(self):
        driver = Driver(continuous_example(), PathConfig(5.0, 1e-3, seed=2))
        for index in range(20):
            with self.subTest(index=index):
                p, passage = driver.run(index, 1.2)
                self.assertFalse(passage.hit)
                self.assertGreater(path_infimum(p), 1.0)

    def test_other_gaussian_drivers_keep_the_euler_sum(self):
        cases = (
            ('drift off', LevyTriplet2D((0.0, 0.0), ((1.0, -1.0), (-1.0, 1.0)))),
            ('other sigma', LevyTriplet2D((0.0, 0.5), BROWNIAN_ETA)),
            ('jumps', LevyTriplet2D(
                (0.0, 0.5), ((1.0, -1.0), (-1.0, 1.0)),
                AtomMeasure((JumpAtom(0.1, 0.1, 1.0),)),
            )),
        )
        for name, t in cases:
            with self.subTest(name=name):
                self.assertIsNone(Driver(t, PathConfig(1.0, 0.1)).closed_form)
        self.assertEqual(
            Driver(continuous_example(0.25), PathConfig(1.0, 0.1)).closed_form,
            0.25,
        )

    def test_closed_form_plug_in(self):
        times = np.array([0.0, 1.0])
        Z = closed_form_continuous_example(0.0, times, [0.0, -math.log(2.0)])

        np.testing.assert_allclose(Z, [0.0, 1.0], rtol=1e-15)


class JumpExampleTests(SimpleTestCase):
    def test_no_arrivals_closed_form(self):
        c, horizon, z = 1.0, 3.0, 0.4
        cfg = PathConfig(horizon=horizon, step=0.1, seed=1)
        p = simulate_jump_example(c, 1e-12, cfg, z=z)
        expected = math.exp(-c * horizon) * z + 2.0 * -math.expm1(-c * horizon)

        self.assertEqual(p.jump_flags.sum(), 0)
        self.assertAlmostEqual(p.V[-1], expected, places=12)

    def test_exact_paths_ignore_the_step(self):
        cfg = PathConfig(horizon=50.0, step=1e-3, seed=2)
        p = simulate_jump_example(1.0, 1.0, cfg)

        self.assertEqual(len(p), 2 + p.jump_flags.sum())

    def test_first_jump_from_zero(self):
        cfg = PathConfig(horizon=20.0, step=0.1, seed=4)
        p = simulate_jump_example(1.0, 1.0, cfg, z=0.0)
        k = p.jump_indices[0]

        self.assertAlmostEqual(
            p.V[k] - p.V_left[k], (math.e - 1.0) * p.V_left[k] - math.e,
            places=10,
        )
        self.assertLess(jump_identity_gap(p), 1e-12)

    def test_above_threshold_never_ruins(self):
        cfg = PathConfig(horizon=100.0, step=1.0, seed=8)
        driver = Driver(jump_example(), cfg)
        for index in range(200):
            with self.subTest(index=index):
                p, passage = driver.run(index, 1.7)
                self.assertFalse(passage.hit)
                self.assertGreaterEqual(path_infimum(p), 0.0)


class FirstPassageTests(SimpleTestCase):
    def test_negative_start(self):
        p = Driver(LevyTriplet2D((0.0, 1.0)), PathConfig(1.0, 0.1)).path(0)
        passage = first_passage(p, -0.5)

        self.assertTrue(passage.hit)
        self.assertEqual(passage.time, 0.0)
        self.assertEqual(passage.v_at_hit, -0.5)

    def test_exact_drift_crossing_times(self):
        cases = (
            ('eta drifts down', LevyTriplet2D((0.0, -1.0)), 1.0, 1.0),
            ('both drift', LevyTriplet2D((1.0, -1.0)), 0.5, math.log(2.0)),
        )
        for name, t, z, time in cases:
            with self.subTest(name=name):
                p = Driver(t, PathConfig(3.0, 0.5)).path(0, z)
                passage = first_passage(p, z)
                self.assertTrue(passage.hit)
                self.assertTrue(passage.continuous_crossing)
                self.assertAlmostEqual(passage.time, time, places=12)
                self.assertEqual(passage.overshoot, 0.0)

    def test_jump_crossing_keeps_overshoot(self):
        p = Path(
            times=[0.0, 1.0, 2.0],
            xi=[0.0, 0.0, 0.0],
            eta=[0.0, -2.0, -2.0],
            xi_left=[0.0, 0.0, 0.0],
            eta_left=[0.0, 0.0, -2.0],
            jump_flags=[False, True, False],
        )
        p = p.with_Z(*compute_Z(p))
        passage = first_passage(p, 0.5)

        self.assertEqual((passage.time, passage.v_at_hit), (1.0, -1.5))
        self.assertFalse(passage.continuous_crossing)

    def test_continuous_example_passage(self):
        p = Path(
            times=[0.0, 1.0, 2.0],
            xi=[0.0, 0.5, 1.0],
            eta=[0.0, -0.5, -1.0],
            xi_left=[0.0, 0.5, 1.0],
            eta_left=[0.0, -0.5, -1.0],
            jump_flags=[False, False, False],
        )
        cases = (
            (-0.1, (True, 0.0)),
            (1.0, (False, None)),
            (3.0, (False, None)),
            (0.5, (True, 2.0)),
        )
        for z, (hit, time) in cases:
            with self.subTest(z=z):
                passage = continuous_example_passage(p, z)
                self.assertEqual((passage.hit, passage.time), (hit, time))

    def test_bridge_only_brings_ruin_forward(self):
        t = LevyTriplet2D((0.0, 0.1), BROWNIAN_ETA)
        driver = Driver(t, PathConfig(horizon=2.0, step=0.2, seed=6))
        for index in range(30):
            with self.subTest(index=index):
                p, corrected = driver.run(index, 0.3)
                plain = first_passage(p, 0.3)
                if plain.hit:
                    self.assertTrue(corrected.hit)
                    self.assertLessEqual(corrected.time, plain.time)


class StochasticExponentialTests(SimpleTestCase):
    def test_matches_exp_minus_xi(self):
        cases = (
            ('drift', LevyTriplet2D((0.7, 0.0)), 0.0),
            ('brownian', LevyTriplet2D((0.0, 0.0), ((1.0, 0.0), (0.0, 0.0))),
             1.0),
            ('jumps', LevyTriplet2D((0.2, 0.0), ((0.5, 0.0), (0.0, 0.0)),
                                    AtomMeasure((JumpAtom(1.0, 0.0, 1.0),
                                                 JumpAtom(-0.5, 0.3, 1.0)))),
             0.5),
        )
        cfg = PathConfig(horizon=3.0, step=0.01, seed=12)
        for name, t, sigma_xi2 in cases:
            with self.subTest(name=name):
                p = simulate_pair(t, cfg)
                _, exponential = simulate_stochastic_exponential(p, sigma_xi2)
                np.testing.assert_allclose(
                    exponential, np.exp(-p.xi), rtol=1e-8, atol=0.0
                )

    def test_single_jump_factor(self):
        p = Path(
            times=[0.0, 1.0, 2.0],
            xi=[0.0, 1.0, 1.0],
            eta=[0.0, 0.0, 0.0],
            xi_left=[0.0, 0.0, 1.0],
            eta_left=[0.0, 0.0, 0.0],
            jump_flags=[False, True, False],
        )
        W, exponential = simulate_stochastic_exponential(p)

        self.assertAlmostEqual(W[1], math.exp(-1.0) - 1.0, places=15)
        self.assertAlmostEqual(exponential[2], math.exp(-1.0), places=15)


class ExportTests(SimpleTestCase):
    def test_csv_rows_satisfy_the_definition_of_v(self):
        p = Driver(continuous_example(), PathConfig(1.0, 0.05, 3)).path(0, 1.0)
        with tempfile.TemporaryDirectory() as directory:
            filename = os.path.join(directory, 'path_0.csv')
            p.to_csv(filename)
            frame = pd.read_csv(filename)

        self.assertEqual(tuple(frame.columns), CSV_COLUMNS)
        np.testing.assert_allclose(
            frame['V'], np.exp(frame['xi']) * (1.0 + frame['Z']), rtol=1e-9
        )
