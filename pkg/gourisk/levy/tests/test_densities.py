import math

import numpy as np
from django.conf import settings
from django.test import SimpleTestCase, override_settings

from ..densities import build_family, extrapolate_decades
from ..exceptions import QuadratureError, SpecError
from ..serializers import check_levy_integrability
from ..transforms import marginal_eta, scale_eta
from ..triplets import DensityMeasure, LevyTriplet2D


class FamilyValidationTests(SimpleTestCase):
    def test_bad_documents_point_at_the_field(self):
        cases = (
            ('nope', {}, [0, 1, 0, 1], 'jumps.density.kind'),
            ('uniform_box', {}, [0, 1, 0, 1],
             'jumps.density.params.intensity'),
            ('uniform_box', {'intensity': 1}, [1, 0, 0, 1],
             'jumps.density.box'),
            ('exp_tails', {'c': 1, 'a': -1, 'b': 0}, [0, 1, 0, 1],
             'jumps.density.params.a'),
            ('eta_power', {'c': 1, 'alpha': 0.5}, [0, 0, -1, 1],
             'jumps.density.box'),
            ('eta_power', {'c': 1, 'alpha': 0.5}, [0, 1, 0, 1],
             'jumps.density.box'),
            ('eta_power', {'c': 1, 'alpha': 2.5}, [0, 0, 0, 1],
             'jumps.density.params.alpha'),
        )
        for kind, params, box, field in cases:
            with self.subTest(kind=kind, field=field):
                with self.assertRaises(SpecError) as caught:
                    build_family(kind, params, box)
                self.assertEqual(caught.exception.field, field)


class QuadratureTests(SimpleTestCase):
    def test_uniform_box_mass(self):
        measure = DensityMeasure(
            build_family('uniform_box', {'intensity': 2.0}, [0.5, 1, 0.5, 1])
        )

        self.assertAlmostEqual(measure.mass(), 0.5, places=8)

    def test_exp_tails_mass(self):
        measure = DensityMeasure(build_family(
            'exp_tails', {'c': 3.0, 'a': 1.0, 'b': 2.0}, [0, 1, -1, 0]
        ))
        expected = 3.0 * (1 - math.exp(-1)) * (1 - math.exp(-2)) / 2.0

        self.assertAlmostEqual(measure.mass(), expected, places=8)

    def test_power_family_converging_near_zero(self):
        measure = DensityMeasure(
            build_family('eta_power', {'c': 1.0, 'alpha': -0.5}, [0, 0, 0, 1])
        )

        self.assertAlmostEqual(measure.mass(), 2.0, places=6)

    def test_power_family_with_infinite_activity(self):
        for box in ([0, 0, -1, 0], [0, 0, 0, 1]):
            with self.subTest(box=box):
                measure = DensityMeasure(
                    build_family('eta_power', {'c': 1.0, 'alpha': 0.5}, box)
                )
                self.assertEqual(measure.mass(), math.inf)
                self.assertAlmostEqual(
                    check_levy_integrability(measure), 1.0 / 1.5, places=6
                )

    def test_power_family_signed_first_moment(self):
        """∫ y Π(dy) на отрицательной полуоси расходится к −∞."""
        measure = DensityMeasure(
            build_family('eta_power', {'c': 1.0, 'alpha': 1.5}, [0, 0, -1, 0])
        )

        self.assertEqual(measure.integrate(lambda x, y: y), -math.inf)

    def test_split_along_circles(self):
        measure = DensityMeasure(
            build_family('uniform_box', {'intensity': 1.0}, [-1, 1, -1, 1]),
            tol=1e-8,
        )
        ring = measure.mass(
            lambda x, y: np.logical_and(x * x + y * y >= 0.04,
                                        x * x + y * y < 1.0),
            radii=(0.2, 1.0),
        )

        self.assertAlmostEqual(ring, math.pi * (1.0 - 0.04), places=6)

    def test_pushforward_scales_the_density(self):
        measure = DensityMeasure(
            build_family('uniform_box', {'intensity': 1.0}, [1, 2, 1, 2])
        )
        t = LevyTriplet2D((0.0, 0.0), jumps=measure)
        scaled = scale_eta(t, 2.0)

        self.assertTrue(scaled.jumps.is_transformed)
        self.assertAlmostEqual(
            scaled.jumps.integrate(lambda x, y: y), 2.0 * 1.5, places=8
        )
        self.assertAlmostEqual(marginal_eta(scaled).gamma, 0.0, places=8)

    @override_settings(GOU={**settings.GOU, 'QUAD_LIMIT': 1})
    def test_unreachable_tolerance_is_reported(self):
        measure = DensityMeasure(
            build_family('uniform_box', {'intensity': 1.0}, [-1, 1, -1, 1]),
            tol=1e-14,
        )

        with self.assertRaises(QuadratureError) as caught:
            measure.mass(lambda x, y: x * x + y * y < 0.3)
        self.assertIsNotNone(caught.exception.residual)


class ExtrapolationTests(SimpleTestCase):
    def test_geometric_tail_is_summed(self):
        partial = [2.0 - 2.0 * 10 ** (-k / 2) for k in range(1, 9)]

        self.assertAlmostEqual(
            extrapolate_decades(partial, 1e-12), 2.0, places=10
        )

    def test_logarithmic_growth_diverges(self):
        partial = [k * math.log(10.0) for k in range(1, 9)]

        self.assertEqual(extrapolate_decades(partial, 1e-12), math.inf)
        self.assertEqual(
            extrapolate_decades([-v for v in partial], 1e-12), -math.inf
        )

    def test_erratic_increments_are_undetermined(self):
        partial = [1.0, 2.0, 2.5, 3.5, 3.6, 4.5, 4.55, 5.5]

        with self.assertRaises(QuadratureError):
            extrapolate_decades(partial, 1e-12)

    def test_flat_sequence_is_returned_as_is(self):
        self.assertEqual(extrapolate_decades([0.7] * 8, 1e-9), 0.7)


class SamplingTests(SimpleTestCase):
    def test_samples_respect_box_and_cutoff(self):
        rng = np.random.default_rng(5)
        cases = (
            ('uniform_box', {'intensity': 1.0}, [-1, 1, -1, 1]),
            ('exp_tails', {'c': 1.0, 'a': 1.0, 'b': 3.0}, [-2, 1, -1, 2]),
            ('eta_power', {'c': 1.0, 'alpha': 0.5}, [0, 0, 0, 2]),
            ('eta_power', {'c': 1.0, 'alpha': 0.0}, [0, 0, -2, 0]),
        )
        for kind, params, box in cases:
            with self.subTest(kind=kind, box=box):
                xs, ys = build_family(kind, params, box).sample(rng, 500, 0.1)
                self.assertEqual(xs.shape, (500,))
                self.assertTrue(np.all(np.hypot(xs, ys) >= 0.1))
                self.assertTrue(np.all((xs >= box[0]) & (xs <= box[1])))
                self.assertTrue(np.all((ys >= box[2]) & (ys <= box[3])))
