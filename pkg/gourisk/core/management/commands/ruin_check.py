from classification.convergence import (is_degenerate, is_stationary_possible,
                                        z_infinity_converges)
from classification.reports import Decision
from classification.ruin import (delta, feasible_u_set,
                                 finite_variation_decision, no_ruin_threshold)
from levy.exceptions import (ExtendedRealError, NotApplicable,
                             NotFiniteVariation, NotSupported,
                             Undetermined)
from levy.extended import to_json

from ._base import EXIT_UNDETERMINED, RuinCommand


class Command(RuinCommand):
    help = (
        'Decide from the Lévy triplet whether ruin is impossible from some '
        'initial capital on, and print the certificate as JSON'
    )

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--delta-at', dest='delta_at', type=float, action='append',
            default=[], metavar='Z',
            help='Also print the lower bound δ(z); may be repeated',
        )

    def _delta(self, t, zs):
        try:
            feasible = feasible_u_set(t)
        except (Undetermined, ExtendedRealError):
            return [{'z': z, 'delta': None} for z in zs]
        return [{'z': z, 'delta': to_json(delta(t, z, feasible))} for z in zs]

    def _finite_variation(self, t):
        if not (t.sigma_is_zero and t.is_atomic):
            return None
        try:
            return finite_variation_decision(t).to_json()
        except (NotApplicable, NotFiniteVariation, NotSupported):
            return None

    def handle(self, *args, **options):
        t, spec = self.load_spec(options)
        report = no_ruin_threshold(t)
        result = {'spec': spec, **report.to_json()}
        result['delta'] = self._delta(t, options['delta_at'])
        result['finite_variation'] = self._finite_variation(t)
        result['convergence'] = z_infinity_converges(t).to_json()
        result['stationarity'] = is_stationary_possible(t).to_json()
        result['degenerate_k'] = to_json(is_degenerate(t))
        undetermined = report.decision is Decision.UNDETERMINED
        self.finish(
            options, spec, result,
            exit_code=EXIT_UNDETERMINED if undetermined else 0,
        )
