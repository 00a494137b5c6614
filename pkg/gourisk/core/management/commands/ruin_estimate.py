from classification.reports import Verdict
from estimation.estimators import (dump_passages, estimate_negative_prob,
                                   estimate_ruin, estimate_Zinf_cdf, passages,
                                   theorem3_validate)
from levy.exceptions import NotSupported, PreconditionError

from ._base import EXIT_UNDETERMINED, RuinCommand

WHAT = ('ruin', 'negprob', 'zinf', 'theorem3')


class Command(RuinCommand):
    help = (
        'Monte Carlo estimates: the ruin probability, P(Z_T < 0), the law '
        'of Z_∞ or the two sides of the ruin formula'
    )
    simulation_arguments = True

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--what', choices=WHAT, default='ruin')
        parser.add_argument(
            '--dump', metavar='CSV',
            help='Write per-path (T_z, V_Tz) pairs, --what ruin only',
        )

    def _estimate(self, what, t, z, cfg, n, dump):
        if what == 'ruin':
            records = passages(t, z, cfg, n)
            if dump:
                dump_passages(records, dump)
            return estimate_ruin(t, z, cfg, n, records).to_json(), 0
        if what == 'negprob':
            return estimate_negative_prob(t, cfg, n).to_json(), 0
        if what == 'zinf':
            return estimate_Zinf_cdf(t, cfg, n).to_json(), 0
        record = theorem3_validate(t, z, cfg, n)
        undetermined = record.verdict is Verdict.UNDETERMINED
        return record.to_json(), EXIT_UNDETERMINED if undetermined else 0

    def handle(self, *args, **options):
        t, spec = self.load_spec(options)
        z, cfg, n = self.load_parameters(options)
        what = options['what']
        if options['dump'] and what != 'ruin':
            self.fail('--dump is only available with --what ruin')
        try:
            estimate, exit_code = self._estimate(
                what, t, z, cfg, n, options['dump']
            )
        except (PreconditionError, NotSupported) as error:
            self.fail(str(error))
        except OSError as error:
            self.fail(f'cannot write {options["dump"]}: {error.strerror}')
        result = {
            'spec': spec,
            'what': what,
            'z': z,
            'paths': n,
            'config': cfg.to_json(),
            'estimate': estimate,
        }
        self.finish(options, spec, result, exit_code, seed=cfg.seed)
