import json
import os

from django.conf import settings

from core.models import content_digest
from estimation.pool import fan_out
from levy.exceptions import NotSupported
from simulator.engine import Driver

from ._base import RuinCommand

EXACT_NOTE = (
    'event-driven exact integration: --step is ignored, rows are the '
    'start, the horizon and the jump times'
)
MANIFEST = 'manifest.json'


class Command(RuinCommand):
    help = (
        'Simulate paths of (ξ, η, Z, V) and write one CSV per path plus a '
        'manifest with content hashes'
    )
    simulation_arguments = True

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--out', help='Output directory, GOU["OUTPUT_DIR"] by default',
        )

    def _write(self, driver, z, out, n):
        def task(index):
            name = f'path_{index:05d}.csv'
            filename = os.path.join(out, name)
            p = driver.path(index, z)
            p.to_csv(filename)
            with open(filename, 'rb') as handle:
                digest = content_digest(handle.read())
            return {
                'index': index,
                'file': name,
                'rows': len(p),
                'jumps': int(p.jump_indices.size),
                'digest': digest,
            }

        return fan_out(task, n)

    def handle(self, *args, **options):
        t, spec = self.load_spec(options)
        z, cfg, n = self.load_parameters(options)
        if options['paths'] is None:
            n = 1
        try:
            driver = Driver(t, cfg)
        except NotSupported as error:
            self.fail(str(error))
        out = options['out'] or settings.GOU['OUTPUT_DIR']
        manifest = {
            'spec': spec,
            'z': z,
            'paths': n,
            'config': cfg.to_json(),
            'exact': driver.exact,
            'notes': [EXACT_NOTE] if driver.exact else [],
        }
        try:
            os.makedirs(out, exist_ok=True)
            manifest['files'] = self._write(driver, z, out, n)
            manifest['digest'] = content_digest(manifest)
            with open(os.path.join(out, MANIFEST), 'w',
                      encoding='utf-8') as handle:
                json.dump(manifest, handle, indent=2, ensure_ascii=False)
        except OSError as error:
            self.fail(f'cannot write to {out}: {error.strerror or error}')
        self.finish(options, spec, manifest, seed=cfg.seed)
