"""
Scan every group of order below 32 for a nongeometric genus-2 surjection.
Run with: python manage.py minimality [--only-order 24] [--append-g2] [--jobs 8]
"""
from sieve.management.base import SieveCommand
from sieve.pipeline_service import ReproductionService
from sieve.serializers import MinimalityParamsSerializer, validated


class Command(SieveCommand):
    help = 'Runs the minimality scan over the group catalog and cross-checks the cyclic-extension classification'
    uses_cache = True

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--upto', type=int, default=31, help='Largest catalog order to scan')
        parser.add_argument('--only-order', type=int, default=None, help='Scan a single order')
        parser.add_argument('--append-g2', action='store_true', help='Append the G2 row (expected true)')
        parser.add_argument('--genus', type=int, default=2)
        parser.add_argument('--catalog-dir', default=None, help='Catalog location (overrides SIEVE_CATALOG_DIR)')

    def run(self, **options):
        params = validated(MinimalityParamsSerializer, {
            'upto': options['upto'],
            'only_order': options['only_order'],
            'append_g2': options['append_g2'],
            'genus': options['genus'],
        })
        return ReproductionService.minimality(
            jobs=self.get_jobs(options),
            catalog_dir=options['catalog_dir'],
            cache=self.get_cache(options),
            **params,
        )
