"""
Generate (or reload) and persist the catalog of groups of order 2..31.
Run with: python manage.py catalog [--max-order 31] [--catalog-dir DIR]
"""
from sieve.management.base import SieveCommand
from sieve.pipeline_service import ReproductionService
from sieve.serializers import CatalogParamsSerializer, validated


class Command(SieveCommand):
    help = 'Builds the small-group catalog and reports counts per order and the cyclic-extension exceptions'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--max-order', type=int, default=31)
        parser.add_argument('--catalog-dir', default=None)

    def run(self, **options):
        params = validated(CatalogParamsSerializer, {'max_order': options['max_order']})
        return ReproductionService.catalog(
            max_order=params['max_order'],
            catalog_dir=options['catalog_dir'],
            jobs=self.get_jobs(options),
        )
