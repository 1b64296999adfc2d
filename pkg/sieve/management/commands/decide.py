"""
Decide geometric kernels for homomorphisms onto a named group.
Run with: python manage.py decide --group Klein4 --genus 1
"""
from sieve.management.base import SieveCommand
from sieve.pipeline_service import ReproductionService
from sieve.serializers import DecideParamsSerializer, validated


class Command(SieveCommand):
    help = 'Scans all surjections onto a group (or decides its natural hom) for nongeometric kernels'
    uses_cache = True

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--group', required=True,
                            help='G2, Gk:k=<k>,g=<g>, SL2Z3, S4, Klein4, Z<n>, catalog:<order>:<index> or a table file')
        parser.add_argument('--genus', type=int, required=True)
        parser.add_argument('--surjective-only', action='store_true',
                            help='Decide surjective homomorphisms only (default: every homomorphism)')
        parser.add_argument('--budget', type=int, default=None, help='Orbit search state budget')
        parser.add_argument('--depth', type=int, default=None, help='Orbit search depth limit')
        parser.add_argument('--natural', action='store_true', help="Decide only the construction's natural hom")
        parser.add_argument('--all-separating', action='store_true',
                            help='Test separating curves c_1..c_{g-1} instead of c_1..c_{g/2}')
        parser.add_argument('--catalog-dir', default=None)

    def run(self, **options):
        params = validated(DecideParamsSerializer, {
            'group': options['group'],
            'genus': options['genus'],
            'surjective_only': options['surjective_only'],
            'budget': options['budget'],
            'depth': options['depth'],
            'natural': options['natural'],
            'all_separating': options['all_separating'],
        })
        return ReproductionService.decide(
            catalog_dir=options['catalog_dir'],
            cache=self.get_cache(options),
            **params,
        )
