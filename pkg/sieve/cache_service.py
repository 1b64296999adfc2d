"""
Result cache for command reports and per-group minimality rows
"""
import hashlib
import json
import logging

from django.conf import settings
from django.core.cache import caches
from django.core.cache.backends.filebased import FileBasedCache

logger = logging.getLogger(__name__)


class ResultCacheService:
    """
    Cache keyed by (command, parameters, catalog fingerprint, tool version).

    Args:
        location: Directory overriding SCC_SIEVE_CACHE, or None for the configured cache
        enabled: When False every lookup misses and nothing is stored
    """

    def __init__(self, location=None, enabled=True):
        self.enabled = enabled
        if location:
            self.cache = FileBasedCache(str(location), params={'TIMEOUT': None})
        else:
            self.cache = caches['default']

    @staticmethod
    def make_key(command, parameters, catalog_fingerprint=None):
        payload = json.dumps(
            [command, parameters, catalog_fingerprint, settings.SIEVE_VERSION],
            sort_keys=True, default=str,
        )
        return f"sieve:{hashlib.sha256(payload.encode()).hexdigest()}"

    def get(self, command, parameters, catalog_fingerprint=None):
        if not self.enabled:
            return None
        value = self.cache.get(self.make_key(command, parameters, catalog_fingerprint))
        if value is not None:
            logger.info(f"cache hit for {command}")
        return value

    def set(self, command, parameters, value, catalog_fingerprint=None):
        if not self.enabled:
            return
        self.cache.set(self.make_key(command, parameters, catalog_fingerprint), value, timeout=None)

    @staticmethod
    def row_key(digest, genus, budgets):
        return ResultCacheService.make_key('minimality-row', {'digest': digest, 'genus': genus, 'budgets': budgets})

    def get_row(self, digest, fingerprint, genus, budgets):
        """
        A cached minimality row for the group with this table digest, only if
        its stored fingerprint still matches.
        """
        if not self.enabled:
            return None
        key = self.row_key(digest, genus, budgets)
        row = self.cache.get(key)
        if row is None:
            return None
        if row.get('fingerprint') != fingerprint or row.get('digest') != digest:
            logger.warning(f"cached row {row.get('key')} no longer matches its group; discarding")
            self.cache.delete(key)
            return None
        return row

    def set_row(self, row, genus, budgets):
        if not self.enabled:
            return
        self.cache.set(self.row_key(row['digest'], genus, budgets), row, timeout=None)
