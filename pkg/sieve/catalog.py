"""
Catalog of all groups of order 2 through 31 up to isomorphism.

Every group of order below 60 is solvable, so it has a normal subgroup N of
prime index p and is a cyclic extension N.Z_p. Order n is generated from the
catalog at each order n/p: for every N, every sigma in Aut(N) and every z in N
with sigma(z) = z and sigma^p = conjugation by z, the pairs (x, i) with
x in N, 0 <= i < p multiply as

    (x, i)(y, j) = (x * sigma^i(y) * z^[i+j >= p], (i + j) mod p).

Candidates are validated, bucketed by fingerprint and deduplicated with
``isomorphic``.
"""
from __future__ import annotations

import hashlib
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from sympy import factorint

from sieve.exceptions import CatalogConsistencyError, GroupValidationError
from sieve.groups import (
    automorphisms,
    build_from_table,
    fingerprint,
    from_text,
    is_cyclic,
    is_cyclic_extension_of_abelian,
    isomorphic,
    to_text,
    trivial_group,
)

logger = logging.getLogger(__name__)

MAX_CATALOG_ORDER = 32

MANIFEST_NAME = 'manifest.json'


@dataclass
class CatalogEntry:
    group: object
    order: int
    fingerprint: object
    tags: str
    index: int = 0

    @property
    def key(self):
        return f"catalog:{self.order}:{self.index}"

    def as_dict(self):
        return {
            'key': self.key,
            'order': self.order,
            'index': self.index,
            'tags': self.tags,
            'digest': self.group.digest,
            'fingerprint': self.fingerprint.as_dict(),
        }


def _power_permutation(perm, exponent):
    result = np.arange(len(perm))
    for _ in range(exponent):
        result = perm[result]
    return result


def extension_table(n_group, sigma, z, p):
    """Table of N.Z_p for automorphism ``sigma`` and tail ``z``; index of (x, i) is x*p + i."""
    m = n_group.order
    powers = [_power_permutation(sigma, i) for i in range(p)]
    x = np.repeat(np.arange(m), p)
    i = np.tile(np.arange(p), m)
    acted = np.stack(powers)[i[:, None], x[None, :]]
    first = n_group.table[x[:, None], acted]
    wraps = (i[:, None] + i[None, :]) >= p
    first = np.where(wraps, n_group.table[first, z], first)
    second = (i[:, None] + i[None, :]) % p
    return first * p + second


def cyclic_extension_candidates(n_group, p):
    """(sigma, z) pairs satisfying the extension conditions."""
    conj = n_group.conjugation_table
    for sigma in automorphisms(n_group):
        sigma_p = _power_permutation(sigma, p)
        fixed = np.flatnonzero(sigma == np.arange(n_group.order))
        for z in fixed:
            if np.array_equal(sigma_p, conj[z]):
                yield sigma, int(z)


def _generate_order(n, smaller):
    """All groups of order n, given the catalog entries of every smaller order as groups."""
    found = {}
    for p in sorted(factorint(n)):
        bases = smaller.get(n // p, [])
        for base_index, n_group in enumerate(bases):
            for cand_index, (sigma, z) in enumerate(cyclic_extension_candidates(n_group, p)):
                table = extension_table(n_group, sigma, z, p)
                tags = f"N={n // p}:{base_index} p={p} candidate={cand_index}"
                try:
                    group = build_from_table(table, name=f"order{n}")
                except GroupValidationError as e:
                    raise CatalogConsistencyError(f"order {n} candidate {tags} failed validation: {e}") from e
                fp = fingerprint(group)
                bucket = found.setdefault(fp, [])
                if any(isomorphic(group, other) for other, _ in bucket):
                    continue
                bucket.append((group, tags))
    entries = [CatalogEntry(group, n, fp, tags) for fp, bucket in found.items() for group, tags in bucket]
    entries.sort(key=lambda e: (e.order, e.fingerprint, to_text(e.group)))
    for index, entry in enumerate(entries):
        entry.index = index
        entry.group.name = _entry_name(entry)
    logger.info(f"order {n}: {len(entries)} groups")
    return entries


def _entry_name(entry):
    if is_cyclic(entry.group):
        return f"Z{entry.order}"
    return entry.key


def build_catalog(max_order=31, jobs=1):
    """
    Every group of order 2..max_order, one entry per isomorphism class, sorted
    by (order, fingerprint, serialized table).
    """
    if max_order > MAX_CATALOG_ORDER:
        raise ValueError(f"catalog generation is limited to orders <= {MAX_CATALOG_ORDER}")
    groups_by_order = {1: [trivial_group()]}
    entries_by_order = {}
    remaining = list(range(2, max_order + 1))
    while remaining:
        ready = [n for n in remaining if all(n // p in groups_by_order for p in factorint(n))]
        if jobs > 1 and len(ready) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                smaller = {d: groups_by_order[d] for d in groups_by_order}
                results = list(pool.map(_generate_order, ready, [smaller] * len(ready)))
        else:
            results = [_generate_order(n, groups_by_order) for n in ready]
        for n, entries in zip(ready, results):
            entries_by_order[n] = entries
            groups_by_order[n] = [e.group for e in entries]
        remaining = [n for n in remaining if n not in ready]
    catalog = [e for n in sorted(entries_by_order) for e in entries_by_order[n]]
    logger.info(f"catalog complete: {len(catalog)} groups of order 2..{max_order}")
    return catalog


def entries_of_order(catalog, order):
    return [e for e in catalog if e.order == order]


def catalog_fingerprint(catalog):
    """sha256 over the ordered (order, index, table digest) triples."""
    digest = hashlib.sha256()
    for entry in catalog:
        digest.update(f"{entry.order}:{entry.index}:{entry.group.digest}\n".encode())
    return digest.hexdigest()


@dataclass
class CyclicExtensionClassification:
    cea: list = field(default_factory=list)
    exceptions: list = field(default_factory=list)


def classify_cyclic_extensions(catalog):
    """Split the catalog into CEA entries (with witness N) and exceptions."""
    result = CyclicExtensionClassification()
    for entry in catalog:
        ok, witness = is_cyclic_extension_of_abelian(entry.group)
        if ok:
            result.cea.append((entry, witness))
        else:
            result.exceptions.append(entry)
    logger.info(f"{len(result.cea)} CEA groups, {len(result.exceptions)} exceptions")
    return result


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------

def _file_name(entry):
    return f"{entry.order:02d}_{entry.index:02d}.txt"


def save_catalog(catalog, directory):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {'catalog_fingerprint': catalog_fingerprint(catalog), 'entries': []}
    for entry in catalog:
        (directory / _file_name(entry)).write_text(to_text(entry.group))
        manifest['entries'].append({**entry.as_dict(), 'file': _file_name(entry)})
    (directory / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2, sort_keys=True))
    logger.info(f"wrote {len(catalog)} groups to {directory}")
    return manifest


def load_catalog(directory):
    """Re-read a persisted catalog; every group is revalidated and checked against the manifest."""
    directory = Path(directory)
    manifest = json.loads((directory / MANIFEST_NAME).read_text())
    catalog = []
    for item in manifest['entries']:
        group = from_text((directory / item['file']).read_text(), name=item['key'])
        fp = fingerprint(group)
        if group.digest != item['digest'] or fp.as_dict() != item['fingerprint']:
            raise CatalogConsistencyError(f"{item['file']} does not match its manifest entry")
        entry = CatalogEntry(group, item['order'], fp, item['tags'], item['index'])
        group.name = _entry_name(entry)
        catalog.append(entry)
    if catalog_fingerprint(catalog) != manifest['catalog_fingerprint']:
        raise CatalogConsistencyError(f"catalog at {directory} does not match its manifest fingerprint")
    return catalog


def load_or_build_catalog(directory=None, max_order=31, jobs=1):
    """Load a persisted catalog when it covers ``max_order``, otherwise build and persist it."""
    if directory is not None and (Path(directory) / MANIFEST_NAME).exists():
        catalog = load_catalog(directory)
        if catalog and max(e.order for e in catalog) >= max_order:
            return [e for e in catalog if e.order <= max_order]
        logger.warning(f"catalog at {directory} stops below order {max_order}; rebuilding")
    catalog = build_catalog(max_order, jobs=jobs)
    if directory is not None:
        save_catalog(catalog, directory)
    return catalog


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

class _TableSearch:
    """Backtracking over Cayley tables with identity 0, Latin and associativity propagation."""

    def __init__(self, n):
        self.n = n
        self.table = [[-1] * n for _ in range(n)]
        # where[x][v] = y with x*y = v
        self.where = [[-1] * n for _ in range(n)]
        self.col_has = [[False] * n for _ in range(n)]
        self.trail = []
        for x in range(n):
            self._place(0, x, x)
            if x:
                self._place(x, 0, x)

    def _place(self, a, b, v):
        self.table[a][b] = v
        self.where[a][v] = b
        self.col_has[b][v] = True
        self.trail.append((a, b, v))

    def _undo_to(self, mark):
        while len(self.trail) > mark:
            a, b, v = self.trail.pop()
            self.table[a][b] = -1
            self.where[a][v] = -1
            self.col_has[b][v] = False

    def assign(self, a, b, v):
        """Set a*b = v and propagate; False on contradiction."""
        queue = [(a, b, v)]
        t = self.table
        while queue:
            a, b, v = queue.pop()
            current = t[a][b]
            if current == v:
                continue
            if current != -1 or self.where[a][v] != -1 or self.col_has[b][v]:
                return False
            self._place(a, b, v)
            n = self.n
            for c in range(n):
                # (ab)c = a(bc)
                w = t[b][c]
                if w != -1:
                    left, right = t[v][c], t[a][w]
                    if left != -1 and right != -1:
                        if left != right:
                            return False
                    elif left != -1:
                        queue.append((a, w, left))
                    elif right != -1:
                        queue.append((v, c, right))
                # (ca)b = c(ab)
                u = t[c][a]
                if u != -1:
                    left, right = t[u][b], t[c][v]
                    if left != -1 and right != -1:
                        if left != right:
                            return False
                    elif left != -1:
                        queue.append((c, v, left))
                    elif right != -1:
                        queue.append((u, b, right))
                # a*b as an outer product: (c y) b = c (y b) with c y = a
                y = self.where[c][a]
                if y != -1:
                    w = t[y][b]
                    if w != -1:
                        other = t[c][w]
                        if other == -1:
                            queue.append((c, w, v))
                        elif other != v:
                            return False
                # a*b as an outer product: (a y) c' = a (y c') with y c' = b
                y = c
                c2 = self.where[y][b]
                if c2 != -1:
                    u = t[a][y]
                    if u != -1:
                        other = t[u][c2]
                        if other == -1:
                            queue.append((u, c2, v))
                        elif other != v:
                            return False
        return True

    def solutions(self):
        n = self.n
        for cell in range(n * n):
            a, b = divmod(cell, n)
            if self.table[a][b] == -1:
                break
        else:
            yield [row[:] for row in self.table]
            return
        for v in range(n):
            if self.where[a][v] != -1 or self.col_has[b][v]:
                continue
            mark = len(self.trail)
            if self.assign(a, b, v):
                yield from self.solutions()
            self._undo_to(mark)


def enumerate_group_tables(n):
    """
    Isomorphism classes of groups of order n by exhaustive Cayley-table search;
    practical for n <= 8.
    """
    classes = {}
    tables = 0
    for table in _TableSearch(n).solutions():
        tables += 1
        group = build_from_table(table, name=f"table{n}")
        bucket = classes.setdefault(fingerprint(group), [])
        if not any(isomorphic(group, other) for other in bucket):
            bucket.append(group)
    logger.debug(f"order {n}: {tables} complete tables searched")
    return [g for bucket in classes.values() for g in bucket]
