"""
Geometric-kernel decisions for homomorphisms from surface groups to finite groups.

A hom has geometric kernel when some simple closed curve dies. Every simple
closed curve is a mapping class image of a standard curve (x1, or a
separating c_m), so the kernel is geometric exactly when the twist orbit of the
hom's conjugation class contains a class killing a standard curve.
"""
from __future__ import annotations

import logging
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd

import numpy as np
from django.conf import settings
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components

from sieve.exceptions import BudgetExceededError, CertificateReplayError, TwistValidationError
from sieve.groups import commutator_table, is_cyclic, maximal_subgroups
from sieve.surface import (
    SurfaceHom,
    apply,
    apply_batch,
    canonical_codes,
    canonical_images,
    decode_states,
    evaluate,
    evaluate_batch,
    evaluate_letters,
    separating_curve,
    state_codes_fit,
    twist_generators,
    twist_set_complete,
    word,
)

logger = logging.getLogger(__name__)

GEOMETRIC = 'geometric'
NONGEOMETRIC = 'nongeometric'
INCONCLUSIVE = 'inconclusive'

SURJECTIVE_REDUCTION = (
    "Only surjective homomorphisms are decided: a non-surjective hom factors through "
    "a proper subgroup, which is scanned at its own order."
)


@dataclass(frozen=True)
class StandardCurveSet:
    """x1 plus the separating curves c_m."""

    genus: int
    nonseparating: object
    separating: tuple

    def curves(self):
        return [('x1', self.nonseparating)] + [(f"c{m}", w) for m, w in self.separating]


def standard_curves(genus, all_separating=False):
    """
    Standard curves at ``genus``. Separating curves run over m = 1..floor(g/2),
    or 1..g-1 with ``all_separating``; c_g is the relator and never included.
    """
    top = genus - 1 if all_separating else genus // 2
    separating = tuple((m, separating_curve(genus, m)) for m in range(1, top + 1))
    return StandardCurveSet(genus, word(genus, [1]), separating)


@dataclass
class DecisionReport:
    verdict: str
    certificate: dict = None
    orbit_size: int = 0
    states_explored: int = 0
    truncated: bool = False
    depth_limit: int = None
    twist_set_complete: bool = True

    def as_dict(self):
        return {
            'verdict': self.verdict,
            'certificate': self.certificate,
            'orbit_size': self.orbit_size,
            'states_explored': self.states_explored,
            'truncated': self.truncated,
            'depth_limit': self.depth_limit,
            'twist_set_complete': self.twist_set_complete,
        }


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def _check_enumeration_budget(group, genus, budget):
    budget = budget if budget is not None else settings.SIEVE_ENUMERATION_BUDGET
    requested = group.order ** (2 * genus)
    if requested > budget:
        raise BudgetExceededError(
            f"enumerating Hom(surface of genus {genus}, {group.name}) needs {requested} tuples, "
            f"budget is {budget}", requested=requested, budget=budget)


def surjective_mask(group, images):
    """Rows whose entries generate the group: not all inside one maximal subgroup."""
    images = np.asarray(images, dtype=np.int64)
    mask = np.ones(images.shape[0], dtype=bool)
    for maximal in maximal_subgroups(group):
        mask &= ~maximal.mask[images].all(axis=1)
    return mask


def hom_array(group, genus, surjective_only=False, budget=None):
    """
    Every tuple (x1, y1, ..., xg, yg) satisfying the relator, as an (m, 2g) array.

    Pairs are grouped by commutator value; a prefix of handles is extended by
    every pair, and the last handle is joined from the pairs whose commutator
    is the inverse of the prefix product.
    """
    _check_enumeration_budget(group, genus, budget)
    n = group.order
    pair_comm = commutator_table(group).ravel().astype(np.int64)
    order = np.argsort(pair_comm, kind='stable')
    counts = np.bincount(pair_comm, minlength=n)
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])

    prefix = np.zeros((1, 0), dtype=np.int64)
    value = np.array([group.identity], dtype=np.int64)
    all_pairs = np.arange(n * n, dtype=np.int64)
    for _ in range(genus - 1):
        m = prefix.shape[0]
        prefix = np.hstack([np.repeat(prefix, n * n, axis=0), np.tile(all_pairs, m)[:, None]])
        value = group.table[np.repeat(value, n * n), np.tile(pair_comm, m)]

    target = group.inverse[value]
    num = counts[target]
    rows = np.repeat(np.arange(prefix.shape[0]), num)
    offsets = np.arange(rows.size) - np.repeat(np.cumsum(num) - num, num)
    last = order[starts[target][rows] + offsets]
    pairs = np.hstack([prefix[rows], last[:, None]])

    images = np.empty((pairs.shape[0], 2 * genus), dtype=np.int64)
    images[:, 0::2] = pairs // n
    images[:, 1::2] = pairs % n
    if surjective_only:
        images = images[surjective_mask(group, images)]
    logger.debug(f"{group.name}, genus {genus}: {images.shape[0]} homs (surjective only: {surjective_only})")
    return images


def enumerate_homs(group, genus, surjective_only=False, budget=None):
    """Stream every hom as a :class:`SurfaceHom`."""
    for row in hom_array(group, genus, surjective_only, budget):
        yield SurfaceHom(genus, group, tuple(int(i) for i in row))


# ---------------------------------------------------------------------------
# Single-hom decision
# ---------------------------------------------------------------------------

def _killed_curve(curves, images, group):
    for name, curve in curves:
        if evaluate_letters(curve.letters, images, group) == group.identity:
            return name
    return None


def replay_certificate(hom, certificate):
    """Apply the certificate's twists to ``hom`` in order and evaluate the named curve."""
    curves = dict(standard_curves(hom.genus, all_separating=True).curves())
    twists = {t.name: t for t in twist_generators(hom.genus)}
    current = hom
    for name in certificate['twists']:
        current = apply(twists[name], current)
    return evaluate(curves[certificate['curve']], current).is_identity


def is_geometric(hom, state_budget=None, depth_limit=None, all_separating=False, use_inverses=True):
    """
    Breadth-first search over the twist orbit of the hom's conjugation class,
    stopping at the first class that kills a standard curve.

    A closed orbit with no hit is nongeometric at genus <= 2; at higher genus,
    or when a budget stops the search, the verdict is inconclusive.
    """
    genus, group = hom.genus, hom.target
    complete = twist_set_complete(genus)
    if complete:
        budget = state_budget if state_budget is not None else settings.SIEVE_STATE_BUDGET
    else:
        budget = state_budget if state_budget is not None else settings.SIEVE_HIGH_GENUS_STATE_BUDGET
        depth_limit = depth_limit if depth_limit is not None else settings.SIEVE_HIGH_GENUS_DEPTH
    twists = twist_generators(genus)
    if not use_inverses:
        twists = twists[:len(twists) // 2]
    curves = standard_curves(genus, all_separating).curves()

    start = canonical_images(hom.images, group)
    parents = {start: None}
    queue = deque([(start, 0)])
    truncated = False
    while queue:
        state, depth = queue.popleft()
        killed = _killed_curve(curves, state, group)
        if killed is not None:
            path = []
            node = state
            while parents[node] is not None:
                node, name = parents[node]
                path.append(name)
            certificate = {'twists': path[::-1], 'curve': killed}
            if not replay_certificate(hom, certificate):
                raise CertificateReplayError(f"certificate {certificate} does not replay on {hom.render()}")
            return DecisionReport(GEOMETRIC, certificate, len(parents), len(parents),
                                  truncated=False, depth_limit=depth_limit, twist_set_complete=complete)
        if depth_limit is not None and depth >= depth_limit:
            truncated = True
            continue
        for t in twists:
            images = tuple(evaluate_letters(image.letters, state, group) for image in t.images)
            neighbor = canonical_images(images, group)
            if neighbor in parents:
                continue
            if len(parents) >= budget:
                truncated = True
                continue
            parents[neighbor] = (state, t.name)
            queue.append((neighbor, depth + 1))

    if truncated or not complete:
        if truncated:
            logger.warning(f"search from {hom.render()} stopped at {len(parents)} states; verdict downgraded")
        return DecisionReport(INCONCLUSIVE, None, len(parents), len(parents), truncated=truncated,
                              depth_limit=depth_limit, twist_set_complete=complete)
    logger.info(f"orbit of {hom.render()} closed at {len(parents)} classes with no standard curve killed")
    return DecisionReport(NONGEOMETRIC, None, len(parents), len(parents), truncated=False,
                          depth_limit=depth_limit, twist_set_complete=complete)


def twist_orbit(hom, use_inverses=True, limit=None):
    """All canonical classes reachable from ``hom`` by twists."""
    group = hom.target
    twists = twist_generators(hom.genus)
    if not use_inverses:
        twists = twists[:len(twists) // 2]
    start = canonical_images(hom.images, group)
    seen = {start}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        for t in twists:
            neighbor = canonical_images(
                tuple(evaluate_letters(image.letters, state, group) for image in t.images), group)
            if neighbor not in seen:
                if limit is not None and len(seen) >= limit:
                    raise BudgetExceededError(f"twist orbit exceeds {limit} classes", len(seen), limit)
                seen.add(neighbor)
                queue.append(neighbor)
    return seen


# ---------------------------------------------------------------------------
# Whole-group scan
# ---------------------------------------------------------------------------

@dataclass
class OrbitGraph:
    """Canonical classes of surjective homs with the twist action on them."""

    group: object
    genus: int
    hom_count: int
    states: np.ndarray
    images: np.ndarray
    neighbors: list
    labels: np.ndarray
    orbit_count: int


def build_orbit_graph(group, genus, state_budget=None, enumeration_budget=None, surjective_only=True):
    homs = hom_array(group, genus, surjective_only=surjective_only, budget=enumeration_budget)
    if not state_codes_fit(group, genus):
        raise BudgetExceededError(f"state codes for {group.name} at genus {genus} overflow 62 bits")
    states = np.unique(canonical_codes(homs, group)) if homs.size else np.zeros(0, dtype=np.int64)
    budget = state_budget if state_budget is not None else settings.SIEVE_STATE_BUDGET
    if states.size > budget:
        raise BudgetExceededError(
            f"{group.name} at genus {genus} has {states.size} classes, budget is {budget}",
            requested=int(states.size), budget=budget)
    images = decode_states(states, group.order, 2 * genus)
    neighbors = []
    for t in twist_generators(genus):
        moved = canonical_codes(apply_batch(t, images, group), group) if states.size else states
        target = np.searchsorted(states, moved)
        if states.size and (target.max() >= states.size or not np.array_equal(states[target], moved)):
            raise TwistValidationError(f"{t.name} maps a class outside the enumerated set")
        neighbors.append(target)
    count = states.size
    if count:
        half = len(neighbors) // 2
        src = np.concatenate([np.arange(count)] * half)
        dst = np.concatenate(neighbors[:half])
        graph = csr_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(count, count))
        orbit_count, labels = connected_components(graph, directed=True, connection='weak')
    else:
        orbit_count, labels = 0, np.zeros(0, dtype=np.int64)
    logger.debug(f"{group.name}, genus {genus}: {homs.shape[0]} homs, {count} classes, {orbit_count} orbits")
    return OrbitGraph(group, genus, int(homs.shape[0]), states, images, neighbors, labels, int(orbit_count))


def _kill_masks(graph, curves):
    return {name: evaluate_batch(curve, graph.images, graph.group) == graph.group.identity
            for name, curve in curves}


def _certificates_toward(graph, killed):
    """
    Next hop toward the killed set for every state, from one BFS on the reversed
    twist graph rooted at a virtual node joined to all killed states.
    """
    count = graph.states.size
    root = count
    src, dst = [], []
    for target in graph.neighbors:
        src.append(target)
        dst.append(np.arange(count))
    killed_idx = np.flatnonzero(killed)
    src.append(np.full(killed_idx.size, root))
    dst.append(killed_idx)
    src, dst = np.concatenate(src), np.concatenate(dst)
    reverse = csr_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(count + 1, count + 1))
    _, predecessors = breadth_first_order(reverse, root, directed=True, return_predecessors=True)
    return predecessors[:count]


def _certificate_path(graph, next_hop, state, twists, curves_killing):
    path = []
    node = state
    while not curves_killing(node):
        following = next_hop[node]
        name = next(t.name for t, target in zip(twists, graph.neighbors) if target[node] == following)
        path.append(name)
        node = following
    return path, node


@dataclass
class OrbitSummary:
    representative: tuple
    size: int
    verdict: str
    certificate: dict = None

    def as_dict(self):
        return {'representative': list(self.representative), 'size': self.size,
                'verdict': self.verdict, 'certificate': self.certificate}


@dataclass
class ScanResult:
    group_name: str
    order: int
    genus: int
    hom_count: int
    class_count: int
    orbit_count: int
    exists_nongeometric: bool
    witness: object = None
    orbits: list = field(default_factory=list)
    twist_set_complete: bool = True
    surjective_only: bool = True

    @property
    def verdict_counts(self):
        counts = {GEOMETRIC: 0, NONGEOMETRIC: 0, INCONCLUSIVE: 0}
        for orbit in self.orbits:
            counts[orbit.verdict] += 1
        return counts

    def as_dict(self):
        return {
            'group': self.group_name,
            'order': self.order,
            'genus': self.genus,
            'homs': self.hom_count,
            'surjective_only': self.surjective_only,
            'classes': self.class_count,
            'orbits': self.orbit_count,
            'verdicts': self.verdict_counts,
            'exists_nongeometric': self.exists_nongeometric,
            'witness': self.witness.as_dict() if self.witness is not None else None,
            'orbit_reports': [o.as_dict() for o in self.orbits],
            'twist_set_complete': self.twist_set_complete,
            'reduction': SURJECTIVE_REDUCTION if self.surjective_only else None,
        }


def scan_group(group, genus, state_budget=None, enumeration_budget=None, all_separating=False,
               surjective_only=True):
    """
    Decide every surjective hom of the genus-g surface group onto ``group``
    (every hom when ``surjective_only`` is False), one decision per twist orbit
    of canonical classes. Twists preserve the image, so orbits never mix the two.
    """
    graph = build_orbit_graph(group, genus, state_budget, enumeration_budget, surjective_only)
    complete = twist_set_complete(genus)
    curves = standard_curves(genus, all_separating).curves()
    masks = _kill_masks(graph, curves)
    killed = np.zeros(graph.states.size, dtype=bool)
    for mask in masks.values():
        killed |= mask

    count = graph.states.size
    geometric_orbit = np.zeros(graph.orbit_count, dtype=bool)
    if count:
        geometric_orbit = np.bincount(graph.labels, weights=killed, minlength=graph.orbit_count) > 0
    sizes = np.bincount(graph.labels, minlength=graph.orbit_count) if count else np.zeros(0, dtype=np.int64)
    next_hop = _certificates_toward(graph, killed) if killed.any() else None
    twists = twist_generators(genus)

    def kills(node):
        return bool(killed[node])

    orbits = []
    witness = None
    _, first_members = np.unique(graph.labels, return_index=True)
    for orbit in range(graph.orbit_count):
        representative = int(first_members[orbit])
        images = tuple(int(i) for i in graph.images[representative])
        if geometric_orbit[orbit]:
            path, end = _certificate_path(graph, next_hop, representative, twists, kills)
            curve = next(name for name, _ in curves if masks[name][end])
            certificate = {'twists': path, 'curve': curve}
            if not replay_certificate(SurfaceHom(genus, group, images), certificate):
                raise CertificateReplayError(f"certificate {certificate} does not replay on {images}")
            orbits.append(OrbitSummary(images, int(sizes[orbit]), GEOMETRIC, certificate))
        elif complete:
            orbits.append(OrbitSummary(images, int(sizes[orbit]), NONGEOMETRIC))
            if witness is None:
                witness = SurfaceHom(genus, group, images)
        else:
            orbits.append(OrbitSummary(images, int(sizes[orbit]), INCONCLUSIVE))

    result = ScanResult(group.name, group.order, genus, graph.hom_count, int(count), graph.orbit_count,
                        witness is not None, witness, orbits, complete, surjective_only)
    logger.info(f"scan {group.name} genus {genus}: {result.verdict_counts} over {graph.orbit_count} orbits")
    return result


# ---------------------------------------------------------------------------
# Catalog-wide scans
# ---------------------------------------------------------------------------

@dataclass
class MinimalityRow:
    key: str
    order: int
    digest: str
    fingerprint: dict
    exists_nongeometric: bool
    classes: int
    orbits: int
    cea: bool = None
    witness: dict = None

    def as_dict(self):
        return {
            'key': self.key, 'order': self.order, 'digest': self.digest,
            'fingerprint': self.fingerprint, 'exists_nongeometric': self.exists_nongeometric,
            'classes': self.classes, 'orbits': self.orbits, 'cea': self.cea, 'witness': self.witness,
        }


def _scan_row(args):
    key, group, fingerprint, genus, state_budget, enumeration_budget = args
    result = scan_group(group, genus, state_budget, enumeration_budget)
    return MinimalityRow(
        key, group.order, group.digest, fingerprint, result.exists_nongeometric,
        result.class_count, result.orbit_count,
        witness=result.witness.as_dict() if result.witness is not None else None)


def minimality_scan(entries, genus=2, jobs=1, state_budget=None, enumeration_budget=None):
    """
    scan_group over every (key, group, fingerprint dict) item; rows come back in
    input order.
    """
    state_budget = state_budget if state_budget is not None else settings.SIEVE_STATE_BUDGET
    enumeration_budget = enumeration_budget if enumeration_budget is not None else settings.SIEVE_ENUMERATION_BUDGET
    work = [(key, group, fp, genus, state_budget, enumeration_budget) for key, group, fp in entries]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_scan_row, work))
    else:
        rows = [_scan_row(item) for item in work]
    for row in rows:
        if row.exists_nongeometric:
            logger.error(f"{row.key}: nongeometric surjection found, witness {row.witness}")
    return rows


@dataclass
class NielsenCheck:
    passed: bool
    surjections: int
    orbits: int
    failing: tuple = None

    def as_dict(self):
        return {'passed': self.passed, 'surjections': self.surjections, 'orbits': self.orbits,
                'failing_representative': list(self.failing) if self.failing else None}


def nielsen_normal_form_check(group, genus=2, enumeration_budget=None):
    """Every twist orbit of surjections onto a cyclic group contains (generator, e, ..., e)."""
    if not is_cyclic(group):
        raise ValueError(f"{group.name} is not cyclic")
    graph = build_orbit_graph(group, genus, enumeration_budget=enumeration_budget)
    if not graph.states.size:
        return NielsenCheck(True, graph.hom_count, 0)
    first = graph.images[:, 0]
    rest_trivial = (graph.images[:, 1:] == group.identity).all(axis=1)
    normal_form = (group.element_orders[first] == group.order) & rest_trivial
    hit = np.bincount(graph.labels, weights=normal_form, minlength=graph.orbit_count) > 0
    failing = None
    if not hit.all():
        orbit = int(np.flatnonzero(~hit)[0])
        failing = tuple(int(i) for i in graph.images[int(np.argmax(graph.labels == orbit))])
    return NielsenCheck(bool(hit.all()), graph.hom_count, graph.orbit_count, failing)


def abelian_torus_oracle(group, a, b):
    """
    Genus-1 verdict for an abelian target by arithmetic: geometric iff some
    residues p, q mod the exponent with gcd(p, q, exponent) = 1 give p*a + q*b = 0.
    """
    exponent = int(np.lcm.reduce(group.element_orders))
    for p in range(exponent):
        pa = group.power(a, p)
        for q in range(exponent):
            if gcd(gcd(p, q), exponent) != 1:
                continue
            if group.multiply(pa, group.power(b, q)) == group.identity:
                return GEOMETRIC
    return NONGEOMETRIC


def canonical_class_count(group, genus, surjective_only=False):
    homs = hom_array(group, genus, surjective_only)
    return int(np.unique(canonical_codes(homs, group)).size) if homs.size else 0
