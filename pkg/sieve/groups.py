"""
Finite groups given by multiplication tables.

Elements are opaque indices into a validated Cayley table; structured
constructors keep human readable labels (tuples, permutations, pairs) for
reporting only. Every group is validated in full when it is built and is
immutable afterwards, so it can be shared freely between workers.
"""
from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np
from sympy.combinatorics.named_groups import SymmetricGroup

from sieve.exceptions import (
    ActionError,
    CrossGroupError,
    NoIdentityError,
    NoInverseError,
    NotAssociativeError,
    NotClosedError,
    NotNormalError,
)

logger = logging.getLogger(__name__)

# Row blocks for vectorized checks are sized so one block holds about this many cells
_BLOCK_CELLS = 1 << 22


class FiniteGroup:
    """
    A finite group stored as an order x order table of element indices.

    Build instances with :func:`build_from_table` or one of the constructors;
    the initializer trusts its arguments.
    """

    def __init__(self, table, identity, inverse, labels=None, name='group'):
        table = np.ascontiguousarray(table, dtype=np.int32)
        table.setflags(write=False)
        inverse = np.ascontiguousarray(inverse, dtype=np.int32)
        inverse.setflags(write=False)
        self.table = table
        self.identity = int(identity)
        self.inverse = inverse
        self.labels = tuple(labels) if labels is not None else None
        self.name = name

    @property
    def order(self):
        return int(self.table.shape[0])

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    # -- element access -------------------------------------------------

    def element(self, index):
        index = int(index)
        if not 0 <= index < self.order:
            raise IndexError(f"element index {index} out of range for {self.name}")
        return GroupElement(self, index)

    def elements(self):
        return [GroupElement(self, i) for i in range(self.order)]

    def label(self, index):
        if self.labels is None:
            return str(int(index))
        return self.labels[int(index)]

    def index_of(self, label):
        """Index of the element carrying ``label``."""
        try:
            return self._label_index[label]
        except KeyError:
            raise KeyError(f"{label!r} is not an element label of {self.name}") from None

    @cached_property
    def _label_index(self):
        labels = self.labels if self.labels is not None else [str(i) for i in range(self.order)]
        return {label: i for i, label in enumerate(labels)}

    # -- raw index arithmetic (inner loops) ----------------------------

    def multiply(self, a, b):
        return int(self.table[a, b])

    def invert(self, a):
        return int(self.inverse[a])

    def power(self, a, k):
        if k < 0:
            a, k = self.invert(a), -k
        result = self.identity
        for _ in range(k % self.element_orders[a] if self.order else 0):
            result = int(self.table[result, a])
        return result

    # -- cached structure ----------------------------------------------

    @cached_property
    def element_orders(self):
        """Order of every element, as an int array."""
        n = self.order
        idx = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        current = idx.copy()
        for k in range(1, n + 1):
            hit = (current == self.identity) & (orders == 0)
            orders[hit] = k
            if orders.all():
                break
            current = self.table[current, idx]
        orders.setflags(write=False)
        return orders

    @cached_property
    def is_abelian(self):
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def conjugation_table(self):
        """``conj[g, x] = g x g^-1``."""
        conj = self.table[self.table, self.inverse[:, None]]
        conj.setflags(write=False)
        return conj

    @cached_property
    def generators(self):
        """A small generating set, found greedily by element order."""
        return tuple(_greedy_generators(self.table, self.identity, self.element_orders))

    @cached_property
    def subgroups(self):
        return all_subgroups(self)

    @cached_property
    def digest(self):
        """sha256 of the table, independent of labels."""
        return hashlib.sha256(self.table.astype('<i4').tobytes()).hexdigest()


@dataclass(frozen=True, eq=False)
class GroupElement:
    """An element of a specific group. Operations never mix groups."""

    group: FiniteGroup
    index: int

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.group is other.group and self.index == other.index

    def __hash__(self):
        return hash((id(self.group), self.index))

    def __mul__(self, other):
        return mul(self, other)

    def inverse(self):
        return inv(self)

    @property
    def is_identity(self):
        return self.index == self.group.identity

    @property
    def label(self):
        return self.group.label(self.index)

    def __repr__(self):
        return f"<{self.group.name}:{self.label}>"


@dataclass(frozen=True, eq=False)
class SubgroupHandle:
    """A subgroup of ``parent`` given by its sorted member indices."""

    parent: FiniteGroup
    members: tuple
    is_normal: bool

    @property
    def order(self):
        return len(self.members)

    @cached_property
    def mask(self):
        mask = np.zeros(self.parent.order, dtype=bool)
        mask[list(self.members)] = True
        return mask

    def __contains__(self, index):
        return bool(self.mask[int(index)])

    def __eq__(self, other):
        if not isinstance(other, SubgroupHandle):
            return NotImplemented
        return self.parent is other.parent and self.members == other.members

    def __hash__(self):
        return hash((id(self.parent), self.members))

    def is_subgroup_of(self, other):
        return bool(np.all(other.mask[list(self.members)]))

    @property
    def is_abelian(self):
        members = np.asarray(self.members)
        block = self.parent.table[np.ix_(members, members)]
        return bool(np.array_equal(block, block.T))

    def as_group(self, name=None):
        """The subgroup as a stand-alone group, labels inherited from the parent."""
        members = np.asarray(self.members)
        position = np.full(self.parent.order, -1, dtype=np.int64)
        position[members] = np.arange(len(members))
        table = position[self.parent.table[np.ix_(members, members)]]
        labels = [self.parent.label(m) for m in members] if self.parent.labels is not None else None
        return build_from_table(table, labels=labels, name=name or f"sub({self.parent.name})")

    def __repr__(self):
        return f"SubgroupHandle({self.parent.name}, order={self.order}, normal={self.is_normal})"


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def build_from_table(table, labels=None, name='group'):
    """
    Validate a square index matrix and return the group it defines.

    Raises:
        NotClosedError: entries out of range or a row/column repeats an entry
        NoIdentityError: no two-sided identity
        NoInverseError: an element lacks a two-sided inverse
        NotAssociativeError: some (ab)c != a(bc)
    """
    table = np.asarray(table)
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
        raise NotClosedError(f"table of shape {table.shape} is not a non-empty square matrix")
    n = table.shape[0]
    table = table.astype(np.int64)
    if labels is not None and len(labels) != n:
        raise ValueError(f"{len(labels)} labels given for a table of order {n}")

    bad = np.argwhere((table < 0) | (table >= n))
    if bad.size:
        row, col = bad[0]
        raise NotClosedError(
            f"entry ({row}, {col}) = {table[row, col]} is outside [0, {n})", (row, col))

    expected = np.arange(n)
    for axis, kind in ((1, 'row'), (0, 'column')):
        ordered = np.sort(table, axis=axis)
        ok = (ordered == (expected[None, :] if axis == 1 else expected[:, None])).all(axis=axis)
        if not ok.all():
            line = int(np.flatnonzero(~ok)[0])
            values = table[line, :] if axis == 1 else table[:, line]
            repeated = int(np.flatnonzero(np.bincount(values, minlength=n) > 1)[0])
            raise NotClosedError(
                f"{kind} {line} is not a permutation (entry {repeated} repeats)", (line, repeated))

    rows_ok = (table == expected[None, :]).all(axis=1)
    cols_ok = (table == expected[:, None]).all(axis=0)
    candidates = np.flatnonzero(rows_ok & cols_ok)
    if candidates.size == 0:
        raise NoIdentityError("no element e with e*x = x*e = x for all x", ())
    identity = int(candidates[0])

    right_inverse = np.argmax(table == identity, axis=1)
    two_sided = table[right_inverse, expected] == identity
    if not two_sided.all():
        x = int(np.flatnonzero(~two_sided)[0])
        raise NoInverseError(f"element {x} has no two-sided inverse", (x,))

    _check_associative(table, identity)
    return FiniteGroup(table, identity, right_inverse, labels=labels, name=name)


def _check_associative(table, identity):
    # Light's test: (x s) y == x (s y) for every s in a generating set decides
    # associativity of the whole table.
    n = table.shape[0]
    orders = np.ones(n, dtype=np.int64)
    gens = _greedy_generators(table, identity, orders)
    block = max(1, _BLOCK_CELLS // n)
    for s in gens:
        s_row = table[s, :]
        for start in range(0, n, block):
            rows = np.arange(start, min(n, start + block))
            left = table[table[rows, s], :]
            right = table[rows][:, s_row]
            diff = left != right
            if diff.any():
                r, y = np.argwhere(diff)[0]
                x = int(rows[r])
                raise NotAssociativeError(
                    f"({x}*{s})*{y} != {x}*({s}*{y})", (x, s, int(y)))


def _closure_mask(table, identity, seeds):
    mask = np.zeros(table.shape[0], dtype=bool)
    mask[identity] = True
    seeds = np.unique(np.asarray(list(seeds), dtype=np.int64))
    if seeds.size == 0:
        return mask
    frontier = np.array([identity], dtype=np.int64)
    while frontier.size:
        reached = table[np.ix_(frontier, seeds)].ravel()
        new = np.unique(reached[~mask[reached]])
        mask[new] = True
        frontier = new
    return mask


def _greedy_generators(table, identity, orders):
    n = table.shape[0]
    gens = []
    mask = _closure_mask(table, identity, gens)
    # highest order first, ties to the smallest index
    ranking = sorted(range(n), key=lambda x: (-int(orders[x]), x))
    while not mask.all():
        pick = next(x for x in ranking if not mask[x])
        gens.append(pick)
        mask = _closure_mask(table, identity, gens)
    return gens


# ---------------------------------------------------------------------------
# Element operations
# ---------------------------------------------------------------------------

def _same_group(*elements):
    group = elements[0].group
    for element in elements[1:]:
        if element.group is not group:
            raise CrossGroupError(
                f"cannot combine an element of {group.name} with one of {element.group.name}")
    return group


def mul(a, b):
    group = _same_group(a, b)
    return GroupElement(group, group.multiply(a.index, b.index))


def inv(a):
    return GroupElement(a.group, a.group.invert(a.index))


def commutator(a, b):
    """``[a, b] = a b a^-1 b^-1``."""
    group = _same_group(a, b)
    return GroupElement(group, commutator_index(group, a.index, b.index))


def commutator_index(group, a, b):
    t, iv = group.table, group.inverse
    return int(t[t[a, b], t[iv[a], iv[b]]])


def commutator_table(group):
    """``C[a, b] = [a, b]`` for all pairs."""
    t, iv = group.table, group.inverse
    return t[t, t[np.ix_(iv, iv)]]


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def from_function(elements, mult, name='group'):
    """Tabulate ``mult`` on a list of hashable element labels."""
    elements = list(elements)
    position = {element: i for i, element in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for (i, a), (j, b) in product(enumerate(elements), repeat=2):
        table[i, j] = position[mult(a, b)]
    return build_from_table(table, labels=elements, name=name)


def trivial_group():
    return build_from_table([[0]], labels=['e'], name='1')


def cyclic(n):
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    idx = np.arange(n)
    return build_from_table(np.add.outer(idx, idx) % n, labels=list(range(n)), name=f"Z{n}")


def abelian_group(invariants):
    """Direct product of cyclic groups of the given orders."""
    invariants = [int(m) for m in invariants if int(m) > 1]
    if not invariants:
        return trivial_group()
    group = cyclic(invariants[0])
    for m in invariants[1:]:
        group = direct_product(group, cyclic(m))
    return _renamed(group, 'x'.join(f"Z{m}" for m in invariants))


def _renamed(group, name):
    return FiniteGroup(group.table, group.identity, group.inverse, labels=group.labels, name=name)


def _flatten_label(label):
    return label if isinstance(label, tuple) else (label,)


def direct_product(g, h, name=None):
    m = h.order
    table = (g.table[:, None, :, None].astype(np.int64) * m
             + h.table[None, :, None, :]).reshape(g.order * m, g.order * m)
    labels = [(g.label(a), h.label(b)) for a in range(g.order) for b in range(m)]
    return build_from_table(table, labels=labels, name=name or f"{g.name}x{h.name}")


def semidirect_product(n_group, h_group, action, name=None):
    """
    ``N x| H`` with ``(n1, h1)(n2, h2) = (n1 * action(h1)(n2), h1 h2)``.

    Args:
        action: sequence (or callable) giving, for each H index, the automorphism
            of N as a permutation array of N indices
    """
    perms = np.array([np.asarray(action(h) if callable(action) else action[h], dtype=np.int64)
                      for h in range(h_group.order)])
    if perms.shape != (h_group.order, n_group.order):
        raise ActionError(f"action must give {h_group.order} permutations of {n_group.order} points")
    for h in range(h_group.order):
        if not is_automorphism(n_group, perms[h]):
            raise ActionError(f"image of H element {h_group.label(h)} is not an automorphism of N")
    composed = perms[h_group.table]
    expected = perms[np.arange(h_group.order)[:, None, None], perms[None, :, :]]
    if not np.array_equal(composed, expected):
        raise ActionError("action is not a homomorphism H -> Aut(N)")

    nn, hn = n_group.order, h_group.order
    n_idx = np.arange(nn * hn) // hn
    h_idx = np.arange(nn * hn) % hn
    acted = perms[h_idx[:, None], n_idx[None, :]]
    new_n = n_group.table[n_idx[:, None], acted]
    new_h = h_group.table[h_idx[:, None], h_idx[None, :]]
    table = new_n * hn + new_h
    labels = [(n_group.label(a), h_group.label(b)) for a in range(nn) for b in range(hn)]
    return build_from_table(table, labels=labels, name=name or f"{n_group.name}:{h_group.name}")


_QUATERNION_UNITS = {
    ('1', '1'): (1, '1'), ('1', 'i'): (1, 'i'), ('1', 'j'): (1, 'j'), ('1', 'k'): (1, 'k'),
    ('i', '1'): (1, 'i'), ('i', 'i'): (-1, '1'), ('i', 'j'): (1, 'k'), ('i', 'k'): (-1, 'j'),
    ('j', '1'): (1, 'j'), ('j', 'i'): (-1, 'k'), ('j', 'j'): (-1, '1'), ('j', 'k'): (1, 'i'),
    ('k', '1'): (1, 'k'), ('k', 'i'): (1, 'j'), ('k', 'j'): (-1, 'i'), ('k', 'k'): (-1, '1'),
}


def _quaternion_label(sign, unit):
    return unit if sign > 0 else f"-{unit}"


def quaternion8():
    """The quaternion group {±1, ±i, ±j, ±k}."""
    elements = [_quaternion_label(s, u) for u in '1ijk' for s in (1, -1)]

    def parse(label):
        return (-1, label[1]) if label.startswith('-') else (1, label)

    def mult(a, b):
        (sa, ua), (sb, ub) = parse(a), parse(b)
        sign, unit = _QUATERNION_UNITS[(ua, ub)]
        return _quaternion_label(sa * sb * sign, unit)

    return from_function(elements, mult, name='Q8')


def dihedral(n):
    """Dihedral group of order 2n, elements r^i s^e labelled (i, e)."""
    elements = [(i, e) for e in (0, 1) for i in range(n)]

    def mult(a, b):
        (i, e), (j, f) = a, b
        return ((i + (j if e == 0 else -j)) % n, (e + f) % 2)

    return from_function(elements, mult, name=f"D{2 * n}")


def symmetric_group(n):
    """Symmetric group on n points, labels are permutation array forms."""
    perms = list(SymmetricGroup(n).generate()) if n > 1 else []
    if not perms:
        return build_from_table([[0]], labels=[tuple(range(max(n, 1)))], name=f"S{n}")
    perms.sort(key=lambda p: p.array_form)
    elements = [tuple(p.array_form) for p in perms]
    # compose as maps: (a*b)(x) = a(b(x))
    return from_function(elements, lambda a, b: tuple(a[x] for x in b), name=f"S{n}")


# ---------------------------------------------------------------------------
# Subgroups
# ---------------------------------------------------------------------------

def _handle(group, mask):
    members = tuple(int(i) for i in np.flatnonzero(mask))
    conj = group.conjugation_table
    normal = bool(mask[conj[:, list(members)]].all())
    return SubgroupHandle(group, members, normal)


def generated_subgroup(group, seeds):
    """Subgroup generated by the given element indices (or GroupElements)."""
    seeds = [s.index if isinstance(s, GroupElement) else int(s) for s in seeds]
    return _handle(group, _closure_mask(group.table, group.identity, seeds))


def cyclic_subgroups(group):
    seen = {}
    for x in range(group.order):
        handle = generated_subgroup(group, [x])
        seen.setdefault(handle.members, handle)
    return sorted(seen.values(), key=lambda s: (s.order, s.members))


def all_subgroups(group):
    """
    Every subgroup, by closure from the cyclic subgroups: joins are formed one
    cyclic generator at a time and deduplicated by member set.
    """
    cyclics = cyclic_subgroups(group)
    cyclic_gens = [min(c.members, key=lambda x: (-int(group.element_orders[x]), x)) for c in cyclics]
    known = {c.members: (c, [g]) for c, g in zip(cyclics, cyclic_gens)}
    queue = list(known.keys())
    while queue:
        members = queue.pop()
        handle, gens = known[members]
        for c, g in zip(cyclics, cyclic_gens):
            if handle.mask[g]:
                continue
            joined = generated_subgroup(group, gens + [g])
            if joined.members not in known:
                known[joined.members] = (joined, gens + [g])
                queue.append(joined.members)
    result = sorted((h for h, _ in known.values()), key=lambda s: (s.order, s.members))
    logger.debug(f"{group.name}: {len(result)} subgroups")
    return result


def normal_subgroups(group):
    return [s for s in group.subgroups if s.is_normal]


def maximal_subgroups(group):
    proper = [s for s in group.subgroups if s.order < group.order]
    return [s for s in proper
            if not any(t.order > s.order and s.is_subgroup_of(t) for t in proper)]


def center(group):
    t = group.table
    return _handle(group, (t == t.T).all(axis=0))


def derived_subgroup(group):
    return generated_subgroup(group, np.unique(commutator_table(group)))


def quotient(group, normal, name=None):
    """The quotient group on cosets, coset representatives are the least members."""
    if not normal.is_normal:
        raise NotNormalError(f"subgroup of order {normal.order} is not normal in {group.name}")
    members = np.asarray(normal.members)
    cosets = group.table[:, members].min(axis=1)
    reps = np.unique(cosets)
    position = np.full(group.order, -1, dtype=np.int64)
    position[reps] = np.arange(len(reps))
    coset_of = position[cosets]
    table = coset_of[group.table[np.ix_(reps, reps)]]
    labels = [group.label(r) for r in reps]
    return build_from_table(table, labels=labels, name=name or f"{group.name}/N{normal.order}")


def is_cyclic(group):
    return bool((group.element_orders == group.order).any())


def is_cyclic_extension_of_abelian(group):
    """
    Whether some abelian normal subgroup N has cyclic quotient.

    Returns:
        (True, N) for the largest such N (ties broken by member indices),
        or (False, None)
    """
    candidates = sorted(normal_subgroups(group), key=lambda s: (-s.order, s.members))
    for n_sub in candidates:
        if n_sub.is_abelian and is_cyclic(quotient(group, n_sub)):
            return True, n_sub
    return False, None


# ---------------------------------------------------------------------------
# Homomorphism search: automorphisms and isomorphism
# ---------------------------------------------------------------------------

def is_automorphism(group, perm):
    perm = np.asarray(perm, dtype=np.int64)
    if perm.shape != (group.order,) or len(np.unique(perm)) != group.order:
        return False
    if perm.min() < 0 or perm.max() >= group.order:
        return False
    return bool(np.array_equal(perm[group.table], group.table[np.ix_(perm, perm)]))


def _spanning_levels(group, gens):
    """BFS levels over right multiplication by ``gens``: (nodes, parents, gen positions)."""
    seen = np.zeros(group.order, dtype=bool)
    seen[group.identity] = True
    frontier = np.array([group.identity], dtype=np.int64)
    gens = np.asarray(gens, dtype=np.int64)
    levels = []
    while frontier.size:
        products = group.table[np.ix_(frontier, gens)]
        parents = np.repeat(frontier, len(gens))
        which = np.tile(np.arange(len(gens)), len(frontier))
        flat = products.ravel()
        nodes, first = np.unique(flat, return_index=True)
        keep = ~seen[nodes]
        nodes, first = nodes[keep], first[keep]
        seen[nodes] = True
        if nodes.size:
            levels.append((nodes, parents[first], which[first]))
        frontier = nodes
    if not seen.all():
        raise ValueError(f"elements {list(gens)} do not generate {group.name}")
    return levels


def _extend(source, target, levels, gens, images):
    f = np.empty(source.order, dtype=np.int64)
    f[source.identity] = target.identity
    images = np.asarray(images, dtype=np.int64)
    for nodes, parents, which in levels:
        f[nodes] = target.table[f[parents], images[which]]
    if len(np.unique(f)) != source.order:
        return None
    for s, image in zip(gens, images):
        if not np.array_equal(f[source.table[:, s]], target.table[f, image]):
            return None
    return f


def _isomorphism_search(source, target, first_only):
    if source.order != target.order:
        return []
    gens = list(source.generators)
    levels = _spanning_levels(source, gens)
    so, to = source.element_orders, target.element_orders
    candidates = [np.flatnonzero(to == so[g]) for g in gens]
    pair_orders = {(i, j): int(so[source.table[gens[i], gens[j]]])
                   for i in range(len(gens)) for j in range(len(gens)) if i != j}
    found = []

    def backtrack(chosen):
        if len(chosen) == len(gens):
            f = _extend(source, target, levels, gens, chosen)
            if f is not None:
                found.append(f)
            return
        i = len(chosen)
        for c in candidates[i]:
            c = int(c)
            if any(int(to[target.table[chosen[j], c]]) != pair_orders[(j, i)]
                   or int(to[target.table[c, chosen[j]]]) != pair_orders[(i, j)]
                   for j in range(i)):
                continue
            chosen.append(c)
            backtrack(chosen)
            chosen.pop()
            if first_only and found:
                return

    backtrack([])
    return found


def automorphisms(group):
    """All automorphisms of ``group`` as permutation arrays, in a fixed order."""
    perms = _isomorphism_search(group, group, first_only=False)
    perms.sort(key=lambda p: tuple(p.tolist()))
    return perms


def find_isomorphism(g, h):
    """An isomorphism g -> h as an index array, or None."""
    if fingerprint(g) != fingerprint(h):
        return None
    found = _isomorphism_search(g, h, first_only=True)
    return found[0] if found else None


def isomorphic(g, h):
    return find_isomorphism(g, h) is not None


# ---------------------------------------------------------------------------
# Invariants and text format
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class GroupFingerprint:
    """Isomorphism invariants used for identification and dedup buckets."""

    order: int
    order_profile: tuple
    center_order: int
    derived_order: int
    abelianization_order: int
    abelian: bool

    def as_dict(self):
        return {
            'order': self.order,
            'order_profile': [list(p) for p in self.order_profile],
            'center_order': self.center_order,
            'derived_order': self.derived_order,
            'abelianization_order': self.abelianization_order,
            'abelian': self.abelian,
        }


def fingerprint(group):
    orders, counts = np.unique(group.element_orders, return_counts=True)
    derived = derived_subgroup(group).order
    return GroupFingerprint(
        order=group.order,
        order_profile=tuple((int(o), int(c)) for o, c in zip(orders, counts)),
        center_order=center(group).order,
        derived_order=derived,
        abelianization_order=group.order // derived,
        abelian=group.is_abelian,
    )


def to_text(group):
    """Canonical text form: ``order n``, n table rows, then ``label i <string>`` lines."""
    lines = [f"order {group.order}"]
    lines.extend(' '.join(str(int(v)) for v in row) for row in group.table)
    if group.labels is not None:
        lines.extend(f"label {i} {group.label(i)}" for i in range(group.order))
    return '\n'.join(lines) + '\n'


def from_text(text, name='group'):
    lines = text.splitlines()
    if not lines or not lines[0].startswith('order '):
        raise ValueError("group text must start with 'order n'")
    n = int(lines[0].split()[1])
    rows = [[int(v) for v in line.split()] for line in lines[1:n + 1]]
    labels = None
    label_lines = [line for line in lines[n + 1:] if line]
    if label_lines:
        labels = [None] * n
        for line in label_lines:
            _, index, value = line.split(' ', 2)
            labels[int(index)] = value
    return build_from_table(rows, labels=labels, name=name)
