"""
Named constructions: the Heisenberg-type groups G(k, g), the homomorphism psi
onto them, SL2(Z3), S4, the torus example, and the order calculators.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import sympy
from django.conf import settings

from sieve.exceptions import BudgetExceededError, DegenerateFamilyError, IndivisibleModulusError
from sieve.groups import (
    abelian_group,
    build_from_table,
    commutator_table,
    from_function,
    quaternion8,
    semidirect_product,
    symmetric_group,
)
from sieve.surface import (
    evaluate_letters,
    generator_names,
    homology_class,
    intersection,
    make_hom,
    parse_word,
    random_word,
    separating_curve,
)

logger = logging.getLogger(__name__)

FORMULA_NOTES = [
    "The published product law prints the third coordinate of the order-32 group as b2+a2'; "
    "it is implemented as a2+a2', the only reading consistent with the commutator identity "
    "and the (Z2)^4 abelianization.",
    "The published definition of psi_2 lists psi_2(x2) twice; the second line is read as "
    "psi_2(y2) = (0,0,0,1;0).",
    "The published covering degree prints as 2^{2g'} 2g; it is read as 2^{2g'} * 2^{2g}, "
    "the only reading that gives the printed final exponent.",
]

SIGN_NOTE = (
    "With this product law [x_i, y_i] maps to the central element with epsilon = -1, so c_m "
    "maps to epsilon = -m mod k; it is nonzero for 1 <= m < k. The relator itself maps to "
    "epsilon = -g mod k, so psi is a homomorphism only when k divides g; for other (k, g) the "
    "intersection identity is checked on the free group."
)


@dataclass(frozen=True)
class HeisenbergSpec:
    """Coordinates (a1, b1, ..., ag, bg; eps) over Z_k."""

    k: int
    g: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("modulus k must be at least 2")
        if self.g < 1:
            raise ValueError("genus g must be at least 1")

    @property
    def width(self):
        return 2 * self.g + 1

    @property
    def order(self):
        return self.k ** self.width

    @property
    def name(self):
        return 'G2' if (self.k, self.g) == (2, 2) else f"G(k={self.k},g={self.g})"


class HeisenbergArithmetic:
    """
    Label-arithmetic mode: products computed from the formula on coordinate
    arrays of shape (..., 2g+1), with no stored table.
    """

    def __init__(self, spec):
        self.spec = spec
        self.k = spec.k
        self.g = spec.g

    def _split(self, u):
        return u[..., 0:2 * self.g:2], u[..., 1:2 * self.g:2]

    def mul(self, u, v):
        u, v = np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64)
        out = (u + v) % self.k
        _, b = self._split(u)
        a2, _ = self._split(v)
        out[..., -1] = (u[..., -1] + v[..., -1] + (b * a2).sum(axis=-1)) % self.k
        return out

    def inv(self, u):
        u = np.asarray(u, dtype=np.int64)
        out = (-u) % self.k
        a, b = self._split(u)
        out[..., -1] = (-u[..., -1] + (b * a).sum(axis=-1)) % self.k
        return out

    def commutator(self, u, v):
        return self.mul(self.mul(u, v), self.mul(self.inv(u), self.inv(v)))

    def pairing(self, u, v):
        a, b = self._split(np.asarray(u, dtype=np.int64))
        a2, b2 = self._split(np.asarray(v, dtype=np.int64))
        return (b * a2 - b2 * a).sum(axis=-1) % self.k

    def identity(self, shape=()):
        return np.zeros(shape + (self.spec.width,), dtype=np.int64)

    def central(self, eps):
        eps = np.asarray(eps, dtype=np.int64)
        out = self.identity(eps.shape)
        out[..., -1] = eps % self.k
        return out

    def unit(self, j):
        out = self.identity()
        out[j] = 1
        return out

    def generator_images(self):
        """psi: x_i to the a_i unit vector, y_i to the b_i unit vector."""
        return [self.unit(j) for j in range(2 * self.g)]

    def evaluate(self, w):
        images = self.generator_images()
        result = self.identity()
        for a in w.letters:
            image = images[a - 1] if a > 0 else self.inv(images[-a - 1])
            result = self.mul(result, image)
        return result

    def encode(self, u):
        u = np.asarray(u, dtype=np.int64)
        codes = np.zeros(u.shape[:-1], dtype=np.int64)
        for column in range(self.spec.width):
            codes = codes * self.k + u[..., column]
        return codes

    def decode(self, codes):
        codes = np.asarray(codes, dtype=np.int64).copy()
        out = np.empty(codes.shape + (self.spec.width,), dtype=np.int64)
        for column in range(self.spec.width - 1, -1, -1):
            out[..., column] = codes % self.k
            codes //= self.k
        return out

    def random_elements(self, rng, count):
        return rng.integers(0, self.k, size=(count, self.spec.width))


def build_heisenberg(k, g, table_budget=None):
    """
    G(k, g) as a validated table group with tuple labels; element index is the
    base-k number with eps as the least significant digit.
    """
    spec = HeisenbergSpec(k, g)
    if g < 2:
        raise DegenerateFamilyError(f"G(k, g) needs g >= 2, got g={g}")
    budget = table_budget if table_budget is not None else settings.SIEVE_TABLE_BUDGET
    if spec.order > budget:
        raise BudgetExceededError(
            f"{spec.name} has order {spec.order}, above the table budget {budget}; "
            "use label-arithmetic mode", requested=spec.order, budget=budget)
    arithmetic = HeisenbergArithmetic(spec)
    n = spec.order
    elements = arithmetic.decode(np.arange(n))
    table = np.empty((n, n), dtype=np.int64)
    rows = max(1, (1 << 20) // n)
    for start in range(0, n, rows):
        block = elements[start:start + rows, None, :]
        table[start:start + rows] = arithmetic.encode(arithmetic.mul(block, elements[None, :, :]))
    labels = [tuple(int(c) for c in row) for row in elements]
    logger.debug(f"built {spec.name} table of order {n}")
    return build_from_table(table, labels=labels, name=spec.name)


def build_psi(k, g, group=None):
    """
    The generator-to-basis-vector hom onto G(k, g).

    Raises IndivisibleModulusError unless k divides g.
    """
    if g % k:
        raise IndivisibleModulusError(
            f"psi sends the genus-{g} relator to eps = {-g % k} in G({k}, {g}); it needs k to divide g")
    group = group if group is not None else build_heisenberg(k, g)
    arithmetic = HeisenbergArithmetic(HeisenbergSpec(k, g))
    images = [int(arithmetic.encode(u)) for u in arithmetic.generator_images()]
    return make_hom(group, images)


@dataclass
class IdentityCheck:
    """Outcome of an exhaustive or sampled identity check."""

    passed: bool
    pairs_checked: int
    exhaustive: bool
    counterexample: dict = None
    details: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            'passed': self.passed,
            'pairs_checked': self.pairs_checked,
            'exhaustive': self.exhaustive,
            'counterexample': self.counterexample,
            **self.details,
        }


def commutator_identity_check(spec, group=None, exhaustive_limit=None, samples=None, seed=None):
    """
    Check that [u, v] is the central element whose eps is the pairing of the
    tuple parts of u and v.

    Exhaustive over all pairs when the order is within ``exhaustive_limit``
    (against the table when ``group`` is given), otherwise on seeded random pairs
    in label-arithmetic mode.
    """
    limit = exhaustive_limit if exhaustive_limit is not None else settings.SIEVE_EXHAUSTIVE_PAIR_LIMIT
    arithmetic = HeisenbergArithmetic(spec)
    n = spec.order

    if n <= limit:
        elements = arithmetic.decode(np.arange(n))
        table = commutator_table(group) if group is not None else None
        rows = max(1, (1 << 18) // n)
        for start in range(0, n, rows):
            block = elements[start:start + rows]
            if table is not None:
                observed = table[start:start + rows]
            else:
                observed = arithmetic.encode(arithmetic.commutator(block[:, None, :], elements[None, :, :]))
            # the index of (0, ..., 0; eps) is eps
            expected = arithmetic.pairing(block[:, None, :], elements[None, :, :])
            bad = np.argwhere(observed != expected)
            if bad.size:
                i, j = (int(x) for x in bad[0])
                return IdentityCheck(False, n * n, True, {
                    'u': block[i].tolist(), 'v': elements[j].tolist(),
                    'observed': int(observed[i, j]), 'expected_eps': int(expected[i, j])})
        return IdentityCheck(True, n * n, True)

    count = samples if samples is not None else settings.SIEVE_RANDOM_PAIRS
    rng = np.random.default_rng(seed if seed is not None else settings.SIEVE_RANDOM_SEED)
    counterexample = None
    checked = 0
    batch = 1 << 16
    while checked < count and counterexample is None:
        size = min(batch, count - checked)
        u, v = arithmetic.random_elements(rng, size), arithmetic.random_elements(rng, size)
        observed = arithmetic.commutator(u, v)
        expected = arithmetic.central(arithmetic.pairing(u, v))
        bad = np.flatnonzero((observed != expected).any(axis=1))
        if bad.size:
            i = int(bad[0])
            counterexample = {'u': u[i].tolist(), 'v': v[i].tolist(),
                              'observed': observed[i].tolist(), 'expected': expected[i].tolist()}
        checked += size
    return IdentityCheck(counterexample is None, checked, False, counterexample)


def intersection_formula_check(k, g, samples=1000, max_length=12, seed=None, group=None):
    """
    For word pairs (w1, w2): [psi(w1), psi(w2)] is central with eps equal to
    the mod-k intersection of their homology classes. Pairs are every
    generator pair plus ``samples`` random pairs of length at most ``max_length``.
    """
    spec = HeisenbergSpec(k, g)
    arithmetic = HeisenbergArithmetic(spec)
    if group is None and spec.order <= settings.SIEVE_TABLE_BUDGET and g >= 2:
        group = build_heisenberg(k, g)
    images = [int(arithmetic.encode(u)) for u in arithmetic.generator_images()]

    def image(w):
        if group is not None:
            return arithmetic.decode(evaluate_letters(w.letters, images, group))
        return arithmetic.evaluate(w)

    names = generator_names(g)
    pairs = [(parse_word(a, g), parse_word(b, g)) for a in names for b in names]
    rng = np.random.default_rng(seed if seed is not None else settings.SIEVE_RANDOM_SEED)
    for _ in range(samples):
        lengths = rng.integers(0, max_length + 1, size=2)
        pairs.append((random_word(g, lengths[0], rng), random_word(g, lengths[1], rng)))

    for w1, w2 in pairs:
        observed = arithmetic.commutator(image(w1), image(w2))
        eps = intersection(homology_class(w1, k), homology_class(w2, k))
        if not np.array_equal(observed, arithmetic.central(eps)):
            return IdentityCheck(False, len(pairs), False, {
                'w1': w1.render(), 'w2': w2.render(),
                'observed': observed.tolist(), 'expected_eps': int(eps)})
    return IdentityCheck(True, len(pairs), False)


def separating_curve_images(k, g):
    """eps of psi(c_m) for m = 1..g-1, computed in label-arithmetic mode."""
    arithmetic = HeisenbergArithmetic(HeisenbergSpec(k, g))
    values = {}
    for m in range(1, g):
        value = arithmetic.evaluate(separating_curve(g, m))
        values[m] = {'tuple_part_zero': not value[:-1].any(), 'eps': int(value[-1])}
    return values


_T_ACTION = {'1': '1', '-1': '-1', 'i': 'j', '-i': '-j', 'j': 'k', '-j': '-k', 'k': 'i', '-k': '-i'}


def build_sl2z3():
    """Q8 x| Z3 with t i t^-1 = j, t j t^-1 = k, t k t^-1 = i."""
    q8 = quaternion8()
    z3 = abelian_group([3])
    t = np.array([q8.index_of(_T_ACTION[q8.label(x)]) for x in range(q8.order)])
    action = [np.arange(q8.order), t, t[t]]
    group = semidirect_product(q8, z3, action, name='SL2Z3')
    logger.debug(f"built {group.name}")
    return group


_KLEIN_PERMUTATIONS = [(0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0)]


def _compose(a, b):
    return tuple(a[x] for x in b)


def build_s4():
    """The Klein four subgroup of S4 extended by S3 acting by conjugation."""
    v4 = from_function(_KLEIN_PERMUTATIONS, _compose, name='V4')
    s3 = symmetric_group(3)

    def conjugation(h):
        sigma = s3.labels[h]
        s = (0,) + tuple(1 + p for p in sigma)
        s_inv = tuple(s.index(x) for x in range(4))
        return [v4.index_of(_compose(_compose(s, v), s_inv)) for v in _KLEIN_PERMUTATIONS]

    return semidirect_product(v4, s3, conjugation, name='S4')


def build_klein4():
    return abelian_group([2, 2])


def build_torus_projection(group=None):
    """The mod-2 homology map of the torus onto Z2 x Z2: x1 -> (1,0), y1 -> (0,1)."""
    group = group if group is not None else build_klein4()
    return make_hom(group, [group.index_of((1, 0)), group.index_of((0, 1))])


# ---------------------------------------------------------------------------
# Order calculators
# ---------------------------------------------------------------------------

# Orders are materialized as integers only up to this many bits
_MATERIALIZE_BITS = 64


@dataclass(frozen=True)
class CassonReport:
    g: int
    g_prime: int
    exponent: int

    @property
    def order_symbolic(self):
        return sympy.Pow(2, self.exponent, evaluate=False)

    @property
    def order(self):
        return 2 ** self.exponent if self.exponent <= _MATERIALIZE_BITS else None

    def as_dict(self):
        return {
            'g': self.g,
            'g_prime': self.g_prime,
            'base': 2,
            'exponent': self.exponent,
            'order_symbolic': str(self.order_symbolic),
            'order': self.order,
        }


def casson_report(g):
    """Genus of the intermediate cover and exponent of the deck group order."""
    if g < 1:
        raise ValueError("genus must be at least 1")
    g_prime = ((g - 1) * 2 ** (2 * g + 1) + 2) // 2
    exponent = 2 * g_prime + 2 * g
    return CassonReport(g, g_prime, exponent)


@dataclass(frozen=True)
class FamilyOrder:
    g: int
    base: int
    exponent: int

    @property
    def order(self):
        value = self.base ** self.exponent
        return value if value.bit_length() <= _MATERIALIZE_BITS else None

    def as_dict(self):
        return {'g': self.g, 'base': self.base, 'exponent': self.exponent,
                'order_symbolic': str(sympy.Pow(self.base, self.exponent, evaluate=False)),
                'order': self.order}


def gk_order(g):
    if g < 2:
        raise DegenerateFamilyError(
            f"the family degenerates at genus {g}; the torus case uses Z2 x Z2")
    return FamilyOrder(g, g, 2 * g + 1)


def gk_below_casson(g):
    """Whether g^(2g+1) < 2^E for the Casson exponent E, without materializing 2^E."""
    return (g ** (2 * g + 1)).bit_length() <= casson_report(g).exponent
