"""
Surface group words, mod-k homology, Dehn twists and their action on homomorphisms.

Generators are ordered x1, y1, x2, y2, ... and a letter is a signed integer:
generator j (0-based) is ``j + 1``, its inverse ``-(j + 1)``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from django.conf import settings
from sympy.combinatorics.free_groups import free_group

from sieve.exceptions import (
    ModulusMismatchError,
    RelatorError,
    TwistValidationError,
)
from sieve.groups import GroupElement

logger = logging.getLogger(__name__)


def generator_names(genus):
    return [f"{axis}{i}" for i in range(1, genus + 1) for axis in ('x', 'y')]


@lru_cache(maxsize=None)
def surface_free_group(genus):
    """The free group on x1, y1, ..., xg, yg and its generators."""
    group, *gens = free_group(', '.join(generator_names(genus)))
    return group, tuple(gens)


@dataclass(frozen=True)
class SurfaceWord:
    """A freely reduced word in the surface generators."""

    genus: int
    letters: tuple

    def __post_init__(self):
        if self.genus < 1:
            raise ValueError("genus must be at least 1")
        if any(abs(a) > 2 * self.genus or a == 0 for a in self.letters):
            raise ValueError(f"letters {self.letters} use generators outside genus {self.genus}")

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other):
        return reduce(SurfaceWord(max(self.genus, other.genus), self.letters + other.letters))

    def inverse(self):
        return SurfaceWord(self.genus, tuple(-a for a in reversed(self.letters)))

    @property
    def free_element(self):
        """The word as a sympy free group element."""
        _, gens = surface_free_group(self.genus)
        element = gens[0] ** 0
        for a in self.letters:
            element = element * (gens[abs(a) - 1] if a > 0 else gens[abs(a) - 1] ** -1)
        return element

    def render(self):
        names = generator_names(self.genus)
        return ' '.join(names[a - 1] if a > 0 else names[-a - 1].upper() for a in self.letters)

    def __str__(self):
        return self.render() or '1'


def word(genus, letters):
    """Build and freely reduce a word from signed letters."""
    return reduce(SurfaceWord(genus, tuple(int(a) for a in letters)))


def reduce(w):
    """Freely reduced representative, computed through sympy's free group."""
    group, _ = surface_free_group(w.genus)
    element = w.free_element if w.letters else group.identity
    position = {sym: i for i, sym in enumerate(group.symbols)}
    letters = []
    for symbol, exponent in element.array_form:
        letter = position[symbol] + 1
        letters.extend([letter if exponent > 0 else -letter] * abs(exponent))
    return SurfaceWord(w.genus, tuple(letters))


def parse_word(text, genus):
    """Parse ``"x1 y1 X1 Y1"``; capital letters are inverses."""
    names = {name: i + 1 for i, name in enumerate(generator_names(genus))}
    letters = []
    for token in text.split():
        if token in ('1', 'e'):
            continue
        lower = token.lower()
        if lower not in names:
            raise ValueError(f"unknown generator {token!r} for genus {genus}")
        letters.append(names[lower] if token == lower else -names[lower])
    return word(genus, letters)


def generator(genus, name):
    return parse_word(name, genus)


def commutator_word(u, v):
    return u * v * u.inverse() * v.inverse()


def relator(genus):
    """``[x1, y1][x2, y2]...[xg, yg]``."""
    return separating_curve(genus, genus)


def separating_curve(genus, m):
    """``c_m``: the product of the first m handle commutators."""
    letters = []
    for i in range(m):
        x, y = 2 * i + 1, 2 * i + 2
        letters.extend((x, y, -x, -y))
    return SurfaceWord(genus, tuple(letters))


def cyclic_reduction(w):
    letters = reduce(w).letters
    start, end = 0, len(letters)
    while end - start > 1 and letters[start] == -letters[end - 1]:
        start += 1
        end -= 1
    return SurfaceWord(w.genus, letters[start:end])


def is_conjugate(u, v):
    """Whether u and v are conjugate in the free group (cyclic rotations of cyclic reductions)."""
    a, b = cyclic_reduction(u).letters, cyclic_reduction(v).letters
    if len(a) != len(b):
        return False
    if not a:
        return True
    return any(a[r:] + a[:r] == b for r in range(len(a)))


# ---------------------------------------------------------------------------
# Homology
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomologyClassZk:
    """Coordinates (a1, b1, ..., ag, bg) reduced mod ``modulus``."""

    modulus: int
    coordinates: tuple

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        object.__setattr__(self, 'coordinates', tuple(int(c) % self.modulus for c in self.coordinates))

    @property
    def genus(self):
        return len(self.coordinates) // 2

    def __add__(self, other):
        _check_compatible(self, other)
        return HomologyClassZk(self.modulus, tuple(a + b for a, b in zip(self.coordinates, other.coordinates)))

    def __neg__(self):
        return HomologyClassZk(self.modulus, tuple(-a for a in self.coordinates))

    def is_zero(self):
        return not any(self.coordinates)


def _check_compatible(u, v):
    if u.modulus != v.modulus or len(u.coordinates) != len(v.coordinates):
        raise ModulusMismatchError(
            f"cannot pair classes mod {u.modulus} (genus {u.genus}) and mod {v.modulus} (genus {v.genus})")


def homology_class(w, k):
    """Exponent sums of each generator, mod k."""
    sums = [0] * (2 * w.genus)
    for a in w.letters:
        sums[abs(a) - 1] += 1 if a > 0 else -1
    return HomologyClassZk(k, tuple(sums))


def intersection(u, v):
    """``sum_i (b_i a_i' - b_i' a_i) mod k``."""
    _check_compatible(u, v)
    total = 0
    for i in range(u.genus):
        a, b = u.coordinates[2 * i], u.coordinates[2 * i + 1]
        a2, b2 = v.coordinates[2 * i], v.coordinates[2 * i + 1]
        total += b * a2 - b2 * a
    return total % u.modulus


def intersection_form(genus):
    """Matrix J with ``intersection(u, v) = u^T J v``."""
    form = np.zeros((2 * genus, 2 * genus), dtype=np.int64)
    for i in range(genus):
        form[2 * i + 1, 2 * i] = 1
        form[2 * i, 2 * i + 1] = -1
    return form


# ---------------------------------------------------------------------------
# Twists
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwistAutomorphism:
    """
    A surface group automorphism given by the image word of every generator.

    Build through :func:`make_twist`, which validates the relator condition and
    the symplectic action on mod-2 homology.
    """

    genus: int
    name: str
    inverse_name: str
    images: tuple

    def homology_matrix(self, k=2):
        """Column j is the class of the image of generator j."""
        columns = [homology_class(image, k).coordinates for image in self.images]
        return np.array(columns, dtype=np.int64).T % k


def substitute(w, images):
    """Replace each generator of ``w`` by its image word."""
    genus = images[0].genus
    letters = []
    for a in w.letters:
        image = images[abs(a) - 1]
        letters.extend(image.letters if a > 0 else image.inverse().letters)
    return reduce(SurfaceWord(genus, tuple(letters)))


def make_twist(genus, name, inverse_name, images):
    images = tuple(reduce(image) for image in images)
    if len(images) != 2 * genus:
        raise TwistValidationError(f"{name}: expected {2 * genus} images, got {len(images)}")
    twist = TwistAutomorphism(genus, name, inverse_name, images)
    rel = relator(genus)
    if not is_conjugate(substitute(rel, images), rel):
        raise TwistValidationError(f"{name} does not map the relator to a conjugate of itself")
    matrix = twist.homology_matrix(2)
    form = intersection_form(genus)
    if not np.array_equal((matrix.T @ form @ matrix) % 2, form % 2):
        raise TwistValidationError(f"{name} does not act symplectically on mod-2 homology")
    return twist


def _identity_images(genus):
    return [SurfaceWord(genus, (j + 1,)) for j in range(2 * genus)]


def _x(i):
    return 2 * i - 1


def _y(i):
    return 2 * i


def _handle_twists(genus, i):
    """Twists about the a_i and b_i curves and their inverses."""
    x, y = _x(i), _y(i)
    twists = {}
    for name, inverse_name, slot, letters in (
        (f"Ta{i}", f"Ta{i}^-1", y, (y, x)),
        (f"Ta{i}^-1", f"Ta{i}", y, (y, -x)),
        (f"Tb{i}", f"Tb{i}^-1", x, (x, y)),
        (f"Tb{i}^-1", f"Tb{i}", x, (x, -y)),
    ):
        images = _identity_images(genus)
        images[slot - 1] = SurfaceWord(genus, letters)
        twists[name] = make_twist(genus, name, inverse_name, images)
    return twists


def _connector_twists(genus, i):
    """Twists about the curve ``Y_i x_{i+1}`` joining handles i and i+1."""
    c = (-_y(i), _x(i + 1))
    c_inv = (-_x(i + 1), _y(i))
    twists = {}
    for name, inverse_name, left, right in (
        (f"Tc{i}", f"Tc{i}^-1", c, c_inv),
        (f"Tc{i}^-1", f"Tc{i}", c_inv, c),
    ):
        images = _identity_images(genus)
        for j in range(1, genus + 1):
            if j == i:
                images[_x(j) - 1] = SurfaceWord(genus, left + (_x(j),))
            elif j == i + 1:
                images[_y(j) - 1] = SurfaceWord(genus, left + (_y(j),))
            else:
                images[_x(j) - 1] = SurfaceWord(genus, left + (_x(j),) + right)
                images[_y(j) - 1] = SurfaceWord(genus, left + (_y(j),) + right)
        twists[name] = make_twist(genus, name, inverse_name, images)
    return twists


def twist_chain_order(genus):
    """Names of the generating twists in application order (inverses follow)."""
    if genus == 1:
        return ['Tb1', 'Ta1']
    names = ['Tb1', 'Ta1', 'Tc1', 'Ta2', 'Tb2']
    for i in range(2, genus):
        names.extend([f"Tc{i}", f"Ta{i + 1}"])
    return names


def twist_set_complete(genus):
    """Genus 1 and 2 twist sets generate the mapping class group; higher genus is assumed."""
    return genus <= 2


@lru_cache(maxsize=None)
def twist_generators(genus):
    """
    Twist generators followed by their inverses, in a fixed order.

    Genus 1 uses the two torus twists, genus 2 the five chain twists, and
    higher genus the Humphries family (all a_i, all connectors, b_1 and b_2).
    """
    available = {}
    for i in range(1, genus + 1):
        available.update(_handle_twists(genus, i))
    for i in range(1, genus):
        available.update(_connector_twists(genus, i))
    names = twist_chain_order(genus)
    twists = [available[n] for n in names] + [available[available[n].inverse_name] for n in names]
    if not twist_set_complete(genus):
        logger.debug(f"genus {genus}: Humphries twist set assumed complete")
    return tuple(twists)


def matrix_group_order(matrices, modulus):
    """Order of the group generated by the given invertible matrices mod ``modulus``."""
    matrices = [np.asarray(m, dtype=np.int64) % modulus for m in matrices]
    size = matrices[0].shape[0]
    identity = np.eye(size, dtype=np.int64)
    seen = {identity.tobytes()}
    frontier = [identity]
    while frontier:
        new = []
        for current in frontier:
            for m in matrices:
                product = (current @ m) % modulus
                key = product.tobytes()
                if key not in seen:
                    seen.add(key)
                    new.append(product)
        frontier = new
    return len(seen)


# ---------------------------------------------------------------------------
# Homomorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SurfaceHom:
    """Images of x1, y1, ..., xg, yg as element indices of ``target``."""

    genus: int
    target: object
    images: tuple

    def __eq__(self, other):
        if not isinstance(other, SurfaceHom):
            return NotImplemented
        return self.target is other.target and self.images == other.images

    def __hash__(self):
        return hash((id(self.target), self.images))

    def image(self, j):
        return GroupElement(self.target, self.images[j])

    @property
    def elements(self):
        return [self.image(j) for j in range(2 * self.genus)]

    def render(self):
        return ' '.join(f"{name}={index}" for name, index in zip(generator_names(self.genus), self.images))

    def as_dict(self):
        return {name: int(index) for name, index in zip(generator_names(self.genus), self.images)}


def make_hom(target, images):
    """Validate the relator on ``images`` and return the hom."""
    images = tuple(int(i.index if isinstance(i, GroupElement) else i) for i in images)
    if not images or len(images) % 2:
        raise RelatorError(f"need an even, non-zero number of images, got {len(images)}")
    genus = len(images) // 2
    value = evaluate_letters(relator(genus).letters, images, target)
    if value != target.identity:
        raise RelatorError(f"images {images} send the relator to {target.label(value)}")
    return SurfaceHom(genus, target, images)


def evaluate_letters(letters, images, group):
    table, inverse = group.table, group.inverse
    result = group.identity
    for a in letters:
        g = images[a - 1] if a > 0 else inverse[images[-a - 1]]
        result = table[result, g]
    return int(result)


def evaluate(w, hom):
    """Image of ``w`` under generator substitution."""
    if w.genus > hom.genus:
        raise ValueError(f"word of genus {w.genus} evaluated on a genus {hom.genus} hom")
    return GroupElement(hom.target, evaluate_letters(w.letters, hom.images, hom.target))


def evaluate_batch(w, images, group):
    """Evaluate ``w`` on each row of an (m, 2g) image array."""
    images = np.asarray(images, dtype=np.int64)
    result = np.full(images.shape[0], group.identity, dtype=np.int64)
    for a in w.letters:
        column = images[:, a - 1] if a > 0 else group.inverse[images[:, -a - 1]]
        result = group.table[result, column]
    return result


def apply(t, hom):
    """Precompose ``hom`` with the twist: generator j goes to hom(t.images[j])."""
    if t.genus != hom.genus:
        raise ValueError(f"twist of genus {t.genus} applied to a genus {hom.genus} hom")
    images = tuple(evaluate_letters(image.letters, hom.images, hom.target) for image in t.images)
    if settings.DEBUG:
        value = evaluate_letters(relator(hom.genus).letters, images, hom.target)
        if value != hom.target.identity:
            raise RelatorError(f"{t.name} broke the relator on {hom.render()}")
    return SurfaceHom(hom.genus, hom.target, images)


def apply_batch(t, images, group):
    return np.stack([evaluate_batch(image, images, group) for image in t.images], axis=1)


def canonical_images(images, group):
    """Least image tuple over simultaneous conjugation, by narrowing column by column."""
    if group.is_abelian:
        return tuple(int(i) for i in images)
    candidates = group.conjugation_table[:, list(images)]
    for column in range(candidates.shape[1]):
        values = candidates[:, column]
        candidates = candidates[values == values.min()]
        if candidates.shape[0] == 1:
            break
    return tuple(int(i) for i in candidates[0])


def canonical_class(hom):
    return SurfaceHom(hom.genus, hom.target, canonical_images(hom.images, hom.target))


def state_codes_fit(group, genus):
    return group.order ** (2 * genus) < 2 ** 62


def encode_states(images, order):
    """Mixed-radix code of each image row, most significant column first."""
    images = np.asarray(images, dtype=np.int64)
    codes = np.zeros(images.shape[0], dtype=np.int64)
    for column in range(images.shape[1]):
        codes = codes * order + images[:, column]
    return codes


def decode_states(codes, order, width):
    codes = np.asarray(codes, dtype=np.int64).copy()
    images = np.empty((codes.shape[0], width), dtype=np.int64)
    for column in range(width - 1, -1, -1):
        images[:, column] = codes % order
        codes //= order
    return images


def canonical_codes(images, group, chunk=1 << 22):
    """Canonical class code of every row; requires :func:`state_codes_fit`."""
    images = np.asarray(images, dtype=np.int64)
    if group.is_abelian:
        return encode_states(images, group.order)
    conj = group.conjugation_table
    n = group.order
    rows = max(1, chunk // (n * images.shape[1]))
    out = np.empty(images.shape[0], dtype=np.int64)
    for start in range(0, images.shape[0], rows):
        block = images[start:start + rows]
        conjugated = conj[:, block]
        codes = np.zeros(conjugated.shape[:2], dtype=np.int64)
        for column in range(block.shape[1]):
            codes = codes * n + conjugated[:, :, column]
        out[start:start + rows] = codes.min(axis=0)
    return out


def random_word(genus, length, rng):
    """A random freely reduced word of at most ``length`` letters."""
    letters = rng.choice(np.concatenate([np.arange(1, 2 * genus + 1), -np.arange(1, 2 * genus + 1)]),
                         size=int(length))
    return word(genus, letters.tolist())
