import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from sieve.constructions import build_heisenberg, build_s4, build_sl2z3
from sieve.exceptions import (
    ActionError,
    CrossGroupError,
    NoIdentityError,
    NotAssociativeError,
    NotClosedError,
    NotNormalError,
)
from sieve.groups import (
    abelian_group,
    all_subgroups,
    automorphisms,
    build_from_table,
    center,
    commutator,
    commutator_table,
    cyclic,
    cyclic_subgroups,
    derived_subgroup,
    dihedral,
    direct_product,
    fingerprint,
    from_text,
    generated_subgroup,
    inv,
    is_cyclic,
    is_cyclic_extension_of_abelian,
    isomorphic,
    maximal_subgroups,
    mul,
    normal_subgroups,
    quaternion8,
    quotient,
    semidirect_product,
    symmetric_group,
    to_text,
)

# A loop of order 5 with identity and two-sided inverses that is not a group
NON_ASSOCIATIVE_LOOP = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


class BuildFromTableTest(SimpleTestCase):

    def test_trivial_group(self):
        group = build_from_table([[0]])
        self.assertEqual(group.order, 1)
        self.assertEqual(group.identity, 0)

    def test_z2(self):
        group = build_from_table([[0, 1], [1, 0]])
        self.assertEqual(group.order, 2)
        self.assertEqual(list(group.inverse), [0, 1])
        self.assertTrue(group.is_abelian)

    def test_repeated_row_entry_is_not_closed(self):
        with self.assertRaises(NotClosedError) as ctx:
            build_from_table([[0, 1], [1, 1]])
        self.assertIn(1, ctx.exception.indices)

    def test_out_of_range_entry(self):
        with self.assertRaises(NotClosedError) as ctx:
            build_from_table([[0, 1], [1, 2]])
        self.assertEqual(ctx.exception.indices, (1, 1))

    def test_latin_square_without_identity(self):
        with self.assertRaises(NoIdentityError):
            build_from_table([[0, 2, 1], [2, 1, 0], [1, 0, 2]])

    def test_non_associative_loop(self):
        with self.assertRaises(NotAssociativeError) as ctx:
            build_from_table(NON_ASSOCIATIVE_LOOP)
        self.assertEqual(len(ctx.exception.indices), 3)
        x, s, y = ctx.exception.indices
        table = np.array(NON_ASSOCIATIVE_LOOP)
        self.assertNotEqual(table[table[x, s], y], table[x, table[s, y]])

    def test_non_square_table(self):
        with self.assertRaises(NotClosedError):
            build_from_table([[0, 1]])

    def test_tables_are_read_only(self):
        group = cyclic(3)
        with self.assertRaises(ValueError):
            group.table[0, 0] = 1


class ElementOpsTest(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.g2 = build_heisenberg(2, 2)

    def element(self, label):
        return self.g2.element(self.g2.index_of(label))

    def test_g2_product(self):
        product = mul(self.element((1, 0, 0, 0, 0)), self.element((0, 1, 0, 0, 0)))
        self.assertEqual(product.label, (1, 1, 0, 0, 0))

    def test_g2_commutator_is_central_generator(self):
        value = commutator(self.element((1, 0, 0, 0, 0)), self.element((0, 1, 0, 0, 0)))
        self.assertEqual(value.label, (0, 0, 0, 0, 1))

    def test_commutator_with_itself_is_identity(self):
        for x in self.g2.elements():
            self.assertTrue(commutator(x, x).is_identity)

    def test_inverse(self):
        for x in self.g2.elements():
            self.assertTrue(mul(x, inv(x)).is_identity)

    def test_mixing_groups_raises(self):
        with self.assertRaises(CrossGroupError):
            mul(cyclic(2).element(1), cyclic(2).element(1))


class ConstructorTest(SimpleTestCase):

    def test_direct_product_of_z2(self):
        group = direct_product(cyclic(2), cyclic(2))
        self.assertEqual(group.order, 4)
        self.assertTrue(group.is_abelian)
        self.assertEqual(int((group.element_orders == 2).sum()), 3)
        self.assertEqual(group.label(3), (1, 1))

    def test_sl2z3_center_contains_minus_one(self):
        group = build_sl2z3()
        z = center(group)
        self.assertEqual(group.order, 24)
        self.assertEqual(z.order, 2)
        self.assertIn(group.index_of(('-1', 0)), z)

    def test_klein_extension_is_s4(self):
        self.assertTrue(isomorphic(build_s4(), symmetric_group(4)))

    def test_quaternion_group(self):
        q8 = quaternion8()
        self.assertEqual(q8.order, 8)
        self.assertEqual(int((q8.element_orders == 4).sum()), 6)
        i, j = q8.element(q8.index_of('i')), q8.element(q8.index_of('j'))
        self.assertEqual(mul(i, j).label, 'k')
        self.assertEqual(mul(j, i).label, '-k')

    def test_action_must_be_a_homomorphism(self):
        z3 = cyclic(3)
        inversion = [0, 2, 1]
        with self.assertRaises(ActionError):
            semidirect_product(z3, z3, [[0, 1, 2], inversion, [0, 1, 2]])

    def test_action_images_must_be_automorphisms(self):
        z3 = cyclic(3)
        with self.assertRaises(ActionError):
            semidirect_product(z3, cyclic(2), [[0, 1, 2], [0, 1, 1]])

    def test_inversion_action_gives_s3(self):
        group = semidirect_product(cyclic(3), cyclic(2), [[0, 1, 2], [0, 2, 1]])
        self.assertTrue(isomorphic(group, symmetric_group(3)))


class SubgroupTest(SimpleTestCase):

    def test_subgroups_of_z4(self):
        orders = [s.order for s in all_subgroups(cyclic(4))]
        self.assertEqual(orders, [1, 2, 4])

    def test_subgroup_counts(self):
        self.assertEqual(len(all_subgroups(symmetric_group(3))), 6)
        self.assertEqual(len(all_subgroups(symmetric_group(4))), 30)
        self.assertEqual(len(all_subgroups(quaternion8())), 6)

    def test_normal_subgroups_of_s4(self):
        orders = sorted(s.order for s in normal_subgroups(symmetric_group(4)))
        self.assertEqual(orders, [1, 4, 12, 24])

    def test_g2_center_and_derived(self):
        g2 = build_heisenberg(2, 2)
        z, d = center(g2), derived_subgroup(g2)
        self.assertEqual(z.order, 2)
        self.assertEqual(z, d)
        self.assertTrue(isomorphic(quotient(g2, z), abelian_group([2, 2, 2, 2])))

    def test_quotient_by_non_normal_subgroup(self):
        s3 = symmetric_group(3)
        non_normal = next(s for s in all_subgroups(s3) if s.order == 2)
        with self.assertRaises(NotNormalError):
            quotient(s3, non_normal)

    def test_quotient_orders(self):
        for group in (symmetric_group(4), dihedral(8), build_sl2z3()):
            for n_sub in normal_subgroups(group):
                self.assertEqual(quotient(group, n_sub).order, group.order // n_sub.order)

    def test_generators_generate(self):
        for group in (symmetric_group(4), dihedral(8), build_heisenberg(2, 2)):
            self.assertEqual(generated_subgroup(group, group.generators).order, group.order)

    def test_maximal_subgroups_of_z6(self):
        self.assertEqual(sorted(s.order for s in maximal_subgroups(cyclic(6))), [2, 3])

    def test_cyclic_subgroups_of_klein_four(self):
        self.assertEqual([s.order for s in cyclic_subgroups(abelian_group([2, 2]))], [1, 2, 2, 2])

    def test_subgroup_as_group(self):
        s4 = symmetric_group(4)
        a4 = next(s for s in normal_subgroups(s4) if s.order == 12)
        self.assertFalse(a4.as_group().is_abelian)


class CyclicExtensionTest(SimpleTestCase):

    def test_abelian_witness_is_whole_group(self):
        group = abelian_group([2, 6])
        ok, witness = is_cyclic_extension_of_abelian(group)
        self.assertTrue(ok)
        self.assertEqual(witness.order, group.order)

    def test_sl2z3_is_not_cea(self):
        self.assertEqual(is_cyclic_extension_of_abelian(build_sl2z3()), (False, None))

    def test_s4_is_not_cea(self):
        self.assertFalse(is_cyclic_extension_of_abelian(build_s4())[0])

    def test_dihedral_16_rotation_witness(self):
        ok, witness = is_cyclic_extension_of_abelian(dihedral(8))
        self.assertTrue(ok)
        self.assertEqual(witness.order, 8)
        self.assertTrue(is_cyclic(witness.as_group()))

    def test_small_non_abelian_groups_are_cea(self):
        for group in (dihedral(4), quaternion8(), direct_product(symmetric_group(3), cyclic(2))):
            ok, witness = is_cyclic_extension_of_abelian(group)
            self.assertTrue(ok)
            self.assertTrue(witness.is_abelian)
            self.assertTrue(is_cyclic(quotient(group, witness)))


class IsomorphismTest(SimpleTestCase):

    def test_z4_is_not_klein_four(self):
        self.assertFalse(isomorphic(cyclic(4), abelian_group([2, 2])))

    def test_chinese_remainder(self):
        self.assertTrue(isomorphic(cyclic(6), direct_product(cyclic(2), cyclic(3))))

    def test_q8_is_not_d8(self):
        self.assertFalse(isomorphic(quaternion8(), dihedral(4)))

    def test_equivalence_relation(self):
        groups = [cyclic(8), abelian_group([2, 4]), abelian_group([2, 2, 2]), dihedral(4), quaternion8(),
                  direct_product(cyclic(4), cyclic(2))]
        relation = [[isomorphic(a, b) for b in groups] for a in groups]
        for i in range(len(groups)):
            self.assertTrue(relation[i][i])
            for j in range(len(groups)):
                self.assertEqual(relation[i][j], relation[j][i])
                for k in range(len(groups)):
                    if relation[i][j] and relation[j][k]:
                        self.assertTrue(relation[i][k])
        self.assertTrue(relation[1][5])

    def test_automorphism_counts(self):
        self.assertEqual(len(automorphisms(abelian_group([2, 2]))), 6)
        self.assertEqual(len(automorphisms(quaternion8())), 24)
        self.assertEqual(len(automorphisms(cyclic(8))), 4)
        self.assertEqual(len(automorphisms(symmetric_group(3))), 6)

    def test_fingerprint_of_g2(self):
        fp = fingerprint(build_heisenberg(2, 2))
        self.assertEqual(fp.center_order, 2)
        self.assertEqual(fp.derived_order, 2)
        self.assertEqual(fp.abelianization_order, 16)
        self.assertFalse(fp.abelian)


class TextFormatTest(SimpleTestCase):

    def test_round_trip_with_labels(self):
        text = to_text(symmetric_group(3))
        self.assertEqual(to_text(from_text(text)), text)

    def test_round_trip_without_labels(self):
        text = to_text(build_from_table([[0, 1], [1, 0]]))
        self.assertEqual(text, "order 2\n0 1\n1 0\n")
        self.assertEqual(to_text(from_text(text)), text)


class GroupPropertiesTest(SimpleTestCase):

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.integers(min_value=2, max_value=5), min_size=1, max_size=3))
    def test_abelian_products_have_trivial_commutators(self, invariants):
        group = abelian_group(invariants)
        self.assertTrue(group.is_abelian)
        self.assertTrue((commutator_table(group) == group.identity).all())

    @settings(max_examples=10, deadline=None)
    @given(st.integers(min_value=3, max_value=8))
    def test_dihedral_commutators_detect_non_abelian(self, n):
        group = dihedral(n)
        self.assertFalse(group.is_abelian)
        self.assertFalse((commutator_table(group) == group.identity).all())

    @settings(max_examples=20, deadline=None)
    @given(st.integers(min_value=1, max_value=24))
    def test_cyclic_groups(self, n):
        group = cyclic(n)
        self.assertTrue(is_cyclic(group))
        self.assertEqual(int(group.element_orders.max()), n)
        self.assertEqual(len(all_subgroups(group)), sum(1 for d in range(1, n + 1) if n % d == 0))
