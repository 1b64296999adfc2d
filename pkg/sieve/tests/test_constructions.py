import numpy as np
from django.test import SimpleTestCase, tag
from hypothesis import given, settings, strategies as st

from sieve.constructions import (
    HeisenbergArithmetic,
    HeisenbergSpec,
    build_heisenberg,
    build_klein4,
    build_psi,
    build_sl2z3,
    build_torus_projection,
    casson_report,
    commutator_identity_check,
    gk_below_casson,
    gk_order,
    intersection_formula_check,
    separating_curve_images,
)
from sieve.exceptions import BudgetExceededError, DegenerateFamilyError, IndivisibleModulusError
from sieve.groups import center, derived_subgroup, is_cyclic_extension_of_abelian
from sieve.surface import evaluate, homology_class, parse_word, random_word, relator, separating_curve


class HeisenbergGroupTest(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.g2 = build_heisenberg(2, 2)

    def test_g2_shape(self):
        self.assertEqual(self.g2.order, 32)
        self.assertEqual(self.g2.name, 'G2')
        self.assertEqual(self.g2.identity, 0)
        self.assertEqual(self.g2.label(0), (0, 0, 0, 0, 0))
        self.assertEqual(self.g2.label(1), (0, 0, 0, 0, 1))

    def test_center_is_derived_subgroup(self):
        z = center(self.g2)
        self.assertEqual(z.members, derived_subgroup(self.g2).members)
        self.assertEqual(z.members, (0, 1))

    def test_inverse_formula(self):
        group = build_heisenberg(3, 2)
        for x in range(group.order):
            a1, b1, a2, b2, eps = group.label(x)
            expected = ((-a1) % 3, (-b1) % 3, (-a2) % 3, (-b2) % 3, (-eps + b1 * a1 + b2 * a2) % 3)
            self.assertEqual(group.label(int(group.inverse[x])), expected)

    def test_g3_over_z3_order(self):
        group = build_heisenberg(3, 3)
        self.assertEqual(group.order, 2187)
        self.assertEqual(center(group).order, 3)

    def test_table_budget(self):
        with self.assertRaises(BudgetExceededError) as ctx:
            build_heisenberg(2, 3, table_budget=100)
        self.assertEqual(ctx.exception.requested, 128)

    def test_degenerate_genus(self):
        with self.assertRaises(DegenerateFamilyError):
            build_heisenberg(2, 1)


class PsiTest(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.g2 = build_heisenberg(2, 2)
        cls.psi = build_psi(2, 2, cls.g2)

    def test_generator_images(self):
        labels = [self.g2.label(i) for i in self.psi.images]
        self.assertEqual(labels, [
            (1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 1, 0)])

    def test_relator_dies(self):
        self.assertTrue(evaluate(relator(2), self.psi).is_identity)

    def test_separating_curve_maps_to_central_generator(self):
        value = evaluate(separating_curve(2, 1), self.psi)
        self.assertEqual(value.label, (0, 0, 0, 0, 1))

    def test_x_commutator_value(self):
        value = evaluate(parse_word('x1 x2 X1 X2', 2), self.psi)
        self.assertTrue(value.is_identity)

    def test_psi_needs_k_dividing_g(self):
        with self.assertRaises(IndivisibleModulusError):
            build_psi(3, 2, build_heisenberg(3, 2))
        with self.assertRaises(DegenerateFamilyError):
            build_psi(2, 3)
        self.assertTrue(evaluate(relator(3), build_psi(3, 3)).is_identity)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=0, max_value=20), st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_psi_abelianizes_to_homology(self, length, seed):
        w = random_word(2, length, np.random.default_rng(seed))
        label = evaluate(w, self.psi).label
        self.assertEqual(label[:4], homology_class(w, 2).coordinates)


class IdentityCheckTest(SimpleTestCase):

    def test_g2_exhaustive(self):
        check = commutator_identity_check(HeisenbergSpec(2, 2), build_heisenberg(2, 2))
        self.assertTrue(check.passed)
        self.assertTrue(check.exhaustive)
        self.assertEqual(check.pairs_checked, 1024)

    def test_small_family_members_exhaustive(self):
        for k, g in ((3, 2), (2, 3)):
            spec = HeisenbergSpec(k, g)
            check = commutator_identity_check(spec, build_heisenberg(k, g))
            self.assertTrue(check.passed, (k, g))
            self.assertEqual(check.pairs_checked, spec.order ** 2)

    def test_arithmetic_mode_without_table(self):
        check = commutator_identity_check(HeisenbergSpec(3, 2), exhaustive_limit=10 ** 6)
        self.assertTrue(check.passed)
        self.assertTrue(check.exhaustive)

    def test_sampled_mode(self):
        check = commutator_identity_check(HeisenbergSpec(3, 3), exhaustive_limit=0, samples=200_000, seed=7)
        self.assertTrue(check.passed)
        self.assertFalse(check.exhaustive)
        self.assertEqual(check.pairs_checked, 200_000)

    @tag('slow')
    def test_sampled_mode_full(self):
        check = commutator_identity_check(HeisenbergSpec(3, 3), exhaustive_limit=0, samples=10 ** 6)
        self.assertTrue(check.passed)

    def test_central_pairs_commute(self):
        arithmetic = HeisenbergArithmetic(HeisenbergSpec(5, 3))
        u = arithmetic.central(np.arange(5))
        v = arithmetic.random_elements(np.random.default_rng(3), 5)
        self.assertTrue((arithmetic.commutator(u, v) == 0).all())

    def test_intersection_formula(self):
        for k, g in ((2, 2), (3, 2)):
            check = intersection_formula_check(k, g, samples=300, seed=11)
            self.assertTrue(check.passed, check.counterexample)

    def test_intersection_formula_on_table_when_k_does_not_divide_g(self):
        group = build_heisenberg(3, 2)
        check = intersection_formula_check(3, 2, samples=300, seed=11, group=group)
        self.assertTrue(check.passed, check.counterexample)
        self.assertEqual(check.pairs_checked, 16 + 300)
        with self.settings(SIEVE_TABLE_BUDGET=1):
            arithmetic = intersection_formula_check(3, 2, samples=300, seed=11)
        self.assertEqual(arithmetic.as_dict(), check.as_dict())

    def test_intersection_formula_in_arithmetic_mode(self):
        check = intersection_formula_check(5, 4, samples=200, seed=5)
        self.assertTrue(check.passed, check.counterexample)


class SeparatingCurveTest(SimpleTestCase):

    def test_diagonal_family_members(self):
        for g in range(2, 6):
            values = separating_curve_images(g, g)
            self.assertEqual(sorted(values), list(range(1, g)))
            for m, value in values.items():
                self.assertTrue(value['tuple_part_zero'], (g, m))
                self.assertEqual(value['eps'], g - m, (g, m))

    def test_eps_is_minus_m(self):
        for k, g in ((2, 2), (3, 3), (5, 4), (7, 5)):
            for m, value in separating_curve_images(k, g).items():
                self.assertTrue(value['tuple_part_zero'])
                self.assertEqual(value['eps'], (-m) % k)
                if m < k:
                    self.assertNotEqual(value['eps'], 0)

    def test_table_agrees_with_arithmetic(self):
        group = build_heisenberg(3, 3)
        psi = build_psi(3, 3, group)
        for m in (1, 2):
            self.assertEqual(evaluate(separating_curve(3, m), psi).label, (0, 0, 0, 0, 0, 0, (-m) % 3))


class SmallGroupTest(SimpleTestCase):

    def test_sl2z3(self):
        group = build_sl2z3()
        self.assertEqual(group.order, 24)
        self.assertEqual(int((group.element_orders == 2).sum()), 1)
        self.assertFalse(is_cyclic_extension_of_abelian(group)[0])

    def test_torus_projection(self):
        group = build_klein4()
        hom = build_torus_projection(group)
        self.assertEqual([group.label(i) for i in hom.images], [(1, 0), (0, 1)])
        self.assertEqual(hom.genus, 1)


class OrderCalculatorTest(SimpleTestCase):

    def test_casson_exponents(self):
        self.assertEqual(casson_report(1).exponent, 4)
        self.assertEqual(casson_report(1).g_prime, 1)
        self.assertEqual(casson_report(2).exponent, 38)
        self.assertEqual(casson_report(2).g_prime, 17)
        self.assertEqual(casson_report(3).exponent, 264)

    def test_casson_order_materialization(self):
        self.assertEqual(casson_report(2).order, 2 ** 38)
        self.assertIsNone(casson_report(3).order)
        self.assertEqual(casson_report(3).as_dict()['order_symbolic'], '2**264')

    @settings(max_examples=30, deadline=None)
    @given(st.integers(min_value=1, max_value=64))
    def test_casson_exponent_identity(self, g):
        report = casson_report(g)
        self.assertEqual(report.exponent, 2 * report.g_prime + 2 * g)
        self.assertEqual(2 * report.g_prime - 2, (g - 1) * 2 ** (2 * g + 1))

    def test_family_orders(self):
        self.assertEqual(gk_order(2).order, 32)
        self.assertEqual(gk_order(3).order, 2187)
        self.assertEqual(gk_order(4).exponent, 9)

    def test_family_degenerates_at_genus_one(self):
        with self.assertRaises(DegenerateFamilyError):
            gk_order(1)

    def test_family_beats_casson(self):
        for g in range(2, 11):
            self.assertTrue(gk_below_casson(g), g)
