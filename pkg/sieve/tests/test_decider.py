import numpy as np
from django.test import SimpleTestCase, tag
from hypothesis import HealthCheck, given, settings, strategies as st

from sieve.constructions import build_heisenberg, build_klein4, build_psi, build_torus_projection
from sieve.decider import (
    GEOMETRIC,
    INCONCLUSIVE,
    NONGEOMETRIC,
    abelian_torus_oracle,
    build_orbit_graph,
    canonical_class_count,
    enumerate_homs,
    hom_array,
    is_geometric,
    nielsen_normal_form_check,
    replay_certificate,
    scan_group,
    standard_curves,
    twist_orbit,
)
from sieve.exceptions import BudgetExceededError
from sieve.groups import abelian_group, cyclic, symmetric_group, trivial_group
from sieve.surface import SurfaceHom, apply, apply_batch, canonical_codes, make_hom, twist_generators

ABELIAN_INVARIANTS = [
    [2], [3], [4], [2, 2], [5], [6], [7], [8], [2, 4], [2, 2, 2],
    [9], [3, 3], [10], [11], [12], [2, 6], [13], [14], [15], [16], [2, 8], [4, 4], [2, 2, 4], [2, 2, 2, 2],
]


class EnumerationTest(SimpleTestCase):

    def test_hom_counts(self):
        z2 = cyclic(2)
        self.assertEqual(hom_array(z2, 2).shape[0], 16)
        self.assertEqual(hom_array(z2, 2, surjective_only=True).shape[0], 15)
        self.assertEqual(hom_array(abelian_group([2, 2]), 1).shape[0], 16)
        self.assertEqual(hom_array(symmetric_group(3), 1).shape[0], 18)

    def test_rows_satisfy_relator(self):
        s3 = symmetric_group(3)
        homs = list(enumerate_homs(s3, 2))
        self.assertEqual(len(homs), 486)
        self.assertEqual(len(set(homs)), 486)
        for hom in homs[::11]:
            make_hom(s3, hom.images)

    def test_surjections_onto_s3(self):
        # commuting pairs generate an abelian subgroup, never S3
        self.assertEqual(hom_array(symmetric_group(3), 1, surjective_only=True).shape[0], 0)

    def test_class_counts(self):
        self.assertEqual(canonical_class_count(symmetric_group(3), 1), 8)
        self.assertEqual(canonical_class_count(cyclic(2), 2, surjective_only=True), 15)

    def test_enumeration_budget(self):
        with self.assertRaises(BudgetExceededError) as ctx:
            hom_array(cyclic(8), 3, budget=1000)
        self.assertEqual(ctx.exception.requested, 8 ** 6)


class StandardCurveTest(SimpleTestCase):

    def test_curve_names(self):
        self.assertEqual([name for name, _ in standard_curves(1).curves()], ['x1'])
        self.assertEqual([name for name, _ in standard_curves(2).curves()], ['x1', 'c1'])
        self.assertEqual([name for name, _ in standard_curves(5).curves()], ['x1', 'c1', 'c2'])
        self.assertEqual([name for name, _ in standard_curves(5, all_separating=True).curves()],
                         ['x1', 'c1', 'c2', 'c3', 'c4'])


class SingleDecisionTest(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.g2 = build_heisenberg(2, 2)
        cls.psi = build_psi(2, 2, cls.g2)

    def test_psi_is_nongeometric(self):
        report = is_geometric(self.psi)
        self.assertEqual(report.verdict, NONGEOMETRIC)
        self.assertFalse(report.truncated)
        self.assertIsNone(report.certificate)
        self.assertTrue(report.twist_set_complete)

    def test_psi_orbit_without_inverses(self):
        self.assertEqual(twist_orbit(self.psi, use_inverses=False), twist_orbit(self.psi))

    def test_small_budget_is_inconclusive(self):
        report = is_geometric(self.psi, state_budget=10)
        self.assertEqual(report.verdict, INCONCLUSIVE)
        self.assertTrue(report.truncated)

    def test_depth_limit_is_inconclusive(self):
        report = is_geometric(self.psi, depth_limit=1)
        self.assertEqual(report.verdict, INCONCLUSIVE)
        self.assertEqual(report.depth_limit, 1)

    def test_killed_generator_needs_no_twists(self):
        hom = make_hom(cyclic(2), [0, 1, 1, 0])
        report = is_geometric(hom)
        self.assertEqual(report.verdict, GEOMETRIC)
        self.assertEqual(report.certificate, {'twists': [], 'curve': 'x1'})

    def test_abelian_target_kills_separating_curve(self):
        report = is_geometric(make_hom(cyclic(2), [1, 0, 0, 0]))
        self.assertEqual(report.certificate, {'twists': [], 'curve': 'c1'})

    def test_certificate_replays(self):
        hom = make_hom(cyclic(2), [1, 0])
        report = is_geometric(hom)
        self.assertEqual(report.verdict, GEOMETRIC)
        self.assertTrue(report.certificate['twists'])
        self.assertTrue(replay_certificate(hom, report.certificate))

    def test_higher_genus_geometric_is_trusted(self):
        hom = make_hom(cyclic(2), [1, 0, 0, 0, 0, 0])
        report = is_geometric(hom)
        self.assertEqual(report.verdict, GEOMETRIC)
        self.assertFalse(report.twist_set_complete)
        self.assertTrue(replay_certificate(hom, report.certificate))

    def test_high_genus_defaults_bound_the_search(self):
        psi = build_psi(3, 3)
        with self.settings(SIEVE_HIGH_GENUS_STATE_BUDGET=50, SIEVE_HIGH_GENUS_DEPTH=20):
            report = is_geometric(psi)
        self.assertEqual(report.verdict, INCONCLUSIVE)
        self.assertTrue(report.truncated)
        self.assertEqual(report.states_explored, 50)
        self.assertEqual(report.depth_limit, 20)
        self.assertFalse(report.twist_set_complete)

    def test_torus_projection_is_nongeometric(self):
        report = is_geometric(build_torus_projection())
        self.assertEqual(report.verdict, NONGEOMETRIC)


class InvarianceTest(SimpleTestCase):
    """Every genus-2 hom to S3 and to Z2 x Z2, every conjugator, every twist."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.cases = []
        for group in (symmetric_group(3), build_klein4()):
            graph = build_orbit_graph(group, 2, surjective_only=False)
            result = scan_group(group, 2, surjective_only=False)
            cls.cases.append((group, graph, result, hom_array(group, 2)))

    def verdicts(self, graph, result, rows):
        codes = canonical_codes(rows, graph.group)
        positions = np.searchsorted(graph.states, codes)
        self.assertTrue(np.array_equal(graph.states[positions], codes))
        return [result.orbits[label].verdict for label in graph.labels[positions]]

    def test_hom_counts(self):
        self.assertEqual([rows.shape[0] for _, _, _, rows in self.cases], [486, 256])
        for _, graph, result, rows in self.cases:
            self.assertEqual(result.hom_count, rows.shape[0])
            self.assertEqual(sum(o.size for o in result.orbits), graph.states.size)

    def test_conjugation_invariance(self):
        for group, graph, result, rows in self.cases:
            base = self.verdicts(graph, result, rows)
            conj = group.conjugation_table
            for g in range(group.order):
                self.assertEqual(self.verdicts(graph, result, conj[g][rows]), base, (group.name, g))

    def test_twist_invariance(self):
        for group, graph, result, rows in self.cases:
            base = self.verdicts(graph, result, rows)
            for t in twist_generators(2):
                self.assertEqual(self.verdicts(graph, result, apply_batch(t, rows, group)), base,
                                 (group.name, t.name))

    def test_twisted_class_depends_only_on_class(self):
        for group, _, _, rows in self.cases:
            conj = group.conjugation_table
            for t in twist_generators(2):
                expected = canonical_codes(apply_batch(t, rows, group), group)
                for g in range(1, group.order):
                    moved = canonical_codes(apply_batch(t, conj[g][rows], group), group)
                    self.assertTrue(np.array_equal(moved, expected), (group.name, t.name, g))

    def test_orbit_verdicts_match_single_decisions(self):
        for group, _, result, _ in self.cases:
            for orbit in result.orbits:
                hom = SurfaceHom(2, group, orbit.representative)
                self.assertEqual(is_geometric(hom).verdict, orbit.verdict, (group.name, orbit.representative))

    def test_non_surjective_homs_are_geometric(self):
        # proper subgroups of both groups are abelian, so c1 dies
        for group, graph, result, rows in self.cases:
            surjective = set(canonical_codes(hom_array(group, 2, surjective_only=True), group).tolist())
            codes = canonical_codes(rows, group).tolist()
            verdicts = self.verdicts(graph, result, rows)
            proper = [v for code, v in zip(codes, verdicts) if code not in surjective]
            self.assertTrue(proper)
            self.assertEqual(set(proper), {GEOMETRIC}, group.name)

    @settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(st.integers(min_value=0, max_value=485), st.integers(min_value=0, max_value=9))
    def test_twist_invariance_of_single_decisions(self, row, twist):
        s3, _, _, rows = self.cases[0]
        hom = SurfaceHom(2, s3, tuple(int(i) for i in rows[row]))
        moved = apply(twist_generators(2)[twist], hom)
        self.assertEqual(is_geometric(moved).verdict, is_geometric(hom).verdict)


class ScanTest(SimpleTestCase):

    def test_klein_four_torus(self):
        result = scan_group(build_klein4(), 1)
        self.assertTrue(result.exists_nongeometric)
        self.assertEqual(is_geometric(result.witness).verdict, NONGEOMETRIC)

    def test_cyclic_torus_scans(self):
        for n in (2, 3, 4):
            result = scan_group(cyclic(n), 1)
            self.assertFalse(result.exists_nongeometric, n)
            self.assertEqual(result.verdict_counts[NONGEOMETRIC], 0)

    def test_trivial_group(self):
        result = scan_group(trivial_group(), 2)
        self.assertFalse(result.exists_nongeometric)
        self.assertEqual(result.hom_count, 1)

    def test_no_surjections(self):
        result = scan_group(symmetric_group(3), 1)
        self.assertFalse(result.exists_nongeometric)
        self.assertEqual(result.orbit_count, 0)

    def test_orbit_sizes_cover_classes(self):
        result = scan_group(symmetric_group(3), 2)
        self.assertEqual(sum(o.size for o in result.orbits), result.class_count)
        self.assertFalse(result.exists_nongeometric)
        for orbit in result.orbits:
            self.assertEqual(orbit.verdict, GEOMETRIC)
            self.assertIsNotNone(orbit.certificate)

    def test_g2_scan_finds_psi(self):
        g2 = build_heisenberg(2, 2)
        result = scan_group(g2, 2)
        self.assertTrue(result.exists_nongeometric)
        self.assertEqual(is_geometric(result.witness).verdict, NONGEOMETRIC)
        self.assertGreater(result.verdict_counts[GEOMETRIC], 0)

    def test_scan_agrees_with_single_decisions(self):
        group = abelian_group([2, 2])
        result = scan_group(group, 2)
        for orbit in result.orbits:
            hom = SurfaceHom(2, group, orbit.representative)
            self.assertEqual(is_geometric(hom).verdict, orbit.verdict)

    def test_state_budget(self):
        with self.assertRaises(BudgetExceededError):
            scan_group(symmetric_group(3), 2, state_budget=2)


class NielsenTest(SimpleTestCase):

    def test_small_cyclic_groups(self):
        for n in (1, 2, 3, 6):
            check = nielsen_normal_form_check(cyclic(n))
            self.assertTrue(check.passed, n)
            self.assertIsNone(check.failing)

    @tag('slow')
    def test_cyclic_groups_through_twelve(self):
        for n in range(1, 13):
            self.assertTrue(nielsen_normal_form_check(cyclic(n)).passed, n)

    def test_rejects_non_cyclic_group(self):
        with self.assertRaises(ValueError):
            nielsen_normal_form_check(abelian_group([2, 2]))


class AbelianOracleTest(SimpleTestCase):

    def check_group(self, group):
        for a in range(group.order):
            for b in range(group.order):
                hom = make_hom(group, [a, b])
                self.assertEqual(is_geometric(hom).verdict, abelian_torus_oracle(group, a, b),
                                 (group.name, a, b))

    def test_small_abelian_groups(self):
        for invariants in ABELIAN_INVARIANTS[:10]:
            self.check_group(abelian_group(invariants))

    @tag('slow')
    def test_abelian_groups_through_sixteen(self):
        for invariants in ABELIAN_INVARIANTS[10:]:
            self.check_group(abelian_group(invariants))

    def test_klein_four_pair(self):
        group = build_klein4()
        a, b = group.index_of((1, 0)), group.index_of((0, 1))
        self.assertEqual(abelian_torus_oracle(group, a, b), NONGEOMETRIC)
        self.assertEqual(abelian_torus_oracle(group, a, a), GEOMETRIC)
