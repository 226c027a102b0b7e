import unittest

import numpy as np

from qwalk_equivalence.coins import TransitionField, catalog
from qwalk_equivalence.core import (BasisLabel, WaveFunction, compare_operators_on_window, evolve, norm_sq,
                                    probability_of, verify_unitary_on_window)
from qwalk_equivalence.grids import PositionKey
from qwalk_equivalence.lattices.line1d import (LINE, CoinParams1D, ScatterParams1D, coined_step_1d,
                                               cross_projector_1d, field_1d, general_coin, map_e_1d,
                                               map_e_dagger_1d, projector_1d, scattering_matrix_1d,
                                               scattering_step_1d)


def random_field(rng: np.random.Generator, overrides: int = 0) -> TransitionField:
    draw = lambda: general_coin(CoinParams1D(*rng.uniform(0, 2 * np.pi, size=4)))
    return field_1d(draw(), {int(j): draw() for j in rng.choice(np.arange(-4, 5), size=overrides, replace=False)})


class TestLineMaps(unittest.TestCase):

    def test_e_swaps_fields(self):
        psi = WaveFunction.from_pairs([(BasisLabel.scattering_line(1, 2), 0.6), (BasisLabel.scattering_line(-1, -3), 0.8j)])
        mapped = map_e_1d(psi)
        self.assertEqual(mapped.to_dict(), {BasisLabel.coined_line(2, 1): 0.6, BasisLabel.coined_line(-3, -1): 0.8j})
        self.assertEqual(map_e_dagger_1d(mapped).to_dict(), psi.to_dict())

    def test_projectors(self):
        self.assertEqual(projector_1d("coined", 2), [BasisLabel.coined_line(2, -1), BasisLabel.coined_line(2, 1)])
        self.assertEqual(projector_1d("scattering", 2),
                         sorted([BasisLabel.scattering_line(1, 2), BasisLabel.scattering_line(-1, 1)]))

    def test_cross_projectors(self):
        self.assertEqual(cross_projector_1d("scattering", 2),
                         sorted([BasisLabel.scattering_line(1, 2), BasisLabel.scattering_line(-1, 2)]))
        self.assertEqual(cross_projector_1d("coined", 2),
                         sorted([BasisLabel.coined_line(2, 1), BasisLabel.coined_line(1, -1)]))

    def test_bond_partner(self):
        self.assertEqual(LINE.bond_partner(BasisLabel.scattering_line(1, 0)), BasisLabel.scattering_line(-1, -1))
        for label in LINE.window("scattering", 4):
            self.assertEqual(LINE.bond_partner(LINE.bond_partner(label)), label)


class TestLineWalks(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(11)
        self.hadamard = TransitionField(catalog("hadamard2"))
        self.start = WaveFunction.basis(BasisLabel.coined_line(0, 1))

    def test_unitarity(self):
        fields = [self.hadamard, random_field(self.rng), random_field(self.rng, overrides=3),
                  TransitionField(scattering_matrix_1d(ScatterParams1D(0.3, 0.1, 0.7, -1.2)))]
        for field in fields:
            for model in ("coined", "scattering"):
                report = verify_unitary_on_window(LINE.step(model, field), LINE.window(model, 5), 1e-12)
                self.assertTrue(report.passed, msg=report.as_lines())

    def test_equivalence(self):
        for field in (self.hadamard, random_field(self.rng, overrides=4)):
            report = compare_operators_on_window(scattering_step_1d(field), LINE.conjugated_coined_step(field),
                                                 LINE.window("scattering", 6), 1e-12)
            self.assertTrue(report.passed, msg=report.as_lines())

    def test_cross_recovery(self):
        field = random_field(self.rng, overrides=3)
        coined = evolve(self.start, coined_step_1d(field), 20)
        scattering = evolve(map_e_dagger_1d(self.start), scattering_step_1d(field), 20)

        self.assertLess(LINE.site_probabilities(coined).max_difference(LINE.cross_site_probabilities(scattering)),
                        1e-12)
        self.assertLess(LINE.bond_probabilities(scattering).max_difference(LINE.cross_bond_probabilities(coined)),
                        1e-12)
        for j in range(-20, 21):
            self.assertAlmostEqual(probability_of(coined, projector_1d("coined", j)),
                                   probability_of(scattering, cross_projector_1d("scattering", j)), delta=1e-12)

    def test_native_distributions_differ(self):
        coined = evolve(self.start, coined_step_1d(self.hadamard), 3)
        scattering = evolve(map_e_dagger_1d(self.start), scattering_step_1d(self.hadamard), 3)
        sites, bonds = LINE.site_probabilities(coined), LINE.bond_probabilities(scattering)

        expected_sites = {-3: 1 / 8, -1: 1 / 8, 1: 5 / 8, 3: 1 / 8}
        expected_bonds = {-2: 1 / 8, -1: 1 / 8, 1: 1 / 2, 2: 1 / 8, 3: 1 / 8}
        for j in range(-4, 5):
            self.assertAlmostEqual(sites.site(j), expected_sites.get(j, 0.0), delta=1e-15)
            self.assertAlmostEqual(bonds[PositionKey("bond", j, 0, "horizontal")], expected_bonds.get(j, 0.0),
                                   delta=1e-15)
        self.assertGreater(max(abs(sites.site(j) - bonds[PositionKey("bond", j, 0, "horizontal")])
                               for j in range(-4, 5)), 1e-6)

    def test_bond_coordinates(self):
        grid = LINE.bond_probabilities(WaveFunction.basis(BasisLabel.scattering_line(-1, 4)))
        key = PositionKey("bond", 5, 0, "horizontal")
        self.assertEqual(grid[key], 1.0)
        self.assertEqual(grid.coordinates[key], (4.5, 0.0))

    def test_light_cone_and_norm(self):
        psi = evolve(self.start, coined_step_1d(random_field(self.rng, overrides=2)), 100)
        self.assertLess(abs(norm_sq(psi) - 1.0), 1e-10)
        self.assertLessEqual(int(np.abs(psi.labels[:, 0]).max()), 100)

    def test_symmetric_start(self):
        start = WaveFunction.from_pairs([(BasisLabel.coined_line(0, 1), 1 / np.sqrt(2)),
                                         (BasisLabel.coined_line(0, -1), 1j / np.sqrt(2))])
        grid = LINE.site_probabilities(evolve(start, coined_step_1d(self.hadamard), 20))
        for j in range(1, 21):
            self.assertAlmostEqual(grid.site(j), grid.site(-j), delta=1e-12)
        self.assertAlmostEqual(grid.total, 1.0, delta=1e-12)

    def test_half_reflecting_site(self):
        step = scattering_step_1d(field_1d(scattering_matrix_1d(ScatterParams1D(rho=0.5))))
        psi = evolve(WaveFunction.basis(BasisLabel.scattering_line(1, 0)), step, 1)
        self.assertEqual(len(psi), 2)
        self.assertAlmostEqual(psi.amplitude(BasisLabel.scattering_line(1, 1)), 1 / np.sqrt(2), delta=1e-15)
        self.assertAlmostEqual(psi.amplitude(BasisLabel.scattering_line(-1, -1)), 1 / np.sqrt(2), delta=1e-15)

    def test_mirror_at_origin(self):
        field = field_1d(scattering_matrix_1d(ScatterParams1D(rho=0.0)),
                         {0: scattering_matrix_1d(ScatterParams1D(rho=1.0))})
        step = scattering_step_1d(field)
        psi = evolve(WaveFunction.basis(BasisLabel.scattering_line(1, 0)), step, 1)
        self.assertEqual(list(psi.to_dict()), [BasisLabel.scattering_line(-1, -1)])
        self.assertAlmostEqual(abs(psi.amplitude(BasisLabel.scattering_line(-1, -1))), 1.0, delta=1e-15)

        passing = evolve(WaveFunction.basis(BasisLabel.scattering_line(1, 1)), step, 3)
        self.assertEqual(list(passing.to_dict()), [BasisLabel.scattering_line(1, 4)])

    def test_single_mixing_site(self):
        field = field_1d(np.eye(2), {0: catalog("hadamard2")})
        psi = evolve(self.start, coined_step_1d(field), 2)
        self.assertEqual(set(psi.to_dict()), {BasisLabel.coined_line(2, 1), BasisLabel.coined_line(-2, -1)})
        self.assertAlmostEqual(norm_sq(psi), 1.0, delta=1e-15)


if __name__ == "__main__":
    unittest.main()
