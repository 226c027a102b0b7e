import time
import unittest

import numpy as np

from qwalk_equivalence.coins import TransitionField, catalog, catalog_names
from qwalk_equivalence.core import (BasisLabel, LabelError, ParameterError, WaveFunction, compare_operators_on_window,
                                    evolve, norm_sq, verify_unitary_on_window)
from qwalk_equivalence.grids import PositionKey
from qwalk_equivalence.lattices.line1d import LINE
from qwalk_equivalence.lattices.square import (SQUARE, SQUARE_DIAGONAL, coin_to_sigma_pair, coined_step_square,
                                               diagonal_step_square, map_e_square, rotate_site, sigma_pair_to_coin)

SQUARE_MATRICES = catalog_names(4)


class TestSquareLabels(unittest.TestCase):

    def test_sigma_pair_mapping(self):
        self.assertEqual(sigma_pair_to_coin(1, 1), 1)
        self.assertEqual(sigma_pair_to_coin(-1, 1), 2)
        self.assertEqual(sigma_pair_to_coin(-1, -1), 3)
        self.assertEqual(sigma_pair_to_coin(1, -1), 4)
        for sigma in (1, 2, 3, 4):
            self.assertEqual(sigma_pair_to_coin(*coin_to_sigma_pair(sigma)), sigma)
        with self.assertRaises(LabelError):
            sigma_pair_to_coin(0, 1)

    def test_standard_initial_state(self):
        coined = SQUARE.standard_initial_state("coined")
        self.assertEqual(coined.to_dict(), {
            BasisLabel.coined_square(0, 0, 1): 0.5,
            BasisLabel.coined_square(0, 0, 2): 0.5,
            BasisLabel.coined_square(0, 0, 3): 0.5j,
            BasisLabel.coined_square(0, 0, 4): 0.5j,
        })
        self.assertEqual(map_e_square(SQUARE.standard_initial_state("scattering")).to_dict(), coined.to_dict())

    def test_bond_partner(self):
        self.assertEqual(SQUARE.bond_partner(BasisLabel.scattering_square(1, 1, 0, 0)),
                         BasisLabel.scattering_square(-1, -1, -1, 0))
        self.assertEqual(SQUARE_DIAGONAL.bond_partner(BasisLabel.scattering_square(-1, 1, 0, 0)),
                         BasisLabel.scattering_square(1, -1, 1, -1))
        for lattice in (SQUARE, SQUARE_DIAGONAL):
            for label in lattice.window("scattering", 3):
                self.assertEqual(lattice.bond_partner(lattice.bond_partner(label)), label)

    def test_bond_coordinates(self):
        cases = [
            (SQUARE, BasisLabel.scattering_square(1, 1, 1, 0), PositionKey("bond", 1, 0, "horizontal"), (0.5, 0.0)),
            (SQUARE, BasisLabel.scattering_square(-1, -1, 0, 0), PositionKey("bond", 1, 0, "horizontal"), (0.5, 0.0)),
            (SQUARE, BasisLabel.scattering_square(-1, 1, 0, 1), PositionKey("bond", 0, 1, "vertical"), (0.0, 0.5)),
            (SQUARE, BasisLabel.scattering_square(1, -1, 0, 0), PositionKey("bond", 0, 1, "vertical"), (0.0, 0.5)),
            (SQUARE_DIAGONAL, BasisLabel.scattering_square(1, 1, 1, 1), PositionKey("bond", 1, 1, "ascending"),
             (0.5, 0.5)),
            (SQUARE_DIAGONAL, BasisLabel.scattering_square(-1, 1, -1, 1), PositionKey("bond", -1, 1, "descending"),
             (-0.5, 0.5)),
        ]
        for lattice, label, key, point in cases:
            with self.subTest(label=label):
                grid = lattice.bond_probabilities(WaveFunction.basis(label))
                self.assertEqual(dict(iter(grid)), {key: 1.0})
                self.assertEqual(grid.coordinates[key], point)


class TestSquareSteps(unittest.TestCase):

    def test_natural_shift(self):
        step = coined_step_square(TransitionField(catalog("grover4")))
        targets = {label["sigma"]: label.site for label, _ in step.apply_basis(BasisLabel.coined_square(0, 0, 1))}
        self.assertEqual(targets, {1: (1, 0), 2: (0, 1), 3: (-1, 0), 4: (0, -1)})

    def test_diagonal_shift(self):
        step = diagonal_step_square(TransitionField(catalog("grover4")))
        targets = {label["sigma"]: label.site for label, _ in step.apply_basis(BasisLabel.coined_square(0, 0, 1))}
        self.assertEqual(targets, {1: (1, 1), 2: (-1, 1), 3: (-1, -1), 4: (1, -1)})

    def test_grover_amplitudes(self):
        step = coined_step_square(TransitionField(catalog("grover4")))
        amplitudes = {label["sigma"]: amplitude for label, amplitude in
                      step.apply_basis(BasisLabel.coined_square(0, 0, 2))}
        self.assertAlmostEqual(amplitudes[2], -0.5, delta=1e-15)
        for sigma in (1, 3, 4):
            self.assertAlmostEqual(amplitudes[sigma], 0.5, delta=1e-15)

    def test_unitarity(self):
        for lattice in (SQUARE, SQUARE_DIAGONAL):
            for name in SQUARE_MATRICES:
                field = TransitionField(catalog(name))
                for model in ("coined", "scattering"):
                    with self.subTest(lattice=lattice.name, matrix=name, model=model):
                        report = verify_unitary_on_window(lattice.step(model, field), lattice.window(model, 5), 1e-12)
                        self.assertTrue(report.passed, msg=report.as_lines())

    def test_equivalence(self):
        field = TransitionField(catalog("dft4"), {(1, 0): catalog("grover4"), (-2, 3): catalog("h2h2")})
        for lattice in (SQUARE, SQUARE_DIAGONAL):
            report = compare_operators_on_window(lattice.scattering_step(field), lattice.conjugated_coined_step(field),
                                                 lattice.window("scattering", 4), 1e-12)
            self.assertTrue(report.passed, msg=report.as_lines())

    def test_large_window_unitarity(self):
        window = SQUARE.window("scattering", 25)
        report = verify_unitary_on_window(SQUARE.scattering_step(TransitionField(catalog("grover4"))), window, 1e-12)
        self.assertTrue(report.passed, msg=report.as_lines())
        self.assertEqual(report.window_size, 51 ** 2 * 4)

    def test_unknown_model(self):
        with self.assertRaises(ParameterError):
            SQUARE.kind("quantum")


class TestSquareRuns(unittest.TestCase):

    def test_cross_recovery(self):
        for lattice in (SQUARE, SQUARE_DIAGONAL):
            for name in SQUARE_MATRICES:
                with self.subTest(lattice=lattice.name, matrix=name):
                    field = TransitionField(catalog(name))
                    coined = evolve(lattice.standard_initial_state("coined"), lattice.coined_step(field), 20)
                    scattering = evolve(lattice.standard_initial_state("scattering"), lattice.scattering_step(field), 20)
                    self.assertLess(lattice.site_probabilities(coined).max_difference(
                        lattice.cross_site_probabilities(scattering)), 1e-10)
                    self.assertLess(lattice.bond_probabilities(scattering).max_difference(
                        lattice.cross_bond_probabilities(coined)), 1e-10)

    def test_native_grids_differ(self):
        field = TransitionField(catalog("hadamard4"))
        coined = evolve(SQUARE.standard_initial_state("coined"), SQUARE.coined_step(field), 3)
        scattering = evolve(SQUARE.standard_initial_state("scattering"), SQUARE.scattering_step(field), 3)
        self.assertGreater(SQUARE.native_grid(coined).max_difference(SQUARE.native_grid(scattering)), 1e-6)

    def test_grover_run(self):
        psi = evolve(SQUARE.standard_initial_state("coined"), SQUARE.coined_step(TransitionField(catalog("grover4"))), 20)
        grid = SQUARE.site_probabilities(psi)
        self.assertLess(abs(norm_sq(psi) - 1.0), 1e-10)
        self.assertAlmostEqual(grid.total, 1.0, delta=1e-10)
        self.assertLessEqual(len(grid), 41 ** 2)
        self.assertLessEqual(int(np.abs(psi.labels[:, :2]).sum(axis=1).max()), 20)

    def test_long_scattering_run(self):
        field = TransitionField(catalog("grover4"))
        scattering = evolve(SQUARE.standard_initial_state("scattering"), SQUARE.scattering_step(field), 100)
        coined = evolve(SQUARE.standard_initial_state("coined"), SQUARE.coined_step(field), 100)
        bonds = SQUARE.bond_probabilities(scattering)
        self.assertLess(abs(norm_sq(scattering) - 1.0), 1e-10)
        self.assertAlmostEqual(bonds.total, 1.0, delta=1e-10)
        self.assertLess(bonds.max_difference(SQUARE.cross_bond_probabilities(coined)), 1e-10)

    def test_diagonal_light_cone(self):
        steps = 30
        psi = evolve(SQUARE_DIAGONAL.standard_initial_state("coined"),
                     SQUARE_DIAGONAL.coined_step(TransitionField(catalog("dft4"))), steps)
        sites = psi.labels[:, :2]
        self.assertLessEqual(int(np.abs(sites).max()), steps)
        self.assertTrue(np.all((sites - steps) % 2 == 0))
        self.assertLess(abs(norm_sq(psi) - 1.0), 1e-10)

    def test_five_hundred_grover_steps(self):
        started = time.perf_counter()
        psi = evolve(SQUARE.standard_initial_state("coined"), SQUARE.coined_step(TransitionField(catalog("grover4"))),
                     500)
        self.assertLess(time.perf_counter() - started, 60.0)
        self.assertLess(abs(norm_sq(psi) - 1.0), 1e-9)
        self.assertLessEqual(int(np.abs(psi.labels[:, :2]).sum(axis=1).max()), 500)

    def test_decoupled_hadamard(self):
        steps = 12
        square = SQUARE.site_probabilities(evolve(SQUARE.standard_initial_state("coined"),
                                                  SQUARE.coined_step(TransitionField(catalog("h2h2"))), steps))
        start = WaveFunction.from_pairs([(BasisLabel.coined_line(0, 1), 1 / np.sqrt(2)),
                                         (BasisLabel.coined_line(0, -1), 1j / np.sqrt(2))])
        line = LINE.site_probabilities(evolve(start, LINE.coined_step(TransitionField(catalog("hadamard2"))), steps))

        for key, probability in square:
            if key.j != 0 and key.k != 0:
                self.assertLess(probability, 1e-12)
        for j in range(-steps, steps + 1):
            if j == 0:
                self.assertAlmostEqual(square.site(0, 0), line.site(0), delta=1e-12)
                continue
            self.assertAlmostEqual(square.site(j, 0), line.site(j) / 2, delta=1e-12)
            self.assertAlmostEqual(square.site(0, j), line.site(j) / 2, delta=1e-12)

    def test_diagonal_rotation(self):
        field = TransitionField(catalog("grover4"))
        for steps in range(7):
            natural = SQUARE.site_probabilities(evolve(SQUARE.standard_initial_state("coined"),
                                                       SQUARE.coined_step(field), steps))
            diagonal = SQUARE_DIAGONAL.site_probabilities(evolve(SQUARE_DIAGONAL.standard_initial_state("coined"),
                                                                 SQUARE_DIAGONAL.coined_step(field), steps))
            self.assertEqual(len(natural), len(diagonal))
            for key, probability in natural:
                self.assertAlmostEqual(diagonal.site(*rotate_site(key.j, key.k)), probability, delta=1e-12)


if __name__ == "__main__":
    unittest.main()
