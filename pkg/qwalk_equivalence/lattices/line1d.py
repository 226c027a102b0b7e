import numpy as np

from numpy import ndarray as ndarr

from qwalk_equivalence.coins import (CoinParams1D, ScatterParams1D, TransitionField, general_coin, scatter_amps,
                                     scattering_matrix_1d)
from qwalk_equivalence.core import BasisLabel, LabelKind, StepOperator, WaveFunction
from qwalk_equivalence.grids import ProbabilityGrid
from qwalk_equivalence.lattices.base import Lattice

__all__ = [
    "CoinParams1D", "ScatterParams1D", "general_coin", "scatter_amps", "scattering_matrix_1d", "field_1d",
    "CoinedLineStep", "ScatteringLineStep", "LineLattice", "LINE", "coined_step_1d", "scattering_step_1d",
    "map_e_1d", "map_e_dagger_1d", "projector_1d", "cross_projector_1d", "site_probabilities_1d",
    "bond_probabilities_1d", "cross_site_probabilities_1d", "cross_bond_probabilities_1d",
]

# Matrix index 0 is |->, index 1 is |+>.
SIGMAS = np.array([-1, 1], dtype=np.int64)


def _position(sigma: ndarr) -> ndarr:
    return (sigma + 1) // 2


def field_1d(default, overrides: dict = None) -> TransitionField:
    return TransitionField(default, overrides, site_width=1)


class CoinedLineStep(StepOperator):
    """|j> x |s>  ->  c_{s s} |j+s> x |s>  +  c_{-s s} |j-s> x |-s>."""

    field: TransitionField

    def __init__(self, field: TransitionField):
        field.require(2, 1)
        self.field = field
        self.domain = LabelKind.COINED_LINE

    def scatter(self, labels: ndarr) -> (ndarr, ndarr):
        j, sigma = labels[:, 0], labels[:, 1]
        weights = self.field.columns_at(labels[:, [0]], _position(sigma))

        rows = np.empty((labels.shape[0], 2, 2), dtype=np.int64)
        rows[:, :, 0] = j[:, np.newaxis] + SIGMAS[np.newaxis, :]
        rows[:, :, 1] = SIGMAS[np.newaxis, :]
        return rows, weights


class ScatteringLineStep(StepOperator):
    """U_s = T + R with T|s,j> = t_s |s,j+s> and R|s,j> = r_s |-s,j-s>.

    t_s and r_s are read from the site matrix as c_{s s} and c_{-s s}.
    """

    field: TransitionField

    def __init__(self, field: TransitionField):
        field.require(2, 1)
        self.field = field
        self.domain = LabelKind.SCATTERING_LINE

    def scatter(self, labels: ndarr) -> (ndarr, ndarr):
        sigma, j = labels[:, 0], labels[:, 1]
        columns = self.field.columns_at(labels[:, [1]], _position(sigma))
        entries = np.arange(labels.shape[0])

        transmission = columns[entries, _position(sigma)]
        reflection = columns[entries, _position(-sigma)]

        transmitted = np.column_stack((sigma, j + sigma))
        reflected = np.column_stack((-sigma, j - sigma))
        return np.stack((transmitted, reflected), axis=1), np.column_stack((transmission, reflection))


class LineLattice(Lattice):
    name = "line"
    dimension = 2
    site_width = 1
    coined_kind = LabelKind.COINED_LINE
    scattering_kind = LabelKind.SCATTERING_LINE
    bond_orientations = ("horizontal",)

    def coined_step(self, field: TransitionField) -> StepOperator:
        return CoinedLineStep(field)

    def scattering_step(self, field: TransitionField) -> StepOperator:
        return ScatteringLineStep(field)

    def to_coined_rows(self, rows: ndarr) -> ndarr:
        return rows[:, ::-1].copy()

    def to_scattering_rows(self, rows: ndarr) -> ndarr:
        return rows[:, ::-1].copy()

    def bond_partner_rows(self, rows: ndarr) -> ndarr:
        sigma, j = rows[:, 0], rows[:, 1]
        return np.column_stack((-sigma, j - sigma))

    def bond_keys(self, rows: ndarr) -> ndarr:
        # |+, j> and |-, j-1> share the bond joining j-1 and j, indexed j.
        sigma, j = rows[:, 0], rows[:, 1]
        bond = j + (1 - sigma) // 2
        return np.column_stack((bond, np.zeros_like(bond), np.zeros_like(bond)))

    def site_positions(self, sites: ndarr) -> (ndarr, ndarr):
        return sites[:, 0].astype(np.float64), np.zeros(sites.shape[0])

    def bond_positions(self, keys: ndarr) -> (ndarr, ndarr):
        return keys[:, 0] - 0.5, np.zeros(keys.shape[0])

    def standard_initial_state(self, model: str) -> WaveFunction:
        if self.kind(model) is self.scattering_kind:
            return WaveFunction.basis(BasisLabel.scattering_line(1, 0))
        return WaveFunction.basis(BasisLabel.coined_line(0, 1))


LINE = LineLattice()


def coined_step_1d(field: TransitionField) -> StepOperator:
    return LINE.coined_step(field)


def scattering_step_1d(field: TransitionField) -> StepOperator:
    return LINE.scattering_step(field)


def map_e_1d(psi: WaveFunction) -> WaveFunction:
    return LINE.map_e(psi)


def map_e_dagger_1d(psi: WaveFunction) -> WaveFunction:
    return LINE.map_e_dagger(psi)


def projector_1d(model: str, j: int) -> list:
    """Coined: both coin states at site j. Scattering: the two states on bond j, {|+, j>, |-, j-1>}."""
    if LINE.kind(model) is LINE.coined_kind:
        return LINE.site_projector((j,))
    return LINE.bond_projector(BasisLabel.scattering_line(1, j))


def cross_projector_1d(model: str, j: int) -> list:
    """Projector applied to a state evolved with `model` that yields the other model's probability at j."""
    if LINE.kind(model) is LINE.scattering_kind:
        return LINE.cross_site_projector((j,))
    return LINE.cross_bond_projector(BasisLabel.scattering_line(1, j))


def site_probabilities_1d(psi: WaveFunction) -> ProbabilityGrid:
    return LINE.site_probabilities(psi)


def bond_probabilities_1d(psi: WaveFunction) -> ProbabilityGrid:
    return LINE.bond_probabilities(psi)


def cross_site_probabilities_1d(psi: WaveFunction) -> ProbabilityGrid:
    return LINE.cross_site_probabilities(psi)


def cross_bond_probabilities_1d(psi: WaveFunction) -> ProbabilityGrid:
    return LINE.cross_bond_probabilities(psi)
