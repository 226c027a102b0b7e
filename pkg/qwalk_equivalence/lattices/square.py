import numpy as np

from numpy import ndarray as ndarr

from qwalk_equivalence.coins import TransitionField
from qwalk_equivalence.core import BasisLabel, LabelError, LabelKind, StepOperator, WaveFunction
from qwalk_equivalence.grids import ProbabilityGrid
from qwalk_equivalence.lattices.base import Lattice

# Coin matrices are written in the basis order [3, 1, 4, 2].
COIN_ORDER = np.array([3, 1, 4, 2], dtype=np.int64)
COIN_POSITION = np.array([-1, 1, 3, 0, 2], dtype=np.int64)

# Indexed by coin state; row 0 unused.
NATURAL_SHIFT = np.array([[0, 0], [1, 0], [0, 1], [-1, 0], [0, -1]], dtype=np.int64)
DIAGONAL_EXTRA = np.array([[0, 0], [0, 1], [-1, 0], [0, -1], [1, 0]], dtype=np.int64)

SIGMA_PAIRS = np.array([[0, 0], [1, 1], [-1, 1], [-1, -1], [1, -1]], dtype=np.int64)


def sigma_pair_to_coin(sigma_x: int, sigma_y: int) -> int:
    """sigma = (5 - (2 + sigma_x) sigma_y) / 2: ++ -> 1, -+ -> 2, -- -> 3, +- -> 4."""
    if sigma_x not in (-1, 1) or sigma_y not in (-1, 1):
        raise LabelError(f"sigma_x and sigma_y must be +1 or -1, got ({sigma_x}, {sigma_y})")
    return (5 - (2 + sigma_x) * sigma_y) // 2


def coin_to_sigma_pair(sigma: int) -> (int, int):
    if sigma not in (1, 2, 3, 4):
        raise LabelError(f"square coin state must be one of (1, 2, 3, 4), got {sigma}")
    sigma_x, sigma_y = SIGMA_PAIRS[sigma]
    return int(sigma_x), int(sigma_y)


def _coin_of(sigma_x: ndarr, sigma_y: ndarr) -> ndarr:
    return (5 - (2 + sigma_x) * sigma_y) // 2


def _shift(diagonal: bool) -> ndarr:
    return NATURAL_SHIFT + DIAGONAL_EXTRA if diagonal else NATURAL_SHIFT


def rotate_site(j: int, k: int) -> (int, int):
    """Site of the diagonal walk matching site (j, k) of the natural walk."""
    return j - k, j + k


class CoinedSquareStep(StepOperator):
    """S . (C x 1): coin at every site, then move one site along the coin direction."""

    field: TransitionField
    diagonal: bool

    def __init__(self, field: TransitionField, diagonal: bool = False):
        field.require(4, 2)
        self.field = field
        self.diagonal = diagonal
        self.domain = LabelKind.COINED_SQUARE

    def scatter(self, labels: ndarr) -> (ndarr, ndarr):
        j, k, sigma = labels[:, 0], labels[:, 1], labels[:, 2]
        weights = self.field.columns_at(labels[:, :2], COIN_POSITION[sigma])

        shift = _shift(self.diagonal)[COIN_ORDER]
        rows = np.empty((labels.shape[0], 4, 3), dtype=np.int64)
        rows[:, :, 0] = j[:, np.newaxis] + shift[np.newaxis, :, 0]
        rows[:, :, 1] = k[:, np.newaxis] + shift[np.newaxis, :, 1]
        rows[:, :, 2] = COIN_ORDER[np.newaxis, :]
        return rows, weights


class ScatteringSquareStep(StepOperator):
    """U_s |sx, sy, site> = sum over (a, b) of Gamma[(a b), (sx sy)] |a, b, site + d(a, b)>.

    The (a, b) = (-sx, -sy) term is the reflection, the other three are transmissions.
    """

    field: TransitionField
    diagonal: bool

    def __init__(self, field: TransitionField, diagonal: bool = False):
        field.require(4, 2)
        self.field = field
        self.diagonal = diagonal
        self.domain = LabelKind.SCATTERING_SQUARE

    def scatter(self, labels: ndarr) -> (ndarr, ndarr):
        sigma = _coin_of(labels[:, 0], labels[:, 1])
        weights = self.field.columns_at(labels[:, 2:], COIN_POSITION[sigma])

        shift = _shift(self.diagonal)[COIN_ORDER]
        pairs = SIGMA_PAIRS[COIN_ORDER]
        rows = np.empty((labels.shape[0], 4, 4), dtype=np.int64)
        rows[:, :, 0] = pairs[np.newaxis, :, 0]
        rows[:, :, 1] = pairs[np.newaxis, :, 1]
        rows[:, :, 2] = labels[:, 2, np.newaxis] + shift[np.newaxis, :, 0]
        rows[:, :, 3] = labels[:, 3, np.newaxis] + shift[np.newaxis, :, 1]
        return rows, weights


class SquareLattice(Lattice):
    """Square lattice, with the natural shift or the diagonal one D . S.

    Bonds are keyed by the site of their sigma_y = +1 member and by sigma_x sigma_y:
    +1 for horizontal (ascending) bonds, -1 for vertical (descending) ones.
    """

    dimension = 4
    site_width = 2
    coined_kind = LabelKind.COINED_SQUARE
    scattering_kind = LabelKind.SCATTERING_SQUARE

    diagonal: bool

    def __init__(self, diagonal: bool = False):
        self.diagonal = diagonal
        self.name = "square-diagonal" if diagonal else "square"
        self.bond_orientations = ("ascending", "descending") if diagonal else ("horizontal", "vertical")

    def coined_step(self, field: TransitionField) -> StepOperator:
        return CoinedSquareStep(field, self.diagonal)

    def scattering_step(self, field: TransitionField) -> StepOperator:
        return ScatteringSquareStep(field, self.diagonal)

    def to_coined_rows(self, rows: ndarr) -> ndarr:
        return np.column_stack((rows[:, 2], rows[:, 3], _coin_of(rows[:, 0], rows[:, 1])))

    def to_scattering_rows(self, rows: ndarr) -> ndarr:
        pairs = SIGMA_PAIRS[rows[:, 2]]
        return np.column_stack((pairs[:, 0], pairs[:, 1], rows[:, 0], rows[:, 1]))

    def bond_partner_rows(self, rows: ndarr) -> ndarr:
        shift = _shift(self.diagonal)[_coin_of(rows[:, 0], rows[:, 1])]
        return np.column_stack((-rows[:, 0], -rows[:, 1], rows[:, 2] - shift[:, 0], rows[:, 3] - shift[:, 1]))

    def bond_keys(self, rows: ndarr) -> ndarr:
        partners = self.bond_partner_rows(rows)
        anchors = np.where((rows[:, 1] == 1)[:, np.newaxis], rows[:, 2:], partners[:, 2:])
        codes = (1 - rows[:, 0] * rows[:, 1]) // 2
        return np.column_stack((anchors, codes))

    def site_positions(self, sites: ndarr) -> (ndarr, ndarr):
        return sites[:, 0].astype(np.float64), sites[:, 1].astype(np.float64)

    def bond_positions(self, keys: ndarr) -> (ndarr, ndarr):
        # The anchor state is |+, +> (code 0) or |-, +> (code 1); it arrived from half a step back.
        shift = _shift(self.diagonal)[np.where(keys[:, 2] == 0, 1, 2)]
        return keys[:, 0] - shift[:, 0] / 2, keys[:, 1] - shift[:, 1] / 2

    def standard_initial_state(self, model: str) -> WaveFunction:
        scattering = WaveFunction.from_pairs([
            (BasisLabel.scattering_square(1, 1, 0, 0), 0.5),
            (BasisLabel.scattering_square(-1, -1, 0, 0), 0.5j),
            (BasisLabel.scattering_square(-1, 1, 0, 0), 0.5),
            (BasisLabel.scattering_square(1, -1, 0, 0), 0.5j),
        ])
        if self.kind(model) is self.scattering_kind:
            return scattering
        return self.map_e(scattering)


SQUARE = SquareLattice(diagonal=False)
SQUARE_DIAGONAL = SquareLattice(diagonal=True)


def coined_step_square(field: TransitionField) -> StepOperator:
    return SQUARE.coined_step(field)


def diagonal_step_square(field: TransitionField) -> StepOperator:
    return SQUARE_DIAGONAL.coined_step(field)


def scattering_step_square(field: TransitionField, diagonal: bool = False) -> StepOperator:
    return (SQUARE_DIAGONAL if diagonal else SQUARE).scattering_step(field)


def map_e_square(psi: WaveFunction) -> WaveFunction:
    return SQUARE.map_e(psi)


def map_e_dagger_square(psi: WaveFunction) -> WaveFunction:
    return SQUARE.map_e_dagger(psi)


def site_probabilities_square(psi: WaveFunction) -> ProbabilityGrid:
    return SQUARE.site_probabilities(psi)


def bond_probabilities_square(psi: WaveFunction, diagonal: bool = False) -> ProbabilityGrid:
    return (SQUARE_DIAGONAL if diagonal else SQUARE).bond_probabilities(psi)


def cross_site_probabilities_square(psi: WaveFunction) -> ProbabilityGrid:
    return SQUARE.cross_site_probabilities(psi)


def cross_bond_probabilities_square(psi: WaveFunction, diagonal: bool = False) -> ProbabilityGrid:
    return (SQUARE_DIAGONAL if diagonal else SQUARE).cross_bond_probabilities(psi)
