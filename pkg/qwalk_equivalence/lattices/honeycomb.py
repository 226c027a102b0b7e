import numpy as np

from numpy import ndarray as ndarr

from qwalk_equivalence.coins import TransitionField
from qwalk_equivalence.core import BasisLabel, LabelError, LabelKind, StepOperator, WaveFunction
from qwalk_equivalence.grids import ProbabilityGrid
from qwalk_equivalence.lattices.base import Lattice
from qwalk_equivalence.math_utils import honeycomb_step, honeycomb_steps

SIGMAS = np.array([0, 1, 2], dtype=np.int64)
ROW_HEIGHT = 1.5
COLUMN_WIDTH = np.sqrt(3.0) / 2

# Six sectors around the origin; rays in one triplet are 120 degrees apart.
RAY_ANGLES = np.arange(6) * 60.0
RAY_HALF_WIDTH = 30.0
RAY_EDGE_TOLERANCE = 1e-9
RAY_TRIPLETS = ((0, 2, 4), (1, 3, 5))

def mod3(x: int) -> int:
    return x % 3


def phi(k: int, sigma: int) -> int:
    """Direction of the state on the same bond as |sigma, (j, k)>, travelling the other way."""
    return mod3(sigma - (-1) ** (k % 2))


def _phi(k: ndarr, sigma: ndarr) -> ndarr:
    return (sigma - np.where(k % 2 == 0, 1, -1)) % 3


def step_site(j: int, k: int, sigma: int) -> (int, int):
    """Neighbour of (j, k) reached along direction sigma."""
    if sigma not in (0, 1, 2):
        raise LabelError(f"honeycomb direction must be one of (0, 1, 2), got {sigma}")
    next_j, next_k = honeycomb_step(int(j), int(k), int(sigma))
    return int(next_j), int(next_k)


def orbit_period(label: BasisLabel, max_steps: int = 12) -> int or None:
    """Smallest n > 0 for which stepping n times along the label's fixed direction returns to its site."""
    j, k, sigma = label.coords
    start = (j, k)
    for n in range(1, max_steps + 1):
        j, k = step_site(j, k, sigma)
        if (j, k) == start:
            return n
    return None


def _targets(j: ndarr, k: ndarr) -> (ndarr, ndarr):
    """Neighbour sites along directions 0, 1, 2 of each site, as (N, 3) arrays."""
    count = j.shape[0]
    next_j, next_k = honeycomb_steps(np.repeat(j, 3), np.repeat(k, 3), np.tile(SIGMAS, count))
    return next_j.reshape((count, 3)), next_k.reshape((count, 3))


class CoinedHoneycombStep(StepOperator):
    field: TransitionField

    def __init__(self, field: TransitionField):
        field.require(3, 2)
        self.field = field
        self.domain = LabelKind.COINED_HONEYCOMB

    def scatter(self, labels: ndarr) -> (ndarr, ndarr):
        weights = self.field.columns_at(labels[:, :2], labels[:, 2])

        next_j, next_k = _targets(labels[:, 0], labels[:, 1])
        rows = np.empty((labels.shape[0], 3, 3), dtype=np.int64)
        rows[:, :, 0] = next_j
        rows[:, :, 1] = next_k
        rows[:, :, 2] = SIGMAS[np.newaxis, :]
        return rows, weights


class ScatteringHoneycombStep(StepOperator):
    """U_s |sigma, s> = sum over b of Gamma[b, sigma] |b, step(s, b)>; b = phi_k(sigma) is the reflection."""

    field: TransitionField

    def __init__(self, field: TransitionField):
        field.require(3, 2)
        self.field = field
        self.domain = LabelKind.SCATTERING_HONEYCOMB

    def scatter(self, labels: ndarr) -> (ndarr, ndarr):
        weights = self.field.columns_at(labels[:, 1:], labels[:, 0])

        next_j, next_k = _targets(labels[:, 1], labels[:, 2])
        rows = np.empty((labels.shape[0], 3, 3), dtype=np.int64)
        rows[:, :, 0] = SIGMAS[np.newaxis, :]
        rows[:, :, 1] = next_j
        rows[:, :, 2] = next_k
        return rows, weights


class HoneycombLattice(Lattice):
    """Honeycomb in brick-wall coordinates: even rows point up, odd rows point down.

    Each site has a vertical bond and two diagonal ones. Sites sit at
    x = j sqrt(3)/2, y = 1.5 floor(k/2) + (k mod 2), which gives unit bond lengths.
    """

    name = "honeycomb"
    dimension = 3
    site_width = 2
    coined_kind = LabelKind.COINED_HONEYCOMB
    scattering_kind = LabelKind.SCATTERING_HONEYCOMB
    bond_orientations = ("sigma0", "sigma1", "sigma2")

    def coined_step(self, field: TransitionField) -> StepOperator:
        return CoinedHoneycombStep(field)

    def scattering_step(self, field: TransitionField) -> StepOperator:
        return ScatteringHoneycombStep(field)

    def to_coined_rows(self, rows: ndarr) -> ndarr:
        return rows[:, [1, 2, 0]]

    def to_scattering_rows(self, rows: ndarr) -> ndarr:
        return rows[:, [2, 0, 1]]

    def bond_partner_rows(self, rows: ndarr) -> ndarr:
        sigma = _phi(rows[:, 2], rows[:, 0])
        next_j, next_k = honeycomb_steps(rows[:, 1].copy(), rows[:, 2].copy(), sigma)
        return np.column_stack((sigma, next_j, next_k))

    def bond_keys(self, rows: ndarr) -> ndarr:
        """The smaller of the two incoming (j, k, sigma) labels on each bond."""
        own = self.to_coined_rows(rows)
        partners = self.to_coined_rows(self.bond_partner_rows(rows))
        # Partners sit at different sites, so the site alone decides the order.
        own_first = (own[:, 0] < partners[:, 0]) | ((own[:, 0] == partners[:, 0]) & (own[:, 1] < partners[:, 1]))
        return np.where(own_first[:, np.newaxis], own, partners)

    def site_positions(self, sites: ndarr) -> (ndarr, ndarr):
        j, k = sites[:, 0], sites[:, 1]
        return j * COLUMN_WIDTH, ROW_HEIGHT * (k // 2) + k % 2

    def bond_positions(self, keys: ndarr) -> (ndarr, ndarr):
        j, k = keys[:, 0].copy(), keys[:, 1].copy()
        other_j, other_k = honeycomb_steps(j, k, _phi(k, keys[:, 2]))
        x, y = self.site_positions(keys[:, :2])
        other_x, other_y = self.site_positions(np.column_stack((other_j, other_k)))
        return (x + other_x) / 2, (y + other_y) / 2

    def standard_initial_state(self, model: str) -> WaveFunction:
        if self.kind(model) is self.scattering_kind:
            return WaveFunction.basis(BasisLabel.scattering_honeycomb(1, 0, 0))
        return WaveFunction.basis(BasisLabel.coined_honeycomb(0, 0, 1))


HONEYCOMB = HoneycombLattice()


def coined_step_honeycomb(field: TransitionField) -> StepOperator:
    return HONEYCOMB.coined_step(field)


def scattering_step_honeycomb(field: TransitionField) -> StepOperator:
    return HONEYCOMB.scattering_step(field)


def map_e_honeycomb(psi: WaveFunction) -> WaveFunction:
    return HONEYCOMB.map_e(psi)


def map_e_dagger_honeycomb(psi: WaveFunction) -> WaveFunction:
    return HONEYCOMB.map_e_dagger(psi)


def site_probabilities_honeycomb(psi: WaveFunction) -> ProbabilityGrid:
    return HONEYCOMB.site_probabilities(psi)


def bond_probabilities_honeycomb(psi: WaveFunction) -> ProbabilityGrid:
    return HONEYCOMB.bond_probabilities(psi)


def cross_site_probabilities_honeycomb(psi: WaveFunction) -> ProbabilityGrid:
    return HONEYCOMB.cross_site_probabilities(psi)


def cross_bond_probabilities_honeycomb(psi: WaveFunction) -> ProbabilityGrid:
    return HONEYCOMB.cross_bond_probabilities(psi)


def ray_shares(grid: ProbabilityGrid) -> ndarr:
    """Probability inside each closed 60 degree sector around the origin, centred on 0, 60, ..., 300 degrees.

    A position on a sector edge counts in both sectors that share it, and the origin counts in all six.
    """
    if len(grid) == 0:
        return np.zeros(RAY_ANGLES.shape[0])

    keys = list(grid.probabilities)
    probabilities = np.array([grid.probabilities[key] for key in keys])
    x, y = np.array([grid.coordinates[key] for key in keys], dtype=np.float64).T

    offsets = np.abs((np.degrees(np.arctan2(y, x))[:, np.newaxis] - RAY_ANGLES + 180.0) % 360.0 - 180.0)
    inside = (offsets <= RAY_HALF_WIDTH + RAY_EDGE_TOLERANCE) | (np.hypot(x, y) == 0)[:, np.newaxis]
    return probabilities @ inside.astype(np.float64)


def dominant_rays(shares: ndarr) -> (tuple, float):
    """The triplet of rays 120 degrees apart holding more probability, and that probability."""
    totals = [float(np.sum(shares[list(triplet)])) for triplet in RAY_TRIPLETS]
    best = RAY_TRIPLETS[int(np.argmax(totals))]
    return tuple(int(RAY_ANGLES[index]) for index in best), max(totals)
