import numpy as np
import pandas as pd

from numpy import ndarray as ndarr
from typing import Callable, NamedTuple

GRID_COLUMNS = ["x", "y", "position_kind", "j", "k", "orientation", "probability"]


class PositionKey(NamedTuple):
    position_kind: str
    j: int
    k: int
    orientation: str


class ProbabilityGrid(object):
    """Probability per position (a site, or a bond with its orientation) and the point where it is plotted."""

    probabilities: dict[PositionKey, float]
    coordinates: dict[PositionKey, tuple]

    def __init__(self, probabilities: dict, coordinates: dict):
        self.probabilities = dict(sorted(probabilities.items()))
        self.coordinates = coordinates

    @staticmethod
    def from_entries(position_kind: str, keys: ndarr, weights: ndarr, orientations: tuple,
                     locate: Callable[[ndarr], tuple]) -> "ProbabilityGrid":
        """Groups per-entry probabilities by their (j, k, orientation code) key rows."""
        if keys.shape[0] == 0:
            return ProbabilityGrid(dict(), dict())

        unique_keys, inverse = np.unique(keys, axis=0, return_inverse=True)
        totals = np.bincount(inverse.reshape(-1), weights=weights, minlength=unique_keys.shape[0])
        xs, ys = locate(unique_keys)

        probabilities, coordinates = dict(), dict()
        for (j, k, code), total, x, y in zip(unique_keys.tolist(), totals.tolist(), xs.tolist(), ys.tolist()):
            key = PositionKey(position_kind, j, k, orientations[code])
            probabilities[key] = total
            coordinates[key] = (x, y)
        return ProbabilityGrid(probabilities, coordinates)

    def __len__(self) -> int:
        return len(self.probabilities)

    def __getitem__(self, key: PositionKey) -> float:
        return self.probabilities.get(key, 0.0)

    def __iter__(self):
        return iter(self.probabilities.items())

    @property
    def total(self) -> float:
        return float(sum(self.probabilities.values()))

    def site(self, j: int, k: int = 0) -> float:
        return self[PositionKey("site", j, k, "")]

    def max_difference(self, other: "ProbabilityGrid") -> float:
        keys = set(self.probabilities) | set(other.probabilities)
        return max((abs(self[key] - other[key]) for key in keys), default=0.0)

    def to_frame(self) -> pd.DataFrame:
        rows = [(*self.coordinates[key], key.position_kind, key.j, key.k, key.orientation, probability)
                for key, probability in self.probabilities.items()]
        return pd.DataFrame(rows, columns=GRID_COLUMNS)

    def save(self, path) -> None:
        self.to_frame().to_csv(path, index=False, float_format="%.17g")
