import functools
import numbers
import itertools
import numpy as np

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from numpy import ndarray as ndarr
from scipy import sparse
from typing import Callable, Iterable, Iterator, Sequence

from qwalk_equivalence.exceptions import LabelError, LatticeMismatchError, MatrixError, ParameterError, QuantumWalkError
from qwalk_equivalence.math_utils import MAX_COORDINATE, accumulate

PRUNE_THRESHOLD = 1e-15


class LabelKind(Enum):
    COINED_LINE = ("coined", "line", ("j", "sigma"))
    SCATTERING_LINE = ("scattering", "line", ("sigma", "j"))
    COINED_SQUARE = ("coined", "square", ("j", "k", "sigma"))
    SCATTERING_SQUARE = ("scattering", "square", ("sigma_x", "sigma_y", "j", "k"))
    COINED_HONEYCOMB = ("coined", "honeycomb", ("j", "k", "sigma"))
    SCATTERING_HONEYCOMB = ("scattering", "honeycomb", ("sigma", "j", "k"))

    @property
    def model(self) -> str:
        return self.value[0]

    @property
    def lattice(self) -> str:
        return self.value[1]

    @property
    def fields(self) -> tuple:
        return self.value[2]

    @property
    def width(self) -> int:
        return len(self.value[2])

    @property
    def sigma_columns(self) -> dict:
        return {column: _SIGMA_VALUES[(self.lattice, name)]
                for column, name in enumerate(self.fields) if name.startswith("sigma")}

    @property
    def site_columns(self) -> list:
        return [column for column, name in enumerate(self.fields) if not name.startswith("sigma")]

    def validate_rows(self, rows: ndarr) -> None:
        if rows.ndim != 2 or rows.shape[1] != self.width:
            raise LabelError(f"{self.name} labels have {self.width} fields {self.fields}, got shape {rows.shape}")
        for column, allowed in self.sigma_columns.items():
            if not np.all(np.isin(rows[:, column], allowed)):
                bad = sorted(set(rows[:, column].tolist()) - set(allowed))
                raise LabelError(f"{self.name}.{self.fields[column]} must be one of {allowed}, got {bad}")

    def window(self, radius: int) -> list:
        """All labels whose site coordinates lie within the given Chebyshev radius of the origin."""
        ranges = []
        for column, name in enumerate(self.fields):
            if name.startswith("sigma"):
                ranges.append(_SIGMA_VALUES[(self.lattice, name)])
            else:
                ranges.append(range(-radius, radius + 1))
        return [BasisLabel(self, coords) for coords in itertools.product(*ranges)]


_SIGMA_VALUES = {
    ("line", "sigma"): (-1, 1),
    ("square", "sigma"): (1, 2, 3, 4),
    ("square", "sigma_x"): (-1, 1),
    ("square", "sigma_y"): (-1, 1),
    ("honeycomb", "sigma"): (0, 1, 2),
}


def _coordinate(value) -> int:
    if isinstance(value, (bool, np.bool_)):
        raise LabelError(f"label coordinates must be integers, got {value!r}")
    if isinstance(value, numbers.Integral):
        coordinate = int(value)
    elif isinstance(value, numbers.Real) and float(value).is_integer():
        coordinate = int(value)
    else:
        raise LabelError(f"label coordinates must be integers, got {value!r}")
    if abs(coordinate) > MAX_COORDINATE:
        raise LabelError(f"label coordinate {coordinate} is outside [-{MAX_COORDINATE}, {MAX_COORDINATE}]")
    return coordinate


def _integer_rows(labels) -> ndarr:
    raw = np.asarray(labels)
    if raw.size > 0 and raw.dtype.kind not in "iu":
        if raw.dtype.kind != "f" or not np.all(np.isfinite(raw) & (raw == np.round(raw))):
            raise LabelError(f"label coordinates must be integers, got an array of {raw.dtype}")
    if raw.size > 0 and (int(raw.min()) < -MAX_COORDINATE or int(raw.max()) > MAX_COORDINATE):
        raise LabelError(f"label coordinates must lie within [-{MAX_COORDINATE}, {MAX_COORDINATE}]")
    return raw.astype(np.int64)


@functools.total_ordering
@dataclass(frozen=True)
class BasisLabel:
    kind: LabelKind
    coords: tuple

    def __post_init__(self):
        coords = tuple(_coordinate(value) for value in self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) != self.kind.width:
            raise LabelError(f"{self.kind.name} labels have fields {self.kind.fields}, got {coords}")
        for column, allowed in self.kind.sigma_columns.items():
            if coords[column] not in allowed:
                raise LabelError(f"{self.kind.name}.{self.kind.fields[column]} must be one of {allowed}, "
                                 f"got {coords[column]}")

    def __lt__(self, other: "BasisLabel") -> bool:
        if self.kind is not other.kind:
            raise LatticeMismatchError(self.kind.name, other.kind.name)
        return self.coords < other.coords

    def __getitem__(self, name: str) -> int:
        return self.coords[self.kind.fields.index(name)]

    @property
    def site(self) -> tuple:
        return tuple(self.coords[column] for column in self.kind.site_columns)

    def __repr__(self) -> str:
        fields = ", ".join(f"{name}={value}" for name, value in zip(self.kind.fields, self.coords))
        return f"{self.kind.name}({fields})"

    @staticmethod
    def coined_line(j: int, sigma: int) -> "BasisLabel":
        return BasisLabel(LabelKind.COINED_LINE, (j, sigma))

    @staticmethod
    def scattering_line(sigma: int, j: int) -> "BasisLabel":
        return BasisLabel(LabelKind.SCATTERING_LINE, (sigma, j))

    @staticmethod
    def coined_square(j: int, k: int, sigma: int) -> "BasisLabel":
        return BasisLabel(LabelKind.COINED_SQUARE, (j, k, sigma))

    @staticmethod
    def scattering_square(sigma_x: int, sigma_y: int, j: int, k: int) -> "BasisLabel":
        return BasisLabel(LabelKind.SCATTERING_SQUARE, (sigma_x, sigma_y, j, k))

    @staticmethod
    def coined_honeycomb(j: int, k: int, sigma: int) -> "BasisLabel":
        return BasisLabel(LabelKind.COINED_HONEYCOMB, (j, k, sigma))

    @staticmethod
    def scattering_honeycomb(sigma: int, j: int, k: int) -> "BasisLabel":
        return BasisLabel(LabelKind.SCATTERING_HONEYCOMB, (sigma, j, k))


class WaveFunction(object):
    """Sparse state: label rows kept unique, lexicographically sorted and pruned below PRUNE_THRESHOLD."""

    kind: LabelKind
    labels: ndarr
    amplitudes: ndarr

    __index: dict or None

    def __init__(self, kind: LabelKind, labels: ndarr = None, amplitudes: ndarr = None):
        labels = np.zeros((0, kind.width), dtype=np.int64) if labels is None else _integer_rows(labels)
        amplitudes = np.zeros(0, dtype=np.complex128) if amplitudes is None else np.asarray(amplitudes,
                                                                                           dtype=np.complex128)
        labels = labels.reshape((-1, kind.width))
        kind.validate_rows(labels)
        if labels.shape[0] != amplitudes.shape[0]:
            raise LabelError(f"{labels.shape[0]} labels for {amplitudes.shape[0]} amplitudes")
        if not np.all(np.isfinite(amplitudes)):
            raise ParameterError("amplitudes must be finite")

        self._assign(kind, *accumulate(labels, amplitudes, PRUNE_THRESHOLD))

    def _assign(self, kind: LabelKind, labels: ndarr, amplitudes: ndarr) -> None:
        self.kind = kind
        self.labels, self.amplitudes = labels, amplitudes
        self.labels.setflags(write=False)
        self.amplitudes.setflags(write=False)
        self.__index = None

    @classmethod
    def _accumulated(cls, kind: LabelKind, labels: ndarr, amplitudes: ndarr) -> "WaveFunction":
        """Wraps the output of `accumulate` as is; the rows must come from valid labels of `kind`."""
        psi = cls.__new__(cls)
        psi._assign(kind, labels, amplitudes)
        return psi

    @staticmethod
    def from_pairs(pairs: Iterable, kind: LabelKind = None) -> "WaveFunction":
        pairs = list(pairs)
        if kind is None:
            if not pairs:
                raise LabelError("cannot infer the label kind of an empty state")
            kind = pairs[0][0].kind
        for label, _ in pairs:
            if label.kind is not kind:
                raise LatticeMismatchError(kind.name, label.kind.name)
        labels = np.array([label.coords for label, _ in pairs], dtype=np.int64).reshape((-1, kind.width))
        amplitudes = np.array([amplitude for _, amplitude in pairs], dtype=np.complex128)
        return WaveFunction(kind, labels, amplitudes)

    @staticmethod
    def from_dict(mapping: dict, kind: LabelKind = None) -> "WaveFunction":
        return WaveFunction.from_pairs(mapping.items(), kind)

    @staticmethod
    def basis(label: BasisLabel) -> "WaveFunction":
        return WaveFunction.from_pairs([(label, 1.0)])

    def __len__(self) -> int:
        return self.labels.shape[0]

    def __iter__(self) -> Iterator:
        for row, amplitude in zip(self.labels.tolist(), self.amplitudes.tolist()):
            yield BasisLabel(self.kind, tuple(row)), amplitude

    def __repr__(self) -> str:
        return f"<WaveFunction {self.kind.name}: {len(self)} entries, norm_sq={norm_sq(self):.15g}>"

    def to_dict(self) -> dict:
        return dict(iter(self))

    def amplitude(self, label: BasisLabel) -> complex:
        if label.kind is not self.kind:
            raise LatticeMismatchError(self.kind.name, label.kind.name)
        if self.__index is None:
            self.__index = {tuple(row): index for index, row in enumerate(self.labels.tolist())}
        index = self.__index.get(label.coords)
        return 0j if index is None else complex(self.amplitudes[index])

    def relabel(self, kind: LabelKind, mapping: Callable[[ndarr], ndarr]) -> "WaveFunction":
        return WaveFunction(kind, mapping(self.labels), self.amplitudes)

    def normalize(self) -> "WaveFunction":
        norm = np.sqrt(norm_sq(self))
        if norm == 0:
            raise ParameterError("cannot normalize the zero state")
        return WaveFunction(self.kind, self.labels, self.amplitudes / norm)

    def _check_kind(self, other: "WaveFunction") -> None:
        if other.kind is not self.kind:
            raise LatticeMismatchError(self.kind.name, other.kind.name)

    def __add__(self, other: "WaveFunction") -> "WaveFunction":
        self._check_kind(other)
        return WaveFunction(self.kind, np.vstack((self.labels, other.labels)),
                            np.concatenate((self.amplitudes, other.amplitudes)))

    def __sub__(self, other: "WaveFunction") -> "WaveFunction":
        return self + (-1) * other

    def __mul__(self, scalar: complex) -> "WaveFunction":
        return WaveFunction(self.kind, self.labels, self.amplitudes * complex(scalar))

    __rmul__ = __mul__


class StepOperator(ABC):
    """One application of U, described by its action on basis labels.

    `scatter` maps N label rows to (N, d, width) output rows and (N, d) amplitudes; every
    output row of one input is distinct.
    """

    domain: LabelKind

    @abstractmethod
    def scatter(self, labels: ndarr) -> (ndarr, ndarr):
        pass

    def apply_basis(self, label: BasisLabel) -> list:
        if label.kind is not self.domain:
            raise LatticeMismatchError(self.domain.name, label.kind.name)
        rows, weights = self.scatter(np.array([label.coords], dtype=np.int64))
        return [(BasisLabel(self.domain, tuple(row)), complex(weight))
                for row, weight in zip(rows[0].tolist(), weights[0].tolist()) if abs(weight) >= PRUNE_THRESHOLD]


class ConjugatedStep(StepOperator):
    """V† U V for a relabeling V: the step of `inner` seen through a one-to-one change of basis labels."""

    inner: StepOperator
    to_inner: Callable[[ndarr], ndarr]
    from_inner: Callable[[ndarr], ndarr]

    def __init__(self, inner: StepOperator, domain: LabelKind, to_inner: Callable[[ndarr], ndarr],
                 from_inner: Callable[[ndarr], ndarr]):
        self.inner = inner
        self.domain = domain
        self.to_inner = to_inner
        self.from_inner = from_inner

    def scatter(self, labels: ndarr) -> (ndarr, ndarr):
        rows, weights = self.inner.scatter(self.to_inner(labels))
        mapped = self.from_inner(rows.reshape((-1, self.inner.domain.width)))
        return mapped.reshape((rows.shape[0], rows.shape[1], self.domain.width)), weights


@dataclass
class WindowReport:
    passed: bool
    max_deviation: float
    tolerance: float
    window_size: int
    offending: list = field(default_factory=list)

    def as_lines(self) -> list:
        return [
            f"passed={'true' if self.passed else 'false'}",
            f"max_deviation={self.max_deviation:.6e}",
            f"tolerance={self.tolerance:.6e}",
            f"window_size={self.window_size}",
            f"offending_count={len(self.offending)}",
        ]


def _advance(kind: LabelKind, labels: ndarr, amplitudes: ndarr, step: StepOperator) -> (ndarr, ndarr):
    rows, weights = step.scatter(labels)
    weighted = weights * amplitudes[:, np.newaxis]
    return accumulate(rows.reshape((-1, kind.width)), weighted.reshape(-1), PRUNE_THRESHOLD)


def apply_step(psi: WaveFunction, step: StepOperator) -> WaveFunction:
    if psi.kind is not step.domain:
        raise LatticeMismatchError(step.domain.name, psi.kind.name)
    if len(psi) == 0:
        return psi
    return WaveFunction._accumulated(psi.kind, *_advance(psi.kind, psi.labels, psi.amplitudes, step))


def evolve(psi: WaveFunction, step: StepOperator, n_steps: int, workers: int = 1) -> WaveFunction:
    if n_steps < 0:
        raise ParameterError(f"number of steps must be non-negative, got {n_steps}")
    if psi.kind is not step.domain:
        raise LatticeMismatchError(step.domain.name, psi.kind.name)
    if n_steps == 0 or len(psi) == 0:
        return psi

    if workers > 1:
        from qwalk_equivalence.multiprocessing_tools import parallel_evolve
        return parallel_evolve(psi, step, n_steps, workers)

    labels, amplitudes = psi.labels, psi.amplitudes
    for _ in range(n_steps):
        labels, amplitudes = _advance(psi.kind, labels, amplitudes, step)
        if labels.shape[0] == 0:
            break
    return WaveFunction._accumulated(psi.kind, labels, amplitudes)


def norm_sq(psi: WaveFunction) -> float:
    return float(np.sum(np.abs(psi.amplitudes) ** 2))


def inner_product(psi: WaveFunction, phi: WaveFunction) -> complex:
    """<psi|phi>, conjugate-linear in psi."""
    psi._check_kind(phi)
    if len(psi) == 0 or len(phi) == 0:
        return 0j

    # Both label sets are sorted and unique, so a merged accumulation pairs common labels.
    rows = np.vstack((psi.labels, phi.labels))
    owner = np.concatenate((np.zeros(len(psi), dtype=np.int64), np.ones(len(phi), dtype=np.int64)))
    tagged = np.column_stack((rows, owner))
    order = np.lexsort(tagged.T[::-1])
    tagged, values = tagged[order], np.concatenate((psi.amplitudes.conj(), phi.amplitudes))[order]

    same = np.all(tagged[1:, :-1] == tagged[:-1, :-1], axis=1)
    pairs = np.flatnonzero(same)
    return complex(np.sum(values[pairs] * values[pairs + 1]))


def probability_of(psi: WaveFunction, projector: Sequence[BasisLabel]) -> float:
    for label in projector:
        if label.kind is not psi.kind:
            raise LatticeMismatchError(psi.kind.name, label.kind.name)
    return float(sum(abs(psi.amplitude(label)) ** 2 for label in set(projector)))


def _columns(step: StepOperator, window: Sequence[BasisLabel]) -> sparse.csc_matrix:
    """Sparse matrix whose i-th column is U|window[i]>, over the rows reached from the window."""
    labels = np.array([label.coords for label in window], dtype=np.int64)
    rows, weights = step.scatter(labels)
    flat_rows = rows.reshape((-1, step.domain.width))
    reached, inverse = np.unique(flat_rows, axis=0, return_inverse=True)

    column_index = np.repeat(np.arange(len(window)), rows.shape[1])
    return sparse.csc_matrix((weights.reshape(-1), (inverse.reshape(-1), column_index)),
                             shape=(reached.shape[0], len(window)))


def verify_unitary_on_window(step: StepOperator, window: Sequence[BasisLabel], tol: float) -> WindowReport:
    """Checks <U b_i|U b_j> = delta_ij over the window; images of basis states have finite support."""
    assert len(window) > 0, "unitarity check needs a nonempty window"

    columns = _columns(step, window)
    deviation = (columns.conj().T @ columns - sparse.identity(len(window), dtype=np.complex128, format="csc")).tocoo()
    magnitudes = np.abs(deviation.data)
    max_deviation = float(magnitudes.max()) if magnitudes.size else 0.0

    upper = np.flatnonzero((deviation.row <= deviation.col) & (magnitudes > tol))
    upper = upper[np.lexsort((deviation.col[upper], deviation.row[upper]))]
    offending = [(window[deviation.row[index]], window[deviation.col[index]], float(magnitudes[index]))
                 for index in upper]
    return WindowReport(max_deviation <= tol, max_deviation, tol, len(window), offending)


def compare_operators_on_window(first: StepOperator, second: StepOperator, window: Sequence[BasisLabel],
                                tol: float) -> WindowReport:
    """Max over the window of ||U b - V b||, the basis-by-basis distance between two step operators."""
    assert len(window) > 0, "operator comparison needs a nonempty window"
    if first.domain is not second.domain:
        raise LatticeMismatchError(first.domain.name, second.domain.name)

    offending = []
    max_deviation = 0.0
    for label in window:
        difference = (WaveFunction.from_pairs(first.apply_basis(label), first.domain) -
                      WaveFunction.from_pairs(second.apply_basis(label), second.domain))
        deviation = float(np.sqrt(norm_sq(difference)))
        max_deviation = max(max_deviation, deviation)
        if deviation > tol:
            offending.append((label, label, deviation))

    return WindowReport(max_deviation <= tol, max_deviation, tol, len(window), offending)
