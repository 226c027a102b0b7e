import numpy as np

from dataclasses import dataclass
from numpy import ndarray as ndarr
from typing import NamedTuple

from qwalk_equivalence.core import LabelError, MatrixError, ParameterError
from qwalk_equivalence.math_utils import unitarity_deviation

SQRT2 = np.sqrt(2.0)
SQRT3 = np.sqrt(3.0)
FIELD_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class MatrixSpec:
    """A named transition matrix, rows and columns in the lattice's basis order.

    Order is [-, +] for the line, [3, 1, 4, 2] for the square lattice and [0, 1, 2] for the honeycomb.
    """
    name: str
    entries: ndarr

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] not in (2, 3, 4):
            raise MatrixError(f"matrix '{self.name}' must be 2x2, 3x3 or 4x4, got shape {entries.shape}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


class UnitarityCheck(NamedTuple):
    passed: bool
    max_deviation: float


class CoinParams1D(NamedTuple):
    gamma: float = 0.0
    xi: float = 0.0
    zeta: float = 0.0
    theta: float = np.pi / 4


class ScatterParams1D(NamedTuple):
    rho: float = 0.5
    lam: float = 0.0
    phi: float = 0.0
    varphi: float = 0.0


def _dft3() -> ndarr:
    omega = np.exp(2j * np.pi / 3)
    return np.array([[omega, 1, omega.conjugate()],
                     [1, 1, 1],
                     [omega.conjugate(), 1, omega]]) / SQRT3


def _unb3() -> ndarr:
    phase = np.exp(-1j * np.pi / 3)
    return (phase * (np.ones((3, 3)) - np.eye(3)) - np.eye(3)) / SQRT3


_CATALOG = {
    "hadamard2": lambda: np.array([[1, 1],
                                   [1, -1]]) / SQRT2,
    "h2h2": lambda: np.array([[1, 1, 0, 0],
                              [1, -1, 0, 0],
                              [0, 0, 1, 1],
                              [0, 0, 1, -1]]) / SQRT2,
    "hadamard4": lambda: np.array([[1, 1, 1, 1],
                                   [1, -1, 1, -1],
                                   [1, 1, -1, -1],
                                   [1, -1, -1, 1]]) / 2,
    "grover4": lambda: np.array([[-1, 1, 1, 1],
                                 [1, -1, 1, 1],
                                 [1, 1, -1, 1],
                                 [1, 1, 1, -1]]) / 2,
    "dft4": lambda: np.array([[1, 1, 1, 1],
                              [1, 1j, -1, -1j],
                              [1, -1, 1, -1],
                              [1, -1j, -1, 1j]]) / 2,
    "unb3": _unb3,
    "bia3": lambda: np.array([[1, 1 - SQRT3, 1 + SQRT3],
                              [1 + SQRT3, 1, 1 - SQRT3],
                              [1 - SQRT3, 1 + SQRT3, 1]]) / 3,
    "dht3": lambda: np.array([[2, 2, 2],
                              [2, -1 + SQRT3, -1 - SQRT3],
                              [2, -1 - SQRT3, -1 + SQRT3]]) / (2 * SQRT3),
    "grover3": lambda: np.array([[-1, 2, 2],
                                 [2, -1, 2],
                                 [2, 2, -1]]) / 3,
    "dft3": _dft3,
}


def catalog_names(dim: int = None) -> list:
    return [name for name in _CATALOG if dim is None or catalog(name).dim == dim]


def catalog(name: str) -> MatrixSpec:
    if name == "hadamard3":
        raise MatrixError("there is no 3x3 Hadamard matrix; choose one of " + ", ".join(catalog_names(3)))
    try:
        factory = _CATALOG[name]
    except KeyError:
        raise MatrixError(f"unknown matrix '{name}'; valid names are {', '.join(_CATALOG)}")
    return MatrixSpec(name, factory())


def check_unitary(matrix: MatrixSpec or ndarr, tol: float) -> UnitarityCheck:
    entries = matrix.entries if isinstance(matrix, MatrixSpec) else np.asarray(matrix, dtype=np.complex128)
    deviation = unitarity_deviation(entries)
    return UnitarityCheck(deviation <= tol, deviation)


def matrix_from_entries(entries: list, name: str = "custom", tol: float = FIELD_TOLERANCE) -> MatrixSpec:
    """Builds a matrix from row-major rows of [re, im] pairs, rejecting it unless unitary within tol."""
    try:
        values = np.array([[complex(re, im) for re, im in row] for row in entries], dtype=np.complex128)
    except (TypeError, ValueError) as error:
        raise MatrixError(f"matrix '{name}' entries must be rows of [re, im] pairs: {error}")
    matrix = MatrixSpec(name, values)

    check = check_unitary(matrix, tol)
    if not check.passed:
        raise MatrixError(f"matrix '{name}' is not unitary (deviation {check.max_deviation:.3e} > {tol:.1e})")
    return matrix


def general_coin(params: CoinParams1D) -> ndarr:
    gamma, xi, zeta, theta = params
    return np.exp(1j * gamma) * np.array([
        [np.exp(1j * xi) * np.cos(theta), np.exp(1j * zeta) * np.sin(theta)],
        [np.exp(-1j * zeta) * np.sin(theta), -np.exp(-1j * xi) * np.cos(theta)],
    ])


def scatter_amps(params: ScatterParams1D) -> (complex, complex, complex, complex):
    """(t+, t-, r+, r-) of a line site."""
    rho, lam, phi, varphi = params
    if not 0.0 <= rho <= 1.0:
        raise ParameterError(f"reflection probability rho must lie in [0, 1], got {rho}")

    transmission = lambda sigma: np.exp(1j * lam) * np.sqrt(1 - rho) * np.exp(1j * sigma * phi)
    reflection = lambda sigma: np.exp(1j * lam) * sigma * np.sqrt(rho) * np.exp(1j * sigma * varphi)
    return complex(transmission(1)), complex(transmission(-1)), complex(reflection(1)), complex(reflection(-1))


def scattering_matrix_1d(params: ScatterParams1D) -> ndarr:
    """2x2 matrix in [-, +] order with c_{sigma sigma} = t_sigma and c_{-sigma sigma} = r_sigma."""
    t_plus, t_minus, r_plus, r_minus = scatter_amps(params)
    return np.array([[t_minus, r_plus],
                     [r_minus, t_plus]])


def coin_condition_residual(matrix: ndarr) -> float:
    """Largest violation of the 2x2 coin unitarity relations; index 0 is |->, 1 is |+>."""
    c = np.asarray(matrix)
    c_mm, c_mp, c_pm, c_pp = c[0, 0], c[0, 1], c[1, 0], c[1, 1]
    return float(max(
        abs(abs(c_pp) ** 2 + abs(c_mp) ** 2 - 1),
        abs(abs(c_mm) ** 2 + abs(c_pm) ** 2 - 1),
        abs(abs(c_pm) ** 2 - abs(c_mp) ** 2),
        abs(c_pp * np.conj(c_mp) + c_pm * np.conj(c_mm)),
    ))


def scattering_condition_residual(t_plus: complex, t_minus: complex, r_plus: complex, r_minus: complex) -> float:
    return float(max(
        abs(abs(t_plus) ** 2 + abs(r_plus) ** 2 - 1),
        abs(abs(t_minus) ** 2 + abs(r_minus) ** 2 - 1),
        abs(abs(r_plus) ** 2 - abs(r_minus) ** 2),
        abs(r_minus * np.conj(t_plus) + np.conj(r_plus) * t_minus),
    ))


def _site_keys(sites: ndarr) -> ndarr:
    sites = np.asarray(sites, dtype=np.int64)
    if sites.shape[1] == 1:
        return sites[:, 0].copy()
    return sites[:, 0] * (1 << 32) + sites[:, 1]


class TransitionField(object):
    """Unitary d x d matrix at every lattice site: a default plus per-site overrides.

    Serves as coin C^(site) for the coined walk and as scattering matrix Gamma^(site) for the scattering walk.
    """

    default: ndarr
    overrides: dict
    dimension: int
    site_width: int or None

    __keys: ndarr
    __stacked: ndarr

    def __init__(self, default: MatrixSpec or ndarr, overrides: dict = None, site_width: int = None,
                 tol: float = FIELD_TOLERANCE):
        self.default = self.__validated(default, "default", None, tol)
        self.dimension = self.default.shape[0]
        self.site_width = site_width

        self.overrides = dict()
        for site, matrix in (overrides or dict()).items():
            site = (int(site),) if np.isscalar(site) else tuple(int(value) for value in site)
            if self.site_width is None:
                self.site_width = len(site)
            elif len(site) != self.site_width:
                raise LabelError(f"override site {site} does not have {self.site_width} coordinates")
            self.overrides[site] = self.__validated(matrix, f"override at {site}", self.dimension, tol)

        sites = sorted(self.overrides)
        if sites:
            self.__keys = _site_keys(np.array(sites))
            order = np.argsort(self.__keys)
            self.__keys = self.__keys[order]
            self.__stacked = np.stack([self.overrides[site] for site in sites])[order]

    @staticmethod
    def __validated(matrix: MatrixSpec or ndarr, where: str, dimension: int or None, tol: float) -> ndarr:
        entries = matrix.entries if isinstance(matrix, MatrixSpec) else np.array(matrix, dtype=np.complex128)
        entries = np.array(entries, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise MatrixError(f"{where}: transition matrix must be square, got shape {entries.shape}")
        if dimension is not None and entries.shape[0] != dimension:
            raise MatrixError(f"{where}: expected a {dimension}x{dimension} matrix, got {entries.shape}")

        check = check_unitary(entries, tol)
        if not check.passed:
            raise MatrixError(f"{where}: matrix is not unitary (deviation {check.max_deviation:.3e})")
        entries.setflags(write=False)
        return entries

    def require(self, dimension: int, site_width: int) -> None:
        if self.dimension != dimension:
            raise MatrixError(f"lattice needs {dimension}x{dimension} matrices, field holds "
                              f"{self.dimension}x{self.dimension}")
        if self.overrides and self.site_width != site_width:
            raise LabelError(f"lattice sites have {site_width} coordinates, overrides use {self.site_width}")

    def matrix_at(self, site: tuple) -> ndarr:
        return self.overrides.get(tuple(site), self.default)

    def __lookup(self, sites: ndarr) -> (ndarr, ndarr):
        keys = _site_keys(sites)
        position = np.minimum(np.searchsorted(self.__keys, keys), self.__keys.shape[0] - 1)
        return position, self.__keys[position] == keys

    def matrices_at(self, sites: ndarr) -> ndarr:
        result = np.broadcast_to(self.default, (sites.shape[0], self.dimension, self.dimension))
        if not self.overrides:
            return result

        position, hit = self.__lookup(sites)
        result = result.copy()
        result[hit] = self.__stacked[position[hit]]
        return result

    def columns_at(self, sites: ndarr, columns: ndarr) -> ndarr:
        """Row n is column `columns[n]` of the matrix at `sites[n]`, without building the matrices."""
        result = self.default.T[columns]
        if self.overrides:
            position, hit = self.__lookup(sites)
            result[hit] = self.__stacked[position[hit], :, columns[hit]]
        return result
