import numpy as np

from abc import ABC, abstractmethod
from numpy import ndarray as ndarr

from qwalk_equivalence.coins import TransitionField
from qwalk_equivalence.core import (BasisLabel, ConjugatedStep, LabelKind, LatticeMismatchError, ParameterError,
                                    StepOperator, WaveFunction)
from qwalk_equivalence.grids import ProbabilityGrid


class Lattice(ABC):
    """Both walk formulations on one lattice, the E map between their bases and the projections.

    E sends every scattering state incoming to a site to a coin state at that site.
    """

    name: str
    dimension: int
    site_width: int
    coined_kind: LabelKind
    scattering_kind: LabelKind
    bond_orientations: tuple

    @abstractmethod
    def coined_step(self, field: TransitionField) -> StepOperator:
        pass

    @abstractmethod
    def scattering_step(self, field: TransitionField) -> StepOperator:
        pass

    @abstractmethod
    def to_coined_rows(self, rows: ndarr) -> ndarr:
        pass

    @abstractmethod
    def to_scattering_rows(self, rows: ndarr) -> ndarr:
        pass

    @abstractmethod
    def bond_partner_rows(self, rows: ndarr) -> ndarr:
        """The other scattering state living on the same bond as each given one."""
        pass

    @abstractmethod
    def bond_keys(self, rows: ndarr) -> ndarr:
        """(j, k, orientation code) of the bond carrying each scattering state."""
        pass

    @abstractmethod
    def site_positions(self, sites: ndarr) -> (ndarr, ndarr):
        pass

    @abstractmethod
    def bond_positions(self, keys: ndarr) -> (ndarr, ndarr):
        pass

    @abstractmethod
    def standard_initial_state(self, model: str) -> WaveFunction:
        pass

    def kind(self, model: str) -> LabelKind:
        if model == "coined":
            return self.coined_kind
        if model == "scattering":
            return self.scattering_kind
        raise ParameterError(f"model must be 'coined' or 'scattering', got '{model}'")

    def step(self, model: str, field: TransitionField) -> StepOperator:
        return self.coined_step(field) if self.kind(model) is self.coined_kind else self.scattering_step(field)

    def window(self, model: str, radius: int) -> list:
        return self.kind(model).window(radius)

    def _require(self, psi: WaveFunction, kind: LabelKind) -> None:
        if psi.kind is not kind:
            raise LatticeMismatchError(kind.name, psi.kind.name)

    def map_e(self, psi: WaveFunction) -> WaveFunction:
        self._require(psi, self.scattering_kind)
        return psi.relabel(self.coined_kind, self.to_coined_rows)

    def map_e_dagger(self, psi: WaveFunction) -> WaveFunction:
        self._require(psi, self.coined_kind)
        return psi.relabel(self.scattering_kind, self.to_scattering_rows)

    def map_label_e(self, label: BasisLabel) -> BasisLabel:
        if label.kind is not self.scattering_kind:
            raise LatticeMismatchError(self.scattering_kind.name, label.kind.name)
        return BasisLabel(self.coined_kind, tuple(self.to_coined_rows(np.array([label.coords]))[0]))

    def map_label_e_dagger(self, label: BasisLabel) -> BasisLabel:
        if label.kind is not self.coined_kind:
            raise LatticeMismatchError(self.coined_kind.name, label.kind.name)
        return BasisLabel(self.scattering_kind, tuple(self.to_scattering_rows(np.array([label.coords]))[0]))

    def conjugated_coined_step(self, field: TransitionField) -> StepOperator:
        """E† U_c E, acting on scattering labels."""
        return ConjugatedStep(self.coined_step(field), self.scattering_kind, self.to_coined_rows,
                              self.to_scattering_rows)

    def bond_partner(self, label: BasisLabel) -> BasisLabel:
        if label.kind is not self.scattering_kind:
            raise LatticeMismatchError(self.scattering_kind.name, label.kind.name)
        return BasisLabel(self.scattering_kind, tuple(self.bond_partner_rows(np.array([label.coords]))[0]))

    def site_projector(self, site: tuple) -> list:
        return [BasisLabel(self.coined_kind, coords) for coords in self._site_label_coords(site)]

    def bond_projector(self, label: BasisLabel) -> list:
        """The two scattering states on the bond of the given state, sorted."""
        return sorted({label, self.bond_partner(label)})

    def cross_site_projector(self, site: tuple) -> list:
        """E† P_c E: read coined site probabilities off a scattering state."""
        return sorted(self.map_label_e_dagger(label) for label in self.site_projector(site))

    def cross_bond_projector(self, label: BasisLabel) -> list:
        """E P_s E†: read scattering bond probabilities off a coined state."""
        return sorted(self.map_label_e(member) for member in self.bond_projector(label))

    def _site_label_coords(self, site: tuple) -> list:
        sigma_column, values = next(iter(self.coined_kind.sigma_columns.items()))
        coords = []
        for sigma in values:
            row = list(site)
            row.insert(sigma_column, sigma)
            coords.append(tuple(row))
        return coords

    def site_probabilities(self, psi: WaveFunction) -> ProbabilityGrid:
        self._require(psi, self.coined_kind)
        sites = psi.labels[:, self.coined_kind.site_columns]
        if self.site_width == 1:
            sites = np.column_stack((sites, np.zeros_like(sites)))
        keys = np.column_stack((sites, np.zeros(sites.shape[0], dtype=np.int64)))
        return ProbabilityGrid.from_entries("site", keys, np.abs(psi.amplitudes) ** 2, ("",),
                                            lambda unique: self.site_positions(unique[:, :2]))

    def bond_probabilities(self, psi: WaveFunction) -> ProbabilityGrid:
        self._require(psi, self.scattering_kind)
        return ProbabilityGrid.from_entries("bond", self.bond_keys(psi.labels), np.abs(psi.amplitudes) ** 2,
                                            self.bond_orientations, self.bond_positions)

    def cross_site_probabilities(self, psi: WaveFunction) -> ProbabilityGrid:
        """Coined-model site probabilities recovered from a state evolved with the scattering walk."""
        return self.site_probabilities(self.map_e(psi))

    def cross_bond_probabilities(self, psi: WaveFunction) -> ProbabilityGrid:
        """Scattering-model bond probabilities recovered from a state evolved with the coined walk."""
        return self.bond_probabilities(self.map_e_dagger(psi))

    def native_grid(self, psi: WaveFunction) -> ProbabilityGrid:
        if psi.kind is self.coined_kind:
            return self.site_probabilities(psi)
        return self.bond_probabilities(psi)

    def cross_grid(self, psi: WaveFunction) -> ProbabilityGrid:
        if psi.kind is self.coined_kind:
            return self.cross_bond_probabilities(psi)
        return self.cross_site_probabilities(psi)
