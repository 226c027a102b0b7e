import time
import logging
import numpy as np

from qwalk_equivalence.coins import TransitionField
from qwalk_equivalence.core import StepOperator, WaveFunction, apply_step, evolve, norm_sq
from qwalk_equivalence.grids import ProbabilityGrid
from qwalk_equivalence.lattices import Lattice

logger = logging.getLogger(__name__)


class Pipeline:
    """Evolves one walk model on one lattice and hands out its probability grids."""

    lattice: Lattice
    model: str
    field: TransitionField
    state: WaveFunction = None
    steps_done: int = 0
    runtime: float = 0.0

    __step: StepOperator

    def __init__(self, lattice: Lattice, model: str, field: TransitionField):
        self.lattice = lattice
        self.model = model
        self.field = field
        self.__step = lattice.step(model, field)

    @property
    def step(self) -> StepOperator:
        return self.__step

    def fit(self, initial: WaveFunction = None, n_steps: int = 20, workers_count: int = 1, save_steps: bool = False,
            step_title: str = "step"):
        """Runs n_steps more steps, from `initial` if given, otherwise from the current state.

        With `save_steps` the native grid after every step is written to `{step_title}-{step number}.csv`.
        """
        if initial is not None:
            self.state = initial
            self.steps_done = 0
        elif self.state is None:
            self.state = self.lattice.standard_initial_state(self.model)

        initial_norm = norm_sq(self.state)
        started = time.perf_counter()

        if save_steps:
            for _ in range(n_steps):
                self.state = apply_step(self.state, self.__step)
                self.steps_done += 1
                self.native_grid.save(f"{step_title}-{self.steps_done}.csv")
        else:
            self.state = evolve(self.state, self.__step, n_steps, workers=workers_count)
            self.steps_done += n_steps

        self.runtime += time.perf_counter() - started
        logger.info("%s %s walk: %d steps, support %d, norm drift %.3e, %.3fs", self.lattice.name, self.model,
                    self.steps_done, len(self.state), abs(norm_sq(self.state) - initial_norm), self.runtime)
        return self

    @property
    def norm_drift(self) -> float:
        return float(np.abs(norm_sq(self.state) - 1.0))

    @property
    def native_grid(self) -> ProbabilityGrid:
        return self.lattice.native_grid(self.state)

    @property
    def cross_grid(self) -> ProbabilityGrid:
        return self.lattice.cross_grid(self.state)

    @property
    def site_grid(self) -> ProbabilityGrid:
        """Site probabilities, read through the cross projectors for the scattering walk."""
        return self.native_grid if self.state.kind is self.lattice.coined_kind else self.cross_grid
