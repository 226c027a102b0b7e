import logging
import numpy as np

from concurrent.futures import ProcessPoolExecutor, wait, ALL_COMPLETED

from qwalk_equivalence.core import PRUNE_THRESHOLD, StepOperator, WaveFunction
from qwalk_equivalence.math_utils import accumulate

logger = logging.getLogger(__name__)

worker_step: StepOperator or None = None


def install_step(step: StepOperator):
    global worker_step
    worker_step = step


def scatter_chunk(labels: np.ndarray, amplitudes: np.ndarray) -> (np.ndarray, np.ndarray):
    rows, weights = worker_step.scatter(labels)
    return rows.reshape((-1, labels.shape[1])), (weights * amplitudes[:, np.newaxis]).reshape(-1)


class StepPool(ProcessPoolExecutor):
    """Worker processes that each hold one step operator, installed once when the process starts."""

    def __init__(self, max_workers: int, step: StepOperator):
        super().__init__(max_workers=max_workers, initializer=install_step, initargs=(step,))


def parallel_evolve(psi: WaveFunction, step: StepOperator, n_steps: int, workers: int) -> WaveFunction:
    """Evolves with the scatter spread over worker processes; chunks are gathered in label order,
    so the accumulation sees exactly the sequence of the single-process path."""
    labels, amplitudes = psi.labels, psi.amplitudes
    with StepPool(max_workers=workers, step=step) as pool:
        for step_index in range(n_steps):
            if labels.shape[0] == 0:
                break

            chunks = [chunk for chunk in np.array_split(np.arange(labels.shape[0]), workers) if chunk.size]
            futures = [pool.submit(scatter_chunk, labels[chunk], amplitudes[chunk]) for chunk in chunks]
            wait(futures, return_when=ALL_COMPLETED)

            results = [future.result() for future in futures]
            labels, amplitudes = accumulate(np.vstack([chunk_rows for chunk_rows, _ in results]),
                                            np.concatenate([chunk_amplitudes for _, chunk_amplitudes in results]),
                                            PRUNE_THRESHOLD)

            logger.debug("step %d: %d entries over %d chunks", step_index + 1, labels.shape[0], len(chunks))

    return WaveFunction._accumulated(psi.kind, labels, amplitudes)
