import math
import numpy as np

from numpy import ndarray as ndarr
from numba import njit

from qwalk_equivalence.exceptions import LabelError

# Dense bucketing is used while the bounding box of the labels stays within this many cells per entry.
DENSE_CELLS_PER_ENTRY = 16
DENSE_CELLS_SLACK = 1 << 16
MAX_KEY_SPAN = 1 << 62
MAX_COORDINATE = 1 << 62


@njit(cache=True)
def column_bounds(rows: ndarr) -> (ndarr, ndarr):
    mins = rows[0].copy()
    maxs = rows[0].copy()
    for index in range(1, rows.shape[0]):
        for column in range(rows.shape[1]):
            value = rows[index, column]
            if value < mins[column]:
                mins[column] = value
            elif value > maxs[column]:
                maxs[column] = value
    return mins, maxs


def mixed_radix(rows: ndarr) -> (ndarr, ndarr, int):
    mins, maxs = column_bounds(rows)
    # Python integers, so wide boxes are reported instead of wrapping around in int64.
    radices = [int(high) - int(low) + 1 for low, high in zip(mins.tolist(), maxs.tolist())]
    span = math.prod(radices)
    if span >= MAX_KEY_SPAN:
        raise LabelError(f"label coordinates span {span} cells, too wide for 64-bit keys")
    return mins, np.array(radices, dtype=np.int64), span


@njit(cache=True)
def encode_rows(rows: ndarr, mins: ndarr, radices: ndarr) -> ndarr:
    keys = np.empty(rows.shape[0], dtype=np.int64)
    for index in range(rows.shape[0]):
        key = 0
        for column in range(rows.shape[1]):
            key = key * radices[column] + (rows[index, column] - mins[column])
        keys[index] = key
    return keys


@njit(cache=True)
def decode_keys(keys: ndarr, mins: ndarr, radices: ndarr) -> ndarr:
    rows = np.empty((keys.shape[0], radices.shape[0]), dtype=np.int64)
    for index in range(keys.shape[0]):
        remainder = keys[index]
        for column in range(radices.shape[0] - 1, -1, -1):
            rows[index, column] = remainder % radices[column] + mins[column]
            remainder //= radices[column]
    return rows


@njit(cache=True)
def dense_group_sum(keys: ndarr, amplitudes: ndarr, span: int, threshold: float) -> (ndarr, ndarr):
    sums = np.zeros(span, dtype=np.complex128)
    touched = np.zeros(span, dtype=np.bool_)
    for index in range(keys.shape[0]):
        sums[keys[index]] += amplitudes[index]
        touched[keys[index]] = True

    count = 0
    for key in range(span):
        if touched[key] and abs(sums[key]) >= threshold:
            count += 1

    out_keys = np.empty(count, dtype=np.int64)
    out_amplitudes = np.empty(count, dtype=np.complex128)
    position = 0
    for key in range(span):
        if touched[key] and abs(sums[key]) >= threshold:
            out_keys[position] = key
            out_amplitudes[position] = sums[key]
            position += 1
    return out_keys, out_amplitudes


@njit(cache=True)
def sorted_group_sum(keys: ndarr, amplitudes: ndarr) -> (ndarr, ndarr):
    out_keys = np.empty(keys.shape[0], dtype=np.int64)
    out_amplitudes = np.empty(keys.shape[0], dtype=np.complex128)

    count = 0
    for index in range(keys.shape[0]):
        if count > 0 and out_keys[count - 1] == keys[index]:
            out_amplitudes[count - 1] += amplitudes[index]
        else:
            out_keys[count] = keys[index]
            out_amplitudes[count] = amplitudes[index]
            count += 1

    return out_keys[:count], out_amplitudes[:count]


def accumulate(rows: ndarr, amplitudes: ndarr, threshold: float) -> (ndarr, ndarr):
    """Sums amplitudes of equal label rows, returning rows in lexicographic order without pruned entries.

    Each bucket is summed in input order, so equal inputs always give bit-identical outputs.
    """
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    amplitudes = np.ascontiguousarray(amplitudes, dtype=np.complex128)
    if rows.shape[0] == 0:
        return rows.reshape((0, rows.shape[1])).copy(), amplitudes.copy()

    mins, radices, span = mixed_radix(rows)
    keys = encode_rows(rows, mins, radices)

    if span <= DENSE_CELLS_PER_ENTRY * rows.shape[0] + DENSE_CELLS_SLACK:
        unique_keys, summed = dense_group_sum(keys, amplitudes, span, threshold)
    else:
        order = np.argsort(keys, kind="stable")
        unique_keys, summed = sorted_group_sum(keys[order], amplitudes[order])
        kept = np.abs(summed) >= threshold
        unique_keys, summed = unique_keys[kept], summed[kept]

    return decode_keys(unique_keys, mins, radices), summed


@njit(cache=True)
def honeycomb_step(j: int, k: int, sigma: int) -> (int, int):
    difference = sigma - (j + k % 2) % 3

    sign = 0
    if difference > 0:
        sign = 1
    elif difference < 0:
        sign = -1

    parity = 1 if difference % 2 == 0 else -1
    row_sign = 1 if k % 2 == 0 else -1

    return j + parity * sign, k + row_sign * (1 - 2 * abs(sign))


@njit(cache=True)
def honeycomb_steps(j: ndarr, k: ndarr, sigma: ndarr) -> (ndarr, ndarr):
    out_j = np.empty(j.shape[0], dtype=np.int64)
    out_k = np.empty(j.shape[0], dtype=np.int64)
    for index in range(j.shape[0]):
        next_j, next_k = honeycomb_step(j[index], k[index], sigma[index])
        out_j[index] = next_j
        out_k[index] = next_k
    return out_j, out_k


def unitarity_deviation(matrix: ndarr) -> float:
    identity = np.eye(matrix.shape[0])
    left = np.max(np.abs(matrix.conj().T @ matrix - identity))
    right = np.max(np.abs(matrix @ matrix.conj().T - identity))
    return float(max(left, right))
