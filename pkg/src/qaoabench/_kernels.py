"""Numba fast paths for the batched state-vector hot loops.

Every kernel operates on a C-contiguous (R, 2^n) complex128 batch, one row
per noise realization, and matches the pure-numpy reference in
simulator.py to floating-point rounding. Rows are processed in a fixed
serial order so results are bitwise reproducible. When numba is missing
the simulator silently falls back to the reference implementations.

The per-cycle noise kernel applies, for each qubit in index order, a
one-sided dephasing phase e^{i eps} on the |1> amplitudes (equal to the
Z rotation up to an unobservable global phase) followed by the
amplitude-damping jump/no-jump branch; the branch renormalization is
folded into the same pass over the row.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAS_NUMBA = False


def _jit(func):
    if not HAS_NUMBA:
        return func
    return numba.njit(cache=True, fastmath=False)(func)


@_jit
def kernel_h(states: np.ndarray, n: int, q: int) -> None:
    inv = 1.0 / math.sqrt(2.0)
    step = 1 << q
    dim = 1 << n
    for r in range(states.shape[0]):
        row = states[r]
        for base in range(0, dim, 2 * step):
            for off in range(base, base + step):
                a0 = row[off]
                a1 = row[off + step]
                row[off] = (a0 + a1) * inv
                row[off + step] = (a0 - a1) * inv


@_jit
def kernel_rx(states: np.ndarray, n: int, q: int, c: float, s: float) -> None:
    step = 1 << q
    dim = 1 << n
    for r in range(states.shape[0]):
        row = states[r]
        for base in range(0, dim, 2 * step):
            for off in range(base, base + step):
                a0 = row[off]
                a1 = row[off + step]
                row[off] = c * a0 - 1j * s * a1
                row[off + step] = -1j * s * a0 + c * a1


@_jit
def kernel_zzphase(states: np.ndarray, n: int, qa: int, qb: int,
                   ph_eq: complex) -> None:
    ph_ne = ph_eq.conjugate()
    ma = 1 << qa
    mb = 1 << qb
    dim = 1 << n
    for r in range(states.shape[0]):
        row = states[r]
        for z in range(dim):
            if ((z & ma) != 0) == ((z & mb) != 0):
                row[z] *= ph_eq
            else:
                row[z] *= ph_ne


@_jit
def kernel_swap(states: np.ndarray, n: int, qa: int, qb: int) -> None:
    ma = 1 << qa
    mb = 1 << qb
    dim = 1 << n
    for r in range(states.shape[0]):
        row = states[r]
        for z in range(dim):
            if (z & ma) != 0 and (z & mb) == 0:
                zz = (z ^ ma) | mb
                tmp = row[z]
                row[z] = row[zz]
                row[zz] = tmp


@_jit
def kernel_noise_cycle(states: np.ndarray, n: int, eps: np.ndarray,
                       us: np.ndarray, p_damp: float) -> None:
    """One noise op per qubit, in qubit order, for every row of the batch.

    eps and us are (R, n): the dephasing angles and the uniform branch
    draws for this clock cycle. The jump probability for qubit q is
    p_damp * P(q = 1) evaluated on the current (already partially noised,
    normalized) row, which makes the ensemble average channel-exact.
    """
    dim = 1 << n
    s_damp = math.sqrt(1.0 - p_damp)
    for r in range(states.shape[0]):
        row = states[r]
        for q in range(n):
            step = 1 << q
            ph = cmath.exp(1j * eps[r, q])
            if p_damp > 0.0:
                p1 = 0.0
                for base in range(0, dim, 2 * step):
                    for off in range(base + step, base + 2 * step):
                        a = row[off]
                        p1 += a.real * a.real + a.imag * a.imag
                if us[r, q] < p_damp * p1:
                    # jump: |1> amplitude moves to |0>, renormalized
                    mult = ph / math.sqrt(p1)
                    for base in range(0, dim, 2 * step):
                        for off in range(base, base + step):
                            row[off] = row[off + step] * mult
                            row[off + step] = 0.0
                else:
                    inv = 1.0 / math.sqrt(1.0 - p_damp * p1)
                    mult = ph * (s_damp * inv)
                    for base in range(0, dim, 2 * step):
                        for off in range(base, base + step):
                            row[off] *= inv
                            row[off + step] *= mult
            elif eps[r, q] != 0.0:
                for base in range(0, dim, 2 * step):
                    for off in range(base + step, base + 2 * step):
                        row[off] *= ph
