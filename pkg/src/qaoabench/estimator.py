"""Objective estimates and solution-quality metrics from measurements.

The experiment-faithful pipeline feeds the optimizer sampled estimates only
(sampling noise included); exact expectations computed straight from
amplitudes exist for tests, diagnostics, and the simulation-only shortcut.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph, brute_force_maxcut, cut_values_table
from .simulator import probabilities


@dataclass(frozen=True)
class SampleEstimate:
    """Sample mean of the cut with its standard error."""

    mean_cut: float
    n_samples: int
    std_error: float


def estimate_cut(samples: np.ndarray, g: Graph,
                 cut_table: np.ndarray | None = None) -> SampleEstimate:
    """Mean cut over sampled basis states (integer codes) with std error.

    Passing a precomputed cut_values_table(g) avoids rebuilding the lookup
    in tight optimization loops.
    """
    if cut_table is None:
        cut_table = cut_values_table(g)
    cuts = cut_table[np.asarray(samples, dtype=np.int64)].astype(np.float64)
    n = len(cuts)
    if n == 0:
        raise ValueError("no samples")
    std = cuts.std(ddof=1) if n > 1 else 0.0
    return SampleEstimate(float(cuts.mean()), n, float(std / np.sqrt(n)))


def exact_cut_expectation(state_or_probs: np.ndarray, g: Graph,
                          cut_table: np.ndarray | None = None) -> float:
    """<cut> = sum over edges of (1 - <Z_i Z_j>)/2, straight from amplitudes.

    Equivalently the probability-weighted mean of the per-basis-state cut,
    which is how it is computed here. Accepts a state vector or an already
    squared probability distribution (e.g. an ensemble average).
    """
    probs = state_or_probs
    if np.iscomplexobj(probs):
        probs = probabilities(probs)
    if cut_table is None:
        cut_table = cut_values_table(g)
    return float(probs @ cut_table)


def approximation_ratio(est: float, g: Graph, k_max: int | None = None) -> float:
    """Estimated cut divided by the brute-force optimum."""
    if k_max is None:
        k_max, _ = brute_force_maxcut(g)
    return est / k_max
