"""Independent brute-force oracles shared by the unit and acceptance tests.

These deliberately avoid the library's dynamic programming paths: label
sequences are enumerated exhaustively and scored directly.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from statviz.crf import LABELS, N_LABELS, START_MASK, TRANS_MASK


@lru_cache(maxsize=16)
def all_valid_sequences(length: int) -> np.ndarray:
    """Every valid-IOB label-index sequence of the given length, lexicographic."""
    starts = [i for i in range(N_LABELS) if np.isfinite(START_MASK[i])]
    seqs = [[i] for i in starts]
    for _ in range(length - 1):
        seqs = [s + [j] for s in seqs for j in range(N_LABELS) if np.isfinite(TRANS_MASK[s[-1], j])]
    return np.array(seqs, dtype=np.intp)


def score_all_sequences(emissions: np.ndarray, trans: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(sequences, scores) for every valid sequence under emissions + transitions."""
    t = emissions.shape[0]
    seqs = all_valid_sequences(t)
    scores = emissions[np.arange(t)[None, :], seqs].sum(axis=1)
    if t > 1:
        scores = scores + trans[seqs[:, :-1], seqs[:, 1:]].sum(axis=1)
    return seqs, scores


def brute_force_decode(emissions: np.ndarray, trans: np.ndarray) -> tuple[tuple[str, ...], float]:
    """Exhaustive argmax; first (lexicographically smallest) sequence wins ties."""
    seqs, scores = score_all_sequences(emissions, trans)
    best = int(np.argmax(scores))  # first occurrence of the max
    return tuple(LABELS[j] for j in seqs[best]), float(scores[best])


def brute_force_log_partition(emissions: np.ndarray, trans: np.ndarray) -> float:
    _, scores = score_all_sequences(emissions, trans)
    m = scores.max()
    return float(m + np.log(np.exp(scores - m).sum()))


def brute_force_marginals(emissions: np.ndarray, trans: np.ndarray) -> np.ndarray:
    seqs, scores = score_all_sequences(emissions, trans)
    m = scores.max()
    probs = np.exp(scores - m)
    probs /= probs.sum()
    t = emissions.shape[0]
    out = np.zeros((t, N_LABELS))
    for pos in range(t):
        np.add.at(out[pos], seqs[:, pos], probs)
    return out


def brute_force_line_breaks(widths: list[float], space: float, line_count: int):
    """Minimum-raggedness line breaking by exhausting all break placements.

    Returns (best_cost, best_lines) where lines are (start, end) word index
    ranges. Cost = sum over lines of (max line width - line width)^2.
    """
    n = len(widths)

    def line_width(i: int, j: int) -> float:
        return sum(widths[i:j]) + space * (j - i - 1)

    best_cost, best_lines = None, None
    for breaks in combinations(range(1, n), line_count - 1):
        cuts = [0, *breaks, n]
        lws = [line_width(cuts[k], cuts[k + 1]) for k in range(line_count)]
        mx = max(lws)
        cost = sum((mx - w) ** 2 for w in lws)
        if best_cost is None or cost < best_cost - 1e-12:
            best_cost, best_lines = cost, [(cuts[k], cuts[k + 1]) for k in range(line_count)]
    return best_cost, best_lines
