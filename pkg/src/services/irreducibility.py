"""Irreducibility of pure-state ensembles: eta(s) and zeta(s) over complete paths.

eta(s) is the best value of min_i |<psi_{x_i}|psi_{x_{i+1}}>| / N over walks
x_1..x_N that visit every state. The search is a bottleneck dynamic program
over (visited subset, last state) layered by walk length, in the style of a
bitmask Held-Karp recursion.
"""

import itertools
import logging
from typing import Optional

import numpy as np

from ..models.ensemble import CompletePath, Ensemble, IrreducibilityResult
from ..utils.errors import InvalidParams
from ..utils.tolerances import TAU_OVERLAP

logger = logging.getLogger(__name__)

# Subset tables grow as 2^K; beyond this the search gets slow.
PRACTICAL_MAX_STATES = 12


def overlap_matrix(s: Ensemble) -> np.ndarray:
    """Symmetric |<psi_i|psi_j>| with entries below TAU_OVERLAP set to exactly 0.

    Raises:
        MixedStates: If the ensemble is not pure.
    """
    vecs = np.array(s.pure_vectors())
    overlaps = np.abs(vecs.conj() @ vecs.T)
    overlaps = np.maximum(overlaps, overlaps.T)
    overlaps[overlaps < TAU_OVERLAP] = 0.0
    return overlaps


def _connected(adjacency: np.ndarray) -> bool:
    k = adjacency.shape[0]
    seen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for j in np.flatnonzero(adjacency[i]):
            if j not in seen:
                seen.add(int(j))
                frontier.append(int(j))
    return len(seen) == k


def _resolve_n_max(k: int, n_max: Optional[int]) -> int:
    if n_max is None:
        return k * k
    if isinstance(n_max, bool) or not isinstance(n_max, (int, np.integer)) or n_max < 1:
        raise InvalidParams(f"n_max must be a positive integer, got {n_max!r}")
    return int(n_max)


def eta(s: Ensemble, n_max: Optional[int] = None) -> IrreducibilityResult:
    """Maximize bottleneck / length over complete walks of length <= n_max.

    Args:
        s: Pure-state ensemble.
        n_max: Longest walk considered; defaults to K^2.

    Returns:
        IrreducibilityResult whose witness is the shortest optimal walk, ending
        at the lowest state index among ties and read in whichever direction
        is lexicographically smaller. A disconnected overlap graph gives
        eta = 0 and an empty witness. A single state gives eta = 1 by convention.
    """
    overlaps = overlap_matrix(s)
    k = len(s)
    n_max = _resolve_n_max(k, n_max)
    min_p = float(s.probabilities.min())
    labels = s.labels

    if k == 1:
        return IrreducibilityResult(1.0, min_p, min_p, CompletePath((labels[0],)), 1.0, n_max)
    if k > PRACTICAL_MAX_STATES:
        logger.warning("eta over %d states needs 2^%d subset tables", k, k)

    adjacency = overlaps.copy()
    np.fill_diagonal(adjacency, 0.0)
    if not _connected(adjacency > 0):
        logger.debug("overlap graph of %d states is disconnected", k)
        return IrreducibilityResult(0.0, 0.0, min_p, CompletePath(()), 0.0, n_max)

    n_masks = 1 << k
    full = n_masks - 1
    rows = np.arange(n_masks)
    best = np.full((n_masks, k), -1.0)
    for i in range(k):
        best[1 << i, i] = np.inf
    edge_max = adjacency.max()

    parents: list[tuple[np.ndarray, np.ndarray]] = []
    best_eta, best_len, best_last, best_bottleneck = 0.0, 0, -1, 0.0
    for n in range(2, n_max + 1):
        new = np.full((n_masks, k), -1.0)
        par_last = np.full((n_masks, k), -1, dtype=np.int8)
        par_same = np.zeros((n_masks, k), dtype=bool)
        for j in range(k):
            bit = 1 << j
            cand = np.minimum(best, adjacency[:, j][np.newaxis, :])
            cand[:, j] = -1.0
            src_last = np.argmax(cand, axis=1)
            src_val = cand[rows, src_last]
            targets = rows[(rows & bit) != 0]
            revisit = src_val[targets]
            first_visit = src_val[targets ^ bit]
            take_first = first_visit >= revisit
            new[targets, j] = np.where(take_first, first_visit, revisit)
            par_last[targets, j] = np.where(
                take_first, src_last[targets ^ bit], src_last[targets]
            )
            par_same[targets, j] = ~take_first
        best = new
        parents.append((par_last, par_same))

        finals = best[full]
        last = int(np.argmax(finals))
        if finals[last] > 0 and finals[last] / n > best_eta:
            best_eta, best_len, best_last, best_bottleneck = finals[last] / n, n, last, finals[last]
        if best_eta > 0 and edge_max / (n + 1) <= best_eta:
            break

    if best_len == 0:
        return IrreducibilityResult(0.0, 0.0, min_p, CompletePath(()), 0.0, n_max)

    sequence = []
    mask, last = full, best_last
    for n in range(best_len, 1, -1):
        par_last, par_same = parents[n - 2]
        sequence.append(last)
        previous = int(par_last[mask, last])
        if not par_same[mask, last]:
            mask ^= 1 << last
        last = previous
    sequence.append(last)
    walk = min(tuple(reversed(sequence)), tuple(sequence))
    path = CompletePath(tuple(labels[i] for i in walk))
    return IrreducibilityResult(
        float(best_eta), float(best_eta) * min_p, min_p, path, float(best_bottleneck), n_max
    )


def zeta(s: Ensemble, n_max: Optional[int] = None) -> IrreducibilityResult:
    """zeta(s) = eta(s) * min_x p(x); the result carries both."""
    return eta(s, n_max)


def eta_exhaustive(s: Ensemble, n_max: int) -> float:
    """Brute-force eta over every walk of length <= n_max (immediate repeats included).

    Exponential in n_max; intended as an oracle for small ensembles.
    """
    overlaps = overlap_matrix(s)
    k = len(s)
    if k == 1:
        return 1.0
    best = 0.0
    for n in range(k, n_max + 1):
        for walk in itertools.product(range(k), repeat=n):
            if len(set(walk)) < k:
                continue
            bottleneck = min(overlaps[a, b] for a, b in zip(walk, walk[1:]))
            if bottleneck > 0 and bottleneck / n > best:
                best = bottleneck / n
    return float(best)


def path_value(s: Ensemble, path: CompletePath) -> float:
    """bottleneck / length of an explicit complete path."""
    overlaps = overlap_matrix(s)
    index = {label: i for i, label in enumerate(s.labels)}
    walk = [index[label] for label in path.sequence]
    if not path.covers(s.labels):
        raise InvalidParams("path does not visit every ensemble label")
    if len(walk) == 1:
        return 1.0
    return float(min(overlaps[a, b] for a, b in zip(walk, walk[1:])) / len(walk))
