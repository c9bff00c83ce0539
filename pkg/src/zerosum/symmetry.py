"""Orbit computations on multisets under a group of automorphisms.

Orbits are found as connected components of the graph whose edges join a
multiset to its image under each generator, so only generators are needed.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import SymmetryDisabled
from .groups import SYMMETRY_CAP, AbelianGroup, automorphism_generators, translation_generators

CANON_TABLE_LIMIT = 1 << 22


def _components(n_nodes: int, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n_nodes, n_nodes))
    return connected_components(graph, directed=False)[1]


def _row_keys(rows: np.ndarray) -> np.ndarray:
    rows = np.ascontiguousarray(rows.astype(np.uint8))
    return rows.view(np.dtype((np.void, rows.shape[1]))).ravel()


def orbit_labels(rows: np.ndarray, gens: list[tuple[int, ...]]) -> np.ndarray:
    """Component label per row; rows are sorted multisets (one per row, all distinct)."""
    n = len(rows)
    if n == 0 or not gens or rows.shape[1] == 0:
        return np.arange(n)
    keys = _row_keys(rows)
    order = np.argsort(keys, kind="stable")
    skeys = keys[order]
    src, dst = [], []
    for g in gens:
        img = np.sort(np.asarray(g, dtype=np.int64)[rows], axis=1)
        pos = np.searchsorted(skeys, _row_keys(img))
        src.append(np.arange(n))
        dst.append(order[pos])
    return _components(n, np.concatenate(src), np.concatenate(dst))


@lru_cache(maxsize=256)
def canonical_prefix_tables(
    G: AbelianGroup, depth: int, cap: int = SYMMETRY_CAP, affine: bool = False
) -> tuple[np.ndarray, ...]:
    """Tables marking orbit-minimal sorted prefixes of length 1..depth.

    ``tables[k][code]`` is 1 when the sorted (k+1)-tuple with base-|G| code
    ``code`` is lexicographically least in its orbit.  With ``affine`` the
    translations join the automorphisms; only sound when every admissible
    length is a multiple of exp(G).  Empty when there is nothing to act.
    """
    try:
        gens = automorphism_generators(G, cap)
    except SymmetryDisabled:
        gens = []
    if affine:
        gens = gens + translation_generators(G)
    if not gens:
        return ()
    n = G.order
    tables = []
    for k in range(1, depth + 1):
        if n**k > CANON_TABLE_LIMIT:
            break
        rows = np.array(list(itertools.combinations_with_replacement(range(n), k)), dtype=np.int64)
        labels = orbit_labels(rows, gens)
        # rows are in lexicographic order, so the first row seen per label is the orbit minimum
        _, first = np.unique(labels, return_index=True)
        weights = n ** np.arange(k - 1, -1, -1, dtype=np.int64)
        table = np.zeros(n**k, dtype=np.uint8)
        table[rows[first] @ weights] = 1
        tables.append(table)
    return tuple(tables)


def multiset_count(n: int, k: int) -> int:
    return math.comb(n + k - 1, k)


def orbit_representatives(G: AbelianGroup, rows: np.ndarray, cap: int = SYMMETRY_CAP) -> np.ndarray:
    """Indices of rows that are lexicographically least (as sorted tuples) in their orbit.

    ``rows`` must be closed under the automorphism group (e.g. all zero-sum
    multisets of a given length).  Without symmetry every row is returned.
    """
    try:
        gens = automorphism_generators(G, cap)
    except SymmetryDisabled:
        return np.arange(len(rows))
    labels = orbit_labels(rows, gens)
    order = np.lexsort(rows.T[::-1])
    _, first = np.unique(labels[order], return_index=True)
    return np.sort(order[first])
