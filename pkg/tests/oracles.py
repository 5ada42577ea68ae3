"""Independent oracles used by the property tests.

They share no code with the library beyond the data types: brute-force
enumeration, numpy linear algebra and networkx graph enumeration.
"""

from __future__ import annotations

import itertools
import random

import networkx as nx
import numpy as np

from divforge.picard import DivisorClass, SurfaceModel


def random_class(rng: random.Random, S: SurfaceModel, lo: int = -6, hi: int = 6) -> DivisorClass:
    return DivisorClass.of({g.name: rng.randint(lo, hi) for g in S.generators})


def gram_numpy(S: SurfaceModel, classes) -> np.ndarray:
    """Intersection matrix of ``classes`` through an explicit numpy Gram product."""
    names = S.generator_names
    M = np.array(S.gram, dtype=np.int64)
    V = np.array([[D[n] for n in names] for D in classes], dtype=np.int64)
    return V @ M @ V.T


def negative_definite_numpy(G) -> bool:
    A = np.array(G, dtype=float)
    return bool(np.all(np.linalg.eigvalsh(A) < -1e-9))


def connected_graphs(max_nodes: int = 5):
    """All connected simple graphs with 1..max_nodes vertices, up to isomorphism."""
    for g in nx.graph_atlas_g():
        n = g.number_of_nodes()
        if 1 <= n <= max_nodes and nx.is_connected(g):
            yield g


def self_intersection_choices(n: int, lo: int = -4, hi: int = -1):
    return itertools.product(range(lo, hi + 1), repeat=n)


def is_anti_nef(G: np.ndarray, z) -> bool:
    return bool(np.all(G @ np.asarray(z) <= 0))


def brute_force_is_minimal(G: np.ndarray, z) -> bool:
    """``z`` is anti-nef and no other positive anti-nef cycle lies below it.

    Anti-nef cycles with full support are closed under componentwise minimum,
    so this certifies ``z`` as the smallest one.
    """
    z = np.asarray(z, dtype=np.int64)
    if np.any(z < 1) or not is_anti_nef(G, z):
        return False
    # every integer vector with 1 <= w <= z, one per column
    W = np.indices(tuple(int(c) for c in z)).reshape(len(z), -1) + 1
    anti_nef = np.all(G @ W <= 0, axis=0)
    return int(anti_nef.sum()) == 1  # only z itself


# Dynkin diagrams as edge lists on vertices 0..n-1; the fundamental cycle is
# the highest root, whose coefficients are listed alongside.
def ade_graphs():
    out = []
    for n in range(1, 9):
        out.append((f"A{n}", n, [(i, i + 1) for i in range(n - 1)], [1] * n))
    for n in range(4, 9):
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
        coeffs = [1] + [2] * (n - 3) + [1, 1]
        out.append((f"D{n}", n, edges, coeffs))
    # E_n: chain 0-1-...-(n-2) with vertex n-1 attached to vertex 2 (vertex 4 for E8)
    highest = {6: [1, 2, 3, 2, 1, 2], 7: [2, 3, 4, 3, 2, 1, 2], 8: [2, 3, 4, 5, 6, 4, 2, 3]}
    for n in (6, 7, 8):
        edges = [(i, i + 1) for i in range(n - 2)]
        edges.append((2 if n != 8 else 4, n - 1))
        out.append((f"E{n}", n, edges, highest[n]))
    return out
