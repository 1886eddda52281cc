"""Brute-force reference implementations, written without the package's code paths."""

from __future__ import annotations

import itertools

import networkx as nx
import numpy as np


def all_pairs_distances(n: int, edges) -> np.ndarray:
    """Floyd-Warshall; unreachable pairs get a large value."""
    big = 10**9
    D = np.full((n, n), big, dtype=np.int64)
    np.fill_diagonal(D, 0)
    for u, v in edges:
        D[u, v] = D[v, u] = 1
    for k in range(n):
        D = np.minimum(D, D[:, k : k + 1] + D[k : k + 1, :])
    return D


def proper(edges, labels) -> bool:
    return all(labels[u] != labels[v] for u, v in edges)


def k_colorable(n: int, edges, k: int) -> bool:
    """Backtracking search, vertices in index order."""
    nbrs = [[] for _ in range(n)]
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    color = [-1] * n

    def go(i: int) -> bool:
        if i == n:
            return True
        for c in range(k):
            if all(color[w] != c for w in nbrs[i]):
                color[i] = c
                if go(i + 1):
                    return True
        color[i] = -1
        return False

    return go(0)


def chromatic_number(n: int, edges) -> int:
    k = 1 if n else 0
    while not k_colorable(n, edges, k):
        k += 1
    return k


def to_nx(n: int, edges) -> nx.Graph:
    H = nx.Graph()
    H.add_nodes_from(range(n))
    H.add_edges_from(edges)
    return H


def maximal_independent_sets(n: int, edges) -> list[frozenset[int]]:
    """Maximal cliques of the complement."""
    return [frozenset(c) for c in nx.find_cliques(nx.complement(to_nx(n, edges)))]


def is_mis(n: int, edges, members) -> bool:
    S = {v for v in range(n) if members[v] == 1}
    return S in set(maximal_independent_sets(n, edges))


def has_perfect_matching(n: int, edges) -> bool:
    if n % 2:
        return False
    M = nx.max_weight_matching(to_nx(n, edges), maxcardinality=True)
    return 2 * len(M) == n


def matching_from_ports(adj, labels):
    """Edge set chosen by port labels, or None if some choice is not mutual."""
    chosen = set()
    for x, lab in enumerate(labels):
        if not 1 <= lab <= len(adj[x]):
            return None
        y = adj[x][lab - 1]
        if adj[y][labels[y] - 1] != x if 1 <= labels[y] <= len(adj[y]) else True:
            return None
        chosen.add(frozenset((x, y)))
    return chosen


def small_connected_graphs(max_n: int = 6, max_degree: int = 3):
    """All connected graphs up to isomorphism with ``1 <= n <= max_n`` and degree bound."""
    for H in nx.graph_atlas_g():
        n = H.number_of_nodes()
        if n == 0 or n > max_n:
            continue
        if not nx.is_connected(H):
            continue
        if max((d for _, d in H.degree()), default=0) > max_degree:
            continue
        yield n, sorted(tuple(sorted(e)) for e in H.edges())


def smallest_period(bits, p_max: int):
    """Period scan by string comparison; ``bits`` may be any sequence of 0/1."""
    s = "".join("1" if b else "0" for b in bits)
    for p in range(1, p_max + 1):
        if s[p:] == s[:-p]:
            return p
    return None


def labelings(alphabet, n: int):
    return itertools.product(alphabet, repeat=n)
