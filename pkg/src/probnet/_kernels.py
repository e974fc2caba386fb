"""Compiled inner loops over CSR adjacency (``indptr``, ``indices``)."""

import numpy as np
from numba import njit


@njit(cache=True)
def bfs_path_totals(indptr, indices, n):
    """Sum of hop distances and count over reachable ordered pairs ``i != j``."""
    dist = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    total = 0
    reached = 0
    for s in range(n):
        dist[:] = -1
        dist[s] = 0
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            v = queue[head]
            head += 1
            dv = dist[v]
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue[tail] = w
                    tail += 1
                    total += dv + 1
                    reached += 1
    return total, reached


@njit(cache=True)
def bfs_distances(indptr, indices, n, s):
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    dist[s] = 0
    queue[0] = s
    head = 0
    tail = 1
    while head < tail:
        v = queue[head]
        head += 1
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue[tail] = w
                tail += 1
    return dist


@njit(cache=True)
def brandes(indptr, indices, n):
    """Unweighted Brandes betweenness summed over ordered source/target pairs.

    Per-source dependencies are added to the total in ascending source order.
    """
    bc = np.zeros(n, dtype=np.float64)
    dist = np.empty(n, dtype=np.int64)
    sigma = np.empty(n, dtype=np.float64)
    delta = np.empty(n, dtype=np.float64)
    stack = np.empty(n, dtype=np.int64)
    for s in range(n):
        dist[:] = -1
        sigma[:] = 0.0
        delta[:] = 0.0
        dist[s] = 0
        sigma[s] = 1.0
        stack[0] = s
        head = 0
        tail = 1
        # The BFS queue doubles as the settle order.
        while head < tail:
            v = stack[head]
            head += 1
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    stack[tail] = w
                    tail += 1
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
        for pos in range(tail - 1, 0, -1):
            w = stack[pos]
            coeff = (1.0 + delta[w]) / sigma[w]
            for k in range(indptr[w], indptr[w + 1]):
                v = indices[k]
                if dist[v] == dist[w] - 1:
                    delta[v] += sigma[v] * coeff
            bc[w] += delta[w]
    return bc


@njit(cache=True)
def clustering_counts(indptr, indices, n):
    """Per node: connected ordered neighbor pairs, and degree."""
    links = np.zeros(n, dtype=np.int64)
    degree = np.zeros(n, dtype=np.int64)
    mark = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        degree[i] = indptr[i + 1] - indptr[i]
        for k in range(indptr[i], indptr[i + 1]):
            mark[indices[k]] = i
        count = 0
        for k in range(indptr[i], indptr[i + 1]):
            j = indices[k]
            for q in range(indptr[j], indptr[j + 1]):
                if mark[indices[q]] == i and indices[q] != i:
                    count += 1
        links[i] = count
    return links, degree
