"""Numba kernels for the two hot loops: all-source BFS and edge rewiring.

Everything here is deterministic given its inputs; random choices are made
by the callers (numpy generators) and passed in as arrays.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_EMPTY = np.int64(-1)


@njit(cache=True)
def all_source_path_stats(indptr, indices, sources):
    """Sum/count/max of finite shortest-path lengths from ``sources``.

    Returns ``(total, count, max)`` over ordered pairs (source, reached node)
    with source != reached.  Unreached nodes contribute nothing.
    """
    n = indptr.shape[0] - 1
    dist = np.empty(n, np.int32)
    mark = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    total = 0.0
    cnt = 0
    mx = 0
    for si in range(sources.shape[0]):
        s = sources[si]
        mark[s] = si
        dist[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u] + 1
            for p in range(indptr[u], indptr[u + 1]):
                w = indices[p]
                if mark[w] != si:
                    mark[w] = si
                    dist[w] = du
                    queue[tail] = w
                    tail += 1
        for qi in range(1, tail):
            d = dist[queue[qi]]
            total += d
            cnt += 1
            if d > mx:
                mx = d
    return total, cnt, mx


@njit(cache=True, inline="always")
def _hash_key(key, mask):
    z = np.uint64(key) * np.uint64(0xBF58476D1CE4E5B9)
    z ^= z >> np.uint64(31)
    return np.int64(z & np.uint64(mask))


@njit(cache=True)
def _table_insert(keys, mask, key):
    i = _hash_key(key, mask)
    while keys[i] != _EMPTY:
        i = (i + 1) & mask
    keys[i] = key


@njit(cache=True)
def _table_contains(keys, mask, key):
    i = _hash_key(key, mask)
    while keys[i] != _EMPTY:
        if keys[i] == key:
            return True
        i = (i + 1) & mask
    return False


@njit(cache=True)
def _table_delete(keys, mask, key):
    # linear probing with backward-shift deletion; no tombstones
    i = _hash_key(key, mask)
    while keys[i] != key:
        i = (i + 1) & mask
    j = i
    k = j
    while True:
        keys[j] = _EMPTY
        while True:
            k = (k + 1) & mask
            if keys[k] == _EMPTY:
                return
            h = _hash_key(keys[k], mask)
            # move keys[k] back iff its probe chain passes through j
            if ((k - h) & mask) >= ((k - j) & mask):
                keys[j] = keys[k]
                j = k
                break


@njit(cache=True)
def build_edge_table(edge_codes, capacity):
    keys = np.full(capacity, _EMPTY, np.int64)
    mask = capacity - 1
    for c in edge_codes:
        _table_insert(keys, mask, c)
    return keys


@njit(cache=True)
def rewire_chunk(eu, ev, ebin, x, y, bin_width, n, keys, mask,
                 node_cell, block_ptr, block_nodes, inc_ptr, inc_list,
                 prop_edge, u_orient, u_near, u_pick, budget_left):
    """Process one chunk of spatially local swap proposals in place.

    Each proposal: draw edge i=(a,b) with random orientation, draw a node d
    near b (same or adjacent location-grid cell), draw an edge j=(c,d)
    incident to d, and propose the double-edge swap (a,b),(c,d) ->
    (a,d),(c,b).  Accepted only when all four endpoints are distinct,
    neither proposed edge exists, and the distance-bin multiset is
    unchanged.  ``inc_ptr``/``inc_list`` is the per-node incidence CSR and
    is kept current (degrees never change, so slots just swap owners).

    Returns ``(accepted, consumed)``.
    """
    accepted = 0
    consumed = 0
    for t in range(prop_edge.shape[0]):
        if accepted >= budget_left:
            break
        consumed += 1
        i = prop_edge[t]
        if u_orient[t] < 0.5:
            a = eu[i]
            b = ev[i]
        else:
            a = ev[i]
            b = eu[i]
        blo = block_ptr[node_cell[b]]
        bhi = block_ptr[node_cell[b] + 1]
        if bhi <= blo:
            continue
        d = block_nodes[blo + np.int64(u_near[t] * (bhi - blo))]
        if d == b or d == a:
            continue
        dlo = inc_ptr[d]
        dhi = inc_ptr[d + 1]
        if dhi <= dlo:
            continue
        j = inc_list[dlo + np.int64(u_pick[t] * (dhi - dlo))]
        if j == i:
            continue
        c = eu[j] + ev[j] - d
        if c == a or c == b:
            continue
        # proposed replacement pair: (a,d) and (c,b)
        p = a if a < d else d
        q = d if a < d else a
        r = c if c < b else b
        s = b if c < b else c
        key1 = p * n + q
        key2 = r * n + s
        if _table_contains(keys, mask, key1):
            continue
        if _table_contains(keys, mask, key2):
            continue
        b1 = np.int64(np.hypot(x[p] - x[q], y[p] - y[q]) / bin_width)
        b2 = np.int64(np.hypot(x[r] - x[s], y[r] - y[s]) / bin_width)
        o1 = ebin[i]
        o2 = ebin[j]
        if not ((b1 == o1 and b2 == o2) or (b1 == o2 and b2 == o1)):
            continue
        _table_delete(keys, mask, (eu[i] * n + ev[i]))
        _table_delete(keys, mask, (eu[j] * n + ev[j]))
        _table_insert(keys, mask, key1)
        _table_insert(keys, mask, key2)
        eu[i] = p
        ev[i] = q
        ebin[i] = b1
        eu[j] = r
        ev[j] = s
        ebin[j] = b2
        # edge i moves from b's incidence to d's; edge j the other way
        for t2 in range(inc_ptr[b], inc_ptr[b + 1]):
            if inc_list[t2] == i:
                inc_list[t2] = j
                break
        for t2 in range(dlo, dhi):
            if inc_list[t2] == j:
                inc_list[t2] = i
                break
        accepted += 1
    return accepted, consumed
