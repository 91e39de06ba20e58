"""Compiled SWAP-routing kernel used by :mod:`logent.rearrange`.

All sites are flat indices ``r * L + c``.  ``board[s]`` holds the matched
qubit id at site ``s`` or -1 for an empty / unmatched site.
"""
import numpy as np
from numba import njit

_DR = np.array([-1, 0, 0, 1], dtype=np.int64)
_DC = np.array([0, -1, 1, 0], dtype=np.int64)


@njit(cache=True)
def _bfs_path(L, start, goal, blocked, parent, seen, stamp, frontier, path):
    """Shortest 4-neighbour path avoiding ``blocked``; returns its length or -1."""
    head = 0
    tail = 0
    frontier[tail] = start
    tail += 1
    seen[start] = stamp
    parent[start] = -1
    found = False
    while head < tail:
        u = frontier[head]
        head += 1
        if u == goal:
            found = True
            break
        ur = u // L
        uc = u - ur * L
        for k in range(4):
            vr = ur + _DR[k]
            vc = uc + _DC[k]
            if vr < 0 or vr >= L or vc < 0 or vc >= L:
                continue
            v = vr * L + vc
            if seen[v] == stamp or blocked[v]:
                continue
            seen[v] = stamp
            parent[v] = u
            frontier[tail] = v
            tail += 1
    if not found:
        return -1
    n = 0
    v = goal
    while v != -1:
        path[n] = v
        n += 1
        v = parent[v]
    # reverse in place: path[0] = start
    for i in range(n // 2):
        t = path[i]
        path[i] = path[n - 1 - i]
        path[n - 1 - i] = t
    return n


@njit(cache=True)
def _penalty_path(L, start, goal, blocked, parent, path):
    """Shortest path where entering a blocked site costs ``L*L`` extra steps."""
    nsite = L * L
    big = nsite
    inf = np.int64(1) << 60
    dist = np.full(nsite, inf, dtype=np.int64)
    done = np.zeros(nsite, dtype=np.bool_)
    dist[start] = 0
    parent[start] = -1
    for _ in range(nsite):
        u = -1
        best = inf
        for s in range(nsite):
            if not done[s] and dist[s] < best:
                best = dist[s]
                u = s
        if u == -1 or u == goal:
            break
        done[u] = True
        ur = u // L
        uc = u - ur * L
        for k in range(4):
            vr = ur + _DR[k]
            vc = uc + _DC[k]
            if vr < 0 or vr >= L or vc < 0 or vc >= L:
                continue
            v = vr * L + vc
            step = 1 + (big if (blocked[v] and v != goal) else 0)
            if dist[u] + step < dist[v]:
                dist[v] = dist[u] + step
                parent[v] = u
    n = 0
    v = goal
    while v != -1:
        path[n] = v
        n += 1
        v = parent[v]
    for i in range(n // 2):
        t = path[i]
        path[i] = path[n - 1 - i]
        path[n - 1 - i] = t
    return n


@njit(cache=True)
def route(L, sources, targets, swap_a, swap_b, counts):
    """Route matched qubit ``q`` from ``sources[q]`` to ``targets[q]``.

    Targets are finalized in the order given.  Returns ``(n_swaps, ok)``;
    ``ok`` is False when the re-routing budget (twice the queue length) is
    exhausted.  Unmatched entangled qubits are not tracked: they behave like
    empty sites and only the mover's count increments when swapping with them.
    """
    nsite = L * L
    n = sources.shape[0]
    board = np.full(nsite, -1, dtype=np.int64)
    pos = sources.copy()
    for q in range(n):
        board[sources[q]] = q
    finalized = np.zeros(nsite, dtype=np.bool_)
    parent = np.empty(nsite, dtype=np.int64)
    seen = np.zeros(nsite, dtype=np.int64)
    frontier = np.empty(nsite, dtype=np.int64)
    path = np.empty(nsite, dtype=np.int64)
    cap = 3 * n + 1
    queue = np.empty(cap, dtype=np.int64)
    for q in range(n):
        queue[q] = q
    head = 0
    tail = n
    reroutes = 0
    limit = 2 * n
    nswap = 0
    stamp = 0
    while head < tail:
        q = queue[head]
        head += 1
        goal = targets[q]
        if pos[q] != goal:
            stamp += 1
            m = _bfs_path(L, pos[q], goal, finalized, parent, seen, stamp, frontier, path)
            if m < 0:
                m = _penalty_path(L, pos[q], goal, finalized, parent, path)
            for i in range(m - 1):
                cur = path[i]
                nxt = path[i + 1]
                other = board[nxt]
                if nswap >= swap_a.shape[0]:
                    return nswap, False
                swap_a[nswap] = cur
                swap_b[nswap] = nxt
                nswap += 1
                counts[q] += 1
                if other >= 0:
                    pos[other] = cur
                    counts[other] += 1
                    if finalized[nxt]:
                        finalized[nxt] = False
                        reroutes += 1
                        if reroutes > limit or tail >= cap:
                            return nswap, False
                        queue[tail] = other
                        tail += 1
                board[cur] = other
                board[nxt] = q
                pos[q] = nxt
        finalized[goal] = True
    return nswap, True
