"""numba kernels over CSR adjacency (indptr, indices).

Parallel kernels split work as "worker k handles items k, k+W, k+2W, ..." with
one scratch row per worker, and combine results with order-independent
reductions, so the output never depends on the thread count.
"""

import os

import numba as nb
import numpy as np
from numba import njit, prange

if "NUMBA_THREADING_LAYER" not in os.environ:
    # skip the TBB probe, which warns on older TBB builds
    nb.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

UNREACHED = -1


def workers() -> int:
    return nb.get_num_threads()


@njit(cache=True)
def bfs_dist(indptr, indices, s, maxd):
    n = len(indptr) - 1
    dist = np.full(n, UNREACHED, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    dist[s] = 0
    queue[0] = s
    head, tail = 0, 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        if du >= maxd:
            continue
        for p in range(indptr[u], indptr[u + 1]):
            w = indices[p]
            if dist[w] == UNREACHED:
                dist[w] = du + 1
                queue[tail] = w
                tail += 1
    return dist


@njit(cache=True)
def _girth_from(indptr, indices, s, best, dist, parent, queue):
    dist[s] = 0
    parent[s] = -1
    queue[0] = s
    head, tail = 0, 1
    found = best
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        if 2 * du + 1 >= found:
            break
        for p in range(indptr[u], indptr[u + 1]):
            w = indices[p]
            if dist[w] == UNREACHED:
                dist[w] = du + 1
                parent[w] = u
                queue[tail] = w
                tail += 1
            elif w != parent[u]:
                c = du + dist[w] + 1
                if c < found:
                    found = c
    for i in range(tail):
        dist[queue[i]] = UNREACHED
    return found


@njit(cache=True, parallel=True)
def girth(indptr, indices, nworkers):
    """Shortest cycle length; n+1 when acyclic."""
    n = len(indptr) - 1
    W = max(1, min(nworkers, n))
    dist = np.full((W, n), UNREACHED, dtype=np.int64)
    parent = np.empty((W, n), dtype=np.int64)
    queue = np.empty((W, n), dtype=np.int64)
    bests = np.full(W, n + 1, dtype=np.int64)
    for k in prange(W):
        best = n + 1
        for s in range(k, n, W):
            c = _girth_from(indptr, indices, s, best, dist[k], parent[k], queue[k])
            if c < best:
                best = c
                if best == 3:
                    break
        bests[k] = best
    return bests.min()


@njit(cache=True, parallel=True)
def all_pairs(indptr, indices, nworkers):
    n = len(indptr) - 1
    out = np.full((n, n), UNREACHED, dtype=np.int16)
    W = max(1, min(nworkers, n))
    queue = np.empty((W, n), dtype=np.int64)
    for k in prange(W):
        for s in range(k, n, W):
            row = out[s]
            row[s] = 0
            q = queue[k]
            q[0] = s
            head, tail = 0, 1
            while head < tail:
                u = q[head]
                head += 1
                du = row[u]
                for p in range(indptr[u], indptr[u + 1]):
                    w = indices[p]
                    if row[w] == UNREACHED:
                        row[w] = du + 1
                        q[tail] = w
                        tail += 1
    return out


@njit(cache=True, parallel=True)
def reach_step(indptr, indices, cur, nxt):
    n = len(indptr) - 1
    words = cur.shape[1]
    for v in prange(n):
        for j in range(words):
            nxt[v, j] = cur[v, j]
        for p in range(indptr[v], indptr[v + 1]):
            w = indices[p]
            for j in range(words):
                nxt[v, j] |= cur[w, j]


@njit(cache=True, parallel=True)
def count_missing(reach, targets, nsrc):
    """For each target vertex, how many of the nsrc source bits are absent."""
    out = np.zeros(len(targets), dtype=np.int64)
    words = reach.shape[1]
    for i in prange(len(targets)):
        row = reach[targets[i]]
        got = 0
        for j in range(words):
            x = row[j]
            while x:
                x &= x - np.uint64(1)
                got += 1
        out[i] = nsrc - got
    return out


@njit(cache=True)
def seed_bits(n, sources, start, stop):
    words = (stop - start + 63) // 64
    bits = np.zeros((n, words), dtype=np.uint64)
    for i in range(start, stop):
        j = i - start
        bits[sources[i], j // 64] |= np.uint64(1) << np.uint64(j % 64)
    return bits


@njit(cache=True)
def _bidir(indptr, indices, u, v, limit, mark, dist, qa, qb, stamp):
    # mark[x] = stamp (side u) or -stamp (side v); dist holds depth from that side
    if u == v:
        return 0
    mark[u] = stamp
    dist[u] = 0
    mark[v] = -stamp
    dist[v] = 0
    qa[0] = u
    qb[0] = v
    ha, ta, hb, tb = 0, 1, 0, 1
    da, db = 0, 0
    while da + db < limit and ha < ta and hb < tb:
        if ta - ha <= tb - hb:
            end = ta
            best = limit + 1
            while ha < end:
                x = qa[ha]
                ha += 1
                for p in range(indptr[x], indptr[x + 1]):
                    w = indices[p]
                    if mark[w] == -stamp:
                        c = da + 1 + dist[w]
                        if c < best:
                            best = c
                    elif mark[w] != stamp:
                        mark[w] = stamp
                        dist[w] = da + 1
                        qa[ta] = w
                        ta += 1
            da += 1
            if best <= limit:
                return best
        else:
            end = tb
            best = limit + 1
            while hb < end:
                x = qb[hb]
                hb += 1
                for p in range(indptr[x], indptr[x + 1]):
                    w = indices[p]
                    if mark[w] == stamp:
                        c = db + 1 + dist[w]
                        if c < best:
                            best = c
                    elif mark[w] != -stamp:
                        mark[w] = -stamp
                        dist[w] = db + 1
                        qb[tb] = w
                        tb += 1
            db += 1
            if best <= limit:
                return best
    return -1


@njit(cache=True, parallel=True)
def pair_distances(indptr, indices, us, vs, limit, nworkers):
    """Distance for each pair, or -1 when it exceeds limit."""
    n = len(indptr) - 1
    m = len(us)
    W = max(1, min(nworkers, m))
    out = np.empty(m, dtype=np.int64)
    mark = np.zeros((W, n), dtype=np.int64)
    dist = np.zeros((W, n), dtype=np.int64)
    qa = np.empty((W, n), dtype=np.int64)
    qb = np.empty((W, n), dtype=np.int64)
    for k in prange(W):
        stamp = 0
        for i in range(k, m, W):
            stamp += 1
            out[i] = _bidir(indptr, indices, us[i], vs[i], limit,
                            mark[k], dist[k], qa[k], qb[k], stamp)
    return out


@njit(cache=True, parallel=True)
def power_degrees(indptr, indices, t, nworkers):
    """For each u, the number of v > u within distance t."""
    n = len(indptr) - 1
    W = max(1, min(nworkers, n))
    counts = np.zeros(n, dtype=np.int64)
    dist = np.full((W, n), UNREACHED, dtype=np.int64)
    queue = np.empty((W, n), dtype=np.int64)
    for k in prange(W):
        d = dist[k]
        q = queue[k]
        for s in range(k, n, W):
            d[s] = 0
            q[0] = s
            head, tail = 0, 1
            c = 0
            while head < tail:
                u = q[head]
                head += 1
                if u > s:
                    c += 1
                if d[u] >= t:
                    continue
                for p in range(indptr[u], indptr[u + 1]):
                    w = indices[p]
                    if d[w] == UNREACHED:
                        d[w] = d[u] + 1
                        q[tail] = w
                        tail += 1
            counts[s] = c
            for i in range(tail):
                d[q[i]] = UNREACHED
    return counts


@njit(cache=True, parallel=True)
def power_fill(indptr, indices, t, offsets, out, nworkers):
    n = len(indptr) - 1
    W = max(1, min(nworkers, n))
    dist = np.full((W, n), UNREACHED, dtype=np.int64)
    queue = np.empty((W, n), dtype=np.int64)
    for k in prange(W):
        d = dist[k]
        q = queue[k]
        for s in range(k, n, W):
            d[s] = 0
            q[0] = s
            head, tail = 0, 1
            pos = offsets[s]
            while head < tail:
                u = q[head]
                head += 1
                if u > s:
                    out[pos, 0] = s
                    out[pos, 1] = u
                    pos += 1
                if d[u] >= t:
                    continue
                for p in range(indptr[u], indptr[u + 1]):
                    w = indices[p]
                    if d[w] == UNREACHED:
                        d[w] = d[u] + 1
                        q[tail] = w
                        tail += 1
            for i in range(tail):
                d[q[i]] = UNREACHED


@njit(cache=True)
def cycle_of_length(indptr, indices, length, budget, start_from):
    """Search for a cycle with exactly `length` vertices.

    Returns (status, path): status 1 found, 0 absent, -1 budget exhausted.
    Each cycle is discovered from its smallest vertex s, walking only through
    vertices above s; a restricted BFS distance to s prunes dead branches.
    """
    n = len(indptr) - 1
    path = np.empty(length, dtype=np.int64)
    ptr = np.empty(length, dtype=np.int64)
    onpath = np.zeros(n, dtype=np.bool_)
    dist = np.full(n, UNREACHED, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    half = length // 2
    nodes = 0
    for s in range(start_from, n):
        # distances to s inside the subgraph on vertices >= s
        dist[s] = 0
        queue[0] = s
        head, tail = 0, 1
        while head < tail:
            u = queue[head]
            head += 1
            if dist[u] >= half:
                continue
            for p in range(indptr[u], indptr[u + 1]):
                w = indices[p]
                if w > s and dist[w] == UNREACHED:
                    dist[w] = dist[u] + 1
                    queue[tail] = w
                    tail += 1
        path[0] = s
        ptr[0] = indptr[s]
        onpath[s] = True
        depth = 0
        found = False
        while depth >= 0:
            u = path[depth]
            if ptr[depth] >= indptr[u + 1]:
                onpath[u] = False
                depth -= 1
                continue
            w = indices[ptr[depth]]
            ptr[depth] += 1
            nodes += 1
            if nodes > budget:
                for i in range(tail):
                    dist[queue[i]] = UNREACHED
                return -1, path
            if depth == length - 1:
                if w == s:
                    found = True
                    break
                continue
            if w <= s or onpath[w]:
                continue
            remaining = length - depth - 1
            dw = dist[w]
            if dw == UNREACHED or dw > remaining:
                continue
            depth += 1
            path[depth] = w
            ptr[depth] = indptr[w]
            onpath[w] = True
        for i in range(tail):
            dist[queue[i]] = UNREACHED
        if found:
            return 1, path
    return 0, path
