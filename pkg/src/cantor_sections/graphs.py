"""Small graph kernels over cell relations given as edge arrays."""
from __future__ import annotations

from collections import deque

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components


def induced(src: np.ndarray, dst: np.ndarray, mask: np.ndarray):
    keep = mask[src] & mask[dst]
    return src[keep], dst[keep]


SMALL = 48


def _closure(n: int, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Dense reachability in >= 1 steps, for small graphs."""
    reach = np.zeros((n, n), bool)
    reach[src, dst] = True
    while True:
        nxt = reach | ((reach.astype(np.uint8) @ reach.astype(np.uint8)) > 0)
        if (nxt == reach).all():
            return reach
        reach = nxt


def scc_labels(n: int, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    if n <= SMALL:
        reach = _closure(n, src, dst) | np.eye(n, dtype=bool)
        mutual = reach & reach.T
        return np.argmax(mutual, axis=1)
    g = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    _, labels = connected_components(g.tocsr(), directed=True, connection="strong")
    return labels


def cycle_mask(n: int, src: np.ndarray, dst: np.ndarray,
               mask: np.ndarray | None = None) -> np.ndarray:
    """Nodes lying on a cycle of the subgraph induced by ``mask``."""
    if mask is not None:
        src, dst = induced(src, dst, mask)
    if 0 < n <= SMALL:
        on = np.diagonal(_closure(n, src, dst)).copy()
        return on & mask if mask is not None else on
    labels = scc_labels(n, src, dst)
    counts = np.bincount(labels, minlength=labels.max() + 1 if n else 0)
    on = counts[labels] > 1
    on[src[src == dst]] = True
    if mask is not None:
        on &= mask
    return on


def adjacency(n: int, src: np.ndarray, dst: np.ndarray) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    order = np.lexsort((dst, src))
    for a, b in zip(src[order].tolist(), dst[order].tolist()):
        adj[a].append(b)
    return adj


def shortest_cycle(adj: list[list[int]], start: int,
                   allowed: np.ndarray | None = None) -> list[int] | None:
    """Shortest closed walk through ``start``; neighbors explored lowest id first."""
    prev = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if allowed is not None and not allowed[w]:
                continue
            if w == start:
                path = [v]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                return path[::-1]
            if w not in prev:
                prev[w] = v
                queue.append(w)
    return None


def girth_at_least(adj: list[list[int]], start: int, bound: int) -> bool:
    """True iff no closed walk through ``start`` has length <= ``bound``."""
    frontier = {start}
    seen = {start}
    for _ in range(bound):
        nxt = set()
        for v in frontier:
            for w in adj[v]:
                if w == start:
                    return False
                if w not in seen:
                    seen.add(w)
                    nxt.add(w)
        frontier = nxt
        if not frontier:
            return True
    return True


def longest_path_vertices(n: int, src: np.ndarray, dst: np.ndarray,
                          mask: np.ndarray) -> int:
    """Vertex count of a longest path in the acyclic subgraph induced by ``mask``."""
    src, dst = induced(src, dst, mask)
    indeg = np.bincount(dst, minlength=n)
    adj = adjacency(n, src, dst)
    longest = np.where(mask, 1, 0)
    queue = deque(np.flatnonzero(mask & (indeg == 0)).tolist())
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        for w in adj[v]:
            longest[w] = max(longest[w], longest[v] + 1)
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if seen != int(mask.sum()):
        raise ValueError("subgraph has a cycle")
    return int(longest.max()) if n else 0


def reachable(n: int, src: np.ndarray, dst: np.ndarray,
              start: np.ndarray) -> np.ndarray:
    """Nodes reachable (in >= 0 steps) from the boolean ``start`` set."""
    adj = adjacency(n, src, dst)
    seen = start.copy()
    queue = deque(np.flatnonzero(start).tolist())
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if not seen[w]:
                seen[w] = True
                queue.append(w)
    return seen
