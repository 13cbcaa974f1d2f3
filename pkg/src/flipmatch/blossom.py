"""Deterministic augmenting-path search with blossom contraction.

Works on plain adjacency data (vertex -> {neighbor: edge id}) plus a mate map,
so the same routine serves both the online matchers (which ban edges whose
flip budget is spent) and the optimum-tracking oracle (which ignores budgets).

Roots are tried in increasing vertex order and neighbors are scanned sorted,
so the returned path is reproducible run to run.
"""

from __future__ import annotations

from collections import deque
from typing import Mapping


def find_augmenting_path(
    adj: Mapping[int, Mapping[int, int]],
    mate: Mapping[int, int],
    roots=None,
) -> list[int] | None:
    """Return a vertex walk of an augmenting path, or None.

    ``adj`` lists the searchable edges; ``mate`` maps matched vertices to
    their partner (vertices absent from it are free). ``roots`` restricts the
    free vertices the search may start from (default: all free vertices in
    ``adj``). The walk alternates unmatched/matched edges and both end
    vertices are free.

    A matched vertex whose matched edge is missing from ``adj`` is a wall:
    every matched vertex on an augmenting path carries its matched edge on
    the path, so no augmenting path can visit it. Such vertices are dropped
    from the search instead of being traversed through their mate.
    """
    walls = {v for v in adj if v in mate and mate[v] not in adj[v]}
    if walls:
        adj = {
            v: {w: eid for w, eid in nbrs.items() if w not in walls}
            for v, nbrs in adj.items()
            if v not in walls
        }
    if roots is None:
        roots = [v for v in adj if v not in mate]
    for root in sorted(roots):
        if root in mate or root not in adj:
            continue
        path = _search(root, adj, mate)
        if path is not None:
            return path
    return None


def _search(
    root: int, adj: Mapping[int, Mapping[int, int]], mate: Mapping[int, int]
) -> list[int] | None:
    """BFS a single alternating tree from ``root``, contracting odd cycles."""
    base = {v: v for v in adj}
    parent: dict[int, int] = {}
    used = {root}
    queue = deque([root])

    def lca(a: int, b: int) -> int:
        seen = set()
        a = base[a]
        while True:
            seen.add(a)
            if a not in mate:
                break
            a = base[parent[mate[a]]]
        b = base[b]
        while b not in seen:
            b = base[parent[mate[b]]]
        return b

    def mark_path(v: int, b: int, child: int, blossom: set[int]) -> None:
        while base[v] != b:
            blossom.add(base[v])
            blossom.add(base[mate[v]])
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    while queue:
        v = queue.popleft()
        for to in sorted(adj[v]):
            if to not in base:
                continue  # outside the searched component view
            if base[v] == base[to] or mate.get(v) == to:
                continue
            if to == root or (to in mate and mate[to] in parent):
                # found an odd cycle: contract it
                cur_base = lca(v, to)
                blossom: set[int] = set()
                mark_path(v, cur_base, to, blossom)
                mark_path(to, cur_base, v, blossom)
                for u in base:
                    if base[u] in blossom:
                        base[u] = cur_base
                        if u not in used:
                            used.add(u)
                            queue.append(u)
            elif to not in parent:
                parent[to] = v
                if to not in mate:
                    return _extract(root, to, parent, mate)
                w = mate[to]
                if w not in used:
                    used.add(w)
                    queue.append(w)
    return None


def _extract(
    root: int, end: int, parent: Mapping[int, int], mate: Mapping[int, int]
) -> list[int]:
    walk = [end]
    v = end
    while v != root:
        p = parent[v]
        walk.append(p)
        if p == root:
            break
        w = mate[p]
        walk.append(w)
        v = w
    walk.reverse()
    return walk
