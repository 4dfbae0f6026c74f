"""Exact canonical labeling for small undirected multigraphs.

Colour refinement followed by individualisation over every vertex of the
first non-singleton cell.  The minimum edge encoding over all leaves of the
search tree is isomorphism-invariant.  Twin vertices are interchangeable, so
only one representative per twin class is branched on.
"""

from __future__ import annotations

from collections import Counter
from typing import Hashable, Iterable

Adjacency = dict[Hashable, dict[Hashable, int]]


def adjacency(edges: Iterable[tuple[Hashable, Hashable]]) -> Adjacency:
    adj: Adjacency = {}
    for u, v in edges:
        adj.setdefault(u, {})
        adj.setdefault(v, {})
        adj[u][v] = adj[u].get(v, 0) + 1
        adj[v][u] = adj[v].get(u, 0) + 1
    return adj


def components(adj: Adjacency) -> list[list[Hashable]]:
    seen: set = set()
    out = []
    for start in adj:
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        out.append(comp)
    return out


def _rank(sig: dict) -> dict:
    order = {s: i for i, s in enumerate(sorted(set(sig.values())))}
    return {v: order[s] for v, s in sig.items()}


def _refine(adj: Adjacency, colors: dict) -> dict:
    n_classes = len(set(colors.values()))
    while True:
        sig = {
            v: (colors[v], tuple(sorted((colors[w], m) for w, m in adj[v].items())))
            for v in adj
        }
        colors = _rank(sig)
        k = len(set(colors.values()))
        if k == n_classes:
            return colors
        n_classes = k


def _encode(adj: Adjacency, colors: dict) -> tuple:
    out = []
    for u, nbrs in adj.items():
        for w, m in nbrs.items():
            a, b = colors[u], colors[w]
            if a <= b:
                out.append((a, b, m))
    out.sort()
    return (len(adj), tuple(out))


def _search(adj: Adjacency, colors: dict) -> tuple:
    colors = _refine(adj, colors)
    cells = Counter(colors.values())
    if all(size == 1 for size in cells.values()):
        return _encode(adj, colors)
    target = min((size, c) for c, size in cells.items() if size > 1)[1]
    cell = [v for v in adj if colors[v] == target]
    twin_seen = set()
    best = None
    for v in cell:
        nb = dict(adj[v])
        nb.pop(v, None)
        open_twin = frozenset(nb.items())
        if open_twin in twin_seen:
            continue
        twin_seen.add(open_twin)
        split = {x: 2 * c + (0 if x == v else 1) for x, c in colors.items()}
        form = _search(adj, _rank(split))
        if best is None or form < best:
            best = form
    return best


def canonical_form(adj: Adjacency) -> tuple:
    """Canonical encoding of a (connected or not) graph given as adjacency."""
    if not adj:
        return (0, ())
    colors = _rank({v: sum(adj[v].values()) for v in adj})
    return _search(adj, colors)
