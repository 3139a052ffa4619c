"""Ring perception: cyclic bonds and the smallest set of smallest rings."""

from __future__ import annotations

from collections import deque


def _adjacency(n, edges):
    adj = [[] for _ in range(n)]
    for k, (a, b) in enumerate(edges):
        adj[a].append((b, k))
        adj[b].append((a, k))
    return adj


def ring_bond_flags(n: int, edges) -> list[bool]:
    """True for every edge that lies on a cycle (i.e. is not a bridge)."""
    adj = _adjacency(n, edges)
    disc = [-1] * n
    low = [0] * n
    is_bridge = [False] * len(edges)
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        # iterative DFS: (node, parent edge, neighbour iterator position)
        stack = [(root, -1, 0)]
        while stack:
            v, pe, pos = stack[-1]
            if pos < len(adj[v]):
                stack[-1] = (v, pe, pos + 1)
                w, k = adj[v][pos]
                if k == pe:
                    continue
                if disc[w] == -1:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, k, 0))
                else:
                    low[v] = min(low[v], disc[w])
            else:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] > disc[u]:
                        is_bridge[pe] = True
    return [not b for b in is_bridge]


def _shortest_path(adj, src, dst, banned_edge, allowed):
    """BFS path src -> dst avoiding one edge; neighbours visited in index order."""
    prev = {src: None}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        if v == dst:
            break
        for w, k in adj[v]:
            if k == banned_edge or not allowed[k] or w in prev:
                continue
            prev[w] = v
            queue.append(w)
    if dst not in prev:
        return None
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    return path[::-1]


def _edge_mask(path, edge_index):
    mask = 0
    for i in range(len(path)):
        a, b = path[i], path[(i + 1) % len(path)]
        mask |= 1 << edge_index[(a, b) if a < b else (b, a)]
    return mask


def _select_basis(candidates, edge_index, rank_needed, basis, chosen):
    # basis maps pivot bit -> reduced edge vector
    for path in candidates:
        mask = _edge_mask(path, edge_index)
        while mask:
            pivot = mask.bit_length() - 1
            if pivot in basis:
                mask ^= basis[pivot]
            else:
                basis[pivot] = mask
                chosen.append(path)
                break
        if len(chosen) == rank_needed:
            return True
    return False


def _horton_candidates(adj, ring_atoms, allowed):
    cands = []
    for r in ring_atoms:
        dist = {r: 0}
        prev = {r: None}
        queue = deque([r])
        while queue:
            v = queue.popleft()
            for w, k in adj[v]:
                if allowed[k] and w not in dist:
                    dist[w] = dist[v] + 1
                    prev[w] = v
                    queue.append(w)

        def path_to(x):
            p = [x]
            while prev[p[-1]] is not None:
                p.append(prev[p[-1]])
            return p[::-1]

        for v in dist:
            for w, k in adj[v]:
                if not allowed[k] or v >= w or w not in dist:
                    continue
                pv, pw = path_to(v), path_to(w)
                if set(pv[1:]) & set(pw[1:]):
                    continue
                cycle = pv + pw[::-1][:-1]
                if len(set(cycle)) == len(cycle) and len(cycle) >= 3:
                    cands.append(cycle)
    return cands


def _canonical_cycle(path):
    """Rotate/reflect a cycle so it starts at its smallest atom, deterministic direction."""
    k = path.index(min(path))
    p = path[k:] + path[:k]
    if len(p) > 2 and p[-1] < p[1]:
        p = [p[0]] + p[1:][::-1]
    return tuple(p)


def find_sssr(n: int, edges, cyclic=None) -> tuple[tuple[int, ...], ...]:
    """Smallest set of smallest rings.

    Candidate cycles are the shortest cycle through each cyclic bond; if those
    do not span the cycle space, Horton candidates are added. Independent
    cycles are picked smallest-first by GF(2) elimination over edge sets.
    ``cyclic`` may pass precomputed :func:`ring_bond_flags`.
    """
    edges = list(edges)
    if not edges:
        return ()
    if cyclic is None:
        cyclic = ring_bond_flags(n, edges)
    n_cyclic = sum(cyclic)
    if n_cyclic == 0:
        return ()
    adj = _adjacency(n, edges)
    ring_atoms = sorted({a for k, e in enumerate(edges) if cyclic[k] for a in e})
    # cyclomatic number restricted to the cyclic subgraph
    comp_seen = set()
    n_comp = 0
    for a in ring_atoms:
        if a in comp_seen:
            continue
        n_comp += 1
        stack = [a]
        comp_seen.add(a)
        while stack:
            v = stack.pop()
            for w, k in adj[v]:
                if cyclic[k] and w not in comp_seen:
                    comp_seen.add(w)
                    stack.append(w)
    rank_needed = n_cyclic - len(ring_atoms) + n_comp
    edge_index = {}
    for k, (a, b) in enumerate(edges):
        edge_index[(a, b) if a < b else (b, a)] = k

    candidates = {}
    for k, (a, b) in enumerate(edges):
        if not cyclic[k]:
            continue
        path = _shortest_path(adj, a, b, k, cyclic)
        if path is not None:
            cyc = _canonical_cycle(path)
            candidates.setdefault(_edge_mask(list(cyc), edge_index), cyc)
    ordered = sorted(candidates.values(), key=lambda c: (len(c), c))
    basis, chosen = {}, []
    if not _select_basis(ordered, edge_index, rank_needed, basis, chosen):
        pool = {}
        for c in ordered:
            pool.setdefault(_edge_mask(list(c), edge_index), c)
        for cyc in _horton_candidates(adj, ring_atoms, cyclic):
            cyc = _canonical_cycle(cyc)
            pool.setdefault(_edge_mask(list(cyc), edge_index), cyc)
        ordered = sorted(pool.values(), key=lambda c: (len(c), c))
        basis, chosen = {}, []
        _select_basis(ordered, edge_index, rank_needed, basis, chosen)
    chosen.sort(key=lambda c: (len(c), c))
    return tuple(chosen)


def _simple_cycles(adj, allowed, starts, max_len):
    """All simple cycles of at most ``max_len`` atoms through allowed edges."""
    found = []
    for s in starts:
        stack = [(s, [s], -1)]
        while stack:
            v, path, pe = stack.pop()
            for w, k in adj[v]:
                if not allowed[k] or k == pe:
                    continue
                if w == s and len(path) >= 3:
                    if path[1] < path[-1]:
                        found.append(tuple(path))
                elif w > s and w not in path and len(path) < max_len:
                    stack.append((w, path + [w], k))
    return found


def relevant_cycles(n: int, edges, sssr, max_enumerated: int = 10,
                    cyclic=None) -> tuple[tuple[int, ...], ...]:
    """Cycles that are not the GF(2) sum of strictly shorter cycles.

    Unlike a single minimum cycle basis this set is unique, so anything
    computed from it (aromaticity in particular) cannot depend on atom order.
    Cycles longer than ``max_enumerated`` atoms are taken from ``sssr`` only.
    """
    edges = list(edges)
    if len(sssr) < 2:
        # a one-dimensional cycle space has exactly one cycle
        return tuple(sssr)
    if cyclic is None:
        cyclic = ring_bond_flags(n, edges)
    adj = _adjacency(n, edges)
    edge_index = {}
    for k, (a, b) in enumerate(edges):
        edge_index[(a, b) if a < b else (b, a)] = k
    limit = min(max(len(r) for r in sssr), max_enumerated)
    starts = sorted({a for r in sssr for a in r})
    cycles = {}
    for c in _simple_cycles(adj, cyclic, starts, limit):
        cyc = _canonical_cycle(list(c))
        cycles.setdefault(_edge_mask(list(cyc), edge_index), cyc)
    for r in sssr:
        if len(r) > limit:
            cycles.setdefault(_edge_mask(list(r), edge_index), tuple(r))
    by_len = {}
    for mask, cyc in cycles.items():
        by_len.setdefault(len(cyc), []).append((cyc, mask))
    basis = {}  # leading bit -> reduced mask
    out = []

    def reduce(mask):
        while mask:
            top = mask.bit_length() - 1
            if top not in basis:
                return mask
            mask ^= basis[top]
        return 0

    for length in sorted(by_len):
        group = sorted(by_len[length])
        for cyc, mask in group:
            if reduce(mask):
                out.append(cyc)
        for _, mask in group:
            r = reduce(mask)
            if r:
                basis[r.bit_length() - 1] = r
    out.sort(key=lambda c: (len(c), c))
    return tuple(out)
