"""Exact canonical certificates for rooted graphs.

Two rooted graphs of the same radius get equal certificates iff a
root-preserving isomorphism exists between them; no hashing, no collisions.
Rooted trees (the overwhelmingly common case for balls of sparse graphs)
take a linear-ish path: the classic sorted-parenthesization code.  General
graphs go through BFS-layer partitioning, equitable degree refinement, and
a backtracking minimization of the adjacency encoding over the leaves of an
individualization tree.  Equal-leaf encodings reveal automorphisms, whose
orbits prune sibling branches; this keeps highly symmetric inputs (complete
graphs, grids) polynomial instead of factorial.

Certificates are byte strings: ``b"T" + parenthesization`` for trees,
``b"G" + n + packed adjacency bits`` for everything else.  The two formats
can never collide because a tree and a non-tree differ in edge count.
"""

from __future__ import annotations

from collections import deque
from typing import Optional, Sequence

from .errors import CapExceeded, ValidationError

SIZE_CAP = 10_000


def certificate(adjacency: Sequence[Sequence[int]], root: int,
                size_cap: int = SIZE_CAP) -> bytes:
    """Canonical certificate of the rooted graph (adjacency, root)."""
    n = len(adjacency)
    if not 0 <= root < n:
        raise ValidationError(f"root {root} out of range")
    if n > size_cap:
        raise CapExceeded(
            f"canonicalization size cap exceeded: {n} > {size_cap} vertices "
            "(radius too large for the degree bound)")
    order, parent = _bfs_order(adjacency, root)
    m2 = sum(len(nbrs) for nbrs in adjacency)
    if len(order) == n and m2 == 2 * (n - 1):
        return _tree_certificate(adjacency, root, order, parent)
    return _search_certificate(adjacency, root)


def _bfs_order(adjacency, root):
    n = len(adjacency)
    parent = [-1] * n
    seen = [False] * n
    seen[root] = True
    order = [root]
    q = deque([root])
    while q:
        u = q.popleft()
        for v in adjacency[u]:
            if not seen[v]:
                seen[v] = True
                parent[v] = u
                order.append(v)
                q.append(v)
    return order, parent


def _tree_certificate(adjacency, root, order, parent):
    """Sorted-parenthesization code; complete invariant for rooted trees."""
    code: list = [None] * len(adjacency)
    for v in reversed(order):
        kids = sorted(code[w] for w in adjacency[v] if parent[w] == v)
        code[v] = b"(" + b"".join(kids) + b")"
    return b"T" + code[root]


# --- general rooted graphs: refinement + pruned search ---------------------


def _initial_partition(adjacency, root):
    """BFS distance layers from the root; unreachable vertices last."""
    n = len(adjacency)
    dist = {root: 0}
    q = deque([root])
    while q:
        u = q.popleft()
        for v in adjacency[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    layers: dict = {}
    for v in range(n):
        layers.setdefault(dist.get(v, n), []).append(v)
    return [layers[d] for d in sorted(layers)]


def _refine(adjacency, cells):
    """Coarsest equitable refinement of an ordered partition.

    Cells split by neighbor counts into a splitter cell, subcells ordered by
    count; the cell order (and nothing about vertex ids) determines the
    result, which keeps the procedure isomorphism-equivariant.
    """
    cells = [list(c) for c in cells]
    changed = True
    while changed:
        changed = False
        for w_idx in range(len(cells)):
            wset = set(cells[w_idx])
            new_cells = []
            split = False
            for cell in cells:
                if len(cell) == 1:
                    new_cells.append(cell)
                    continue
                groups: dict = {}
                for v in cell:
                    k = 0
                    for u in adjacency[v]:
                        if u in wset:
                            k += 1
                    groups.setdefault(k, []).append(v)
                if len(groups) == 1:
                    new_cells.append(cell)
                else:
                    split = True
                    for k in sorted(groups):
                        new_cells.append(groups[k])
            if split:
                cells = new_cells
                changed = True
                break
    return cells


def _individualize(cells, target_idx, member):
    out = []
    for i, cell in enumerate(cells):
        if i == target_idx:
            out.append([member])
            out.append([v for v in cell if v != member])
        else:
            out.append(cell)
    return out


def _leading_rows(adjacency, cells):
    """Adjacency rows determined by the leading singleton cells.

    Row k (k >= 1) packs the adjacency bits between the vertex at position k
    and positions 0..k-1; tuples of rows compare lexicographically, which is
    the order the search minimizes.
    """
    fixed = []
    for cell in cells:
        if len(cell) != 1:
            break
        fixed.append(cell[0])
    rows = []
    for k in range(1, len(fixed)):
        sets_k = adjacency[fixed[k]]
        row = 0
        for j in range(k):
            row = (row << 1) | (1 if fixed[j] in sets_k else 0)
        rows.append(row)
    return fixed, tuple(rows)


class _Frame:
    __slots__ = ("cells", "target", "members", "pos", "tried", "orbit", "chosen")

    def __init__(self, cells, target):
        self.cells = cells
        self.target = target
        self.members = list(cells[target])
        self.pos = 0
        self.tried: list = []
        self.orbit: dict = {}
        self.chosen: Optional[int] = None

    def find(self, v):
        o = self.orbit
        r = v
        while o.get(r, r) != r:
            r = o[r]
        while o.get(v, v) != v:
            o[v], v = r, o[v]
        return r

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.orbit[rb] = ra


def _first_non_singleton(cells):
    for i, cell in enumerate(cells):
        if len(cell) > 1:
            return i
    return None


def _search_certificate(adjacency, root):
    n = len(adjacency)
    adj_sets = [frozenset(nbrs) for nbrs in adjacency]
    cells = _refine(adj_sets, _initial_partition(adjacency, root))

    best_enc = None
    best_path: list = []
    first_enc = None
    first_path: list = []

    def leaf_encoding(cells):
        order = [c[0] for c in cells]
        rows = []
        for k in range(1, n):
            sets_k = adj_sets[order[k]]
            row = 0
            for j in range(k):
                row = (row << 1) | (1 if order[j] in sets_k else 0)
            rows.append(row)
        return tuple(rows), order

    t = _first_non_singleton(cells)
    if t is None:
        enc, _ = leaf_encoding(cells)
        return _pack(n, enc)

    stack = [_Frame(cells, t)]
    while stack:
        fr = stack[-1]
        member = None
        while fr.pos < len(fr.members):
            m = fr.members[fr.pos]
            fr.pos += 1
            if any(fr.find(m) == fr.find(t_) for t_ in fr.tried):
                continue
            member = m
            break
        if member is None:
            stack.pop()
            continue
        fr.tried.append(member)
        fr.chosen = member
        child = _refine(adj_sets, _individualize(fr.cells, fr.target, member))
        _, prefix = _leading_rows(adj_sets, child)
        if best_enc is not None and prefix > best_enc[:len(prefix)]:
            continue
        t = _first_non_singleton(child)
        if t is not None:
            stack.append(_Frame(child, t))
            continue

        enc, order = leaf_encoding(child)
        path = [f.chosen for f in stack]
        if first_enc is None:
            first_enc, first_path = enc, (path, order)
            best_enc, best_path = enc, (path, order)
            continue
        if enc == first_enc:
            _jump_back(stack, path, order, first_path)
        elif enc == best_enc:
            _jump_back(stack, path, order, best_path)
        elif enc < best_enc:
            best_enc, best_path = enc, (path, order)
    return _pack(n, best_enc)


def _jump_back(stack, path, order, other):
    """Merge the automorphism revealed by two equal-encoding leaves.

    The permutation taking this leaf's labeling to the other's fixes every
    individualized vertex above the branches' divergence frame, so the two
    subtrees there are interchangeable: record the orbit and unwind.
    """
    other_path, other_order = other
    div = 0
    while other_path[div] == path[div]:
        div += 1
    fr = stack[div]
    for a, b in zip(order, other_order):
        fr.union(a, b)
    del stack[div + 1:]


def _pack(n, rows):
    bits = 0
    total = 0
    for k, row in enumerate(rows, start=1):
        bits = (bits << k) | row
        total += k
    nbytes = (total + 7) // 8
    return b"G" + n.to_bytes(4, "big") + bits.to_bytes(max(nbytes, 1), "big")
