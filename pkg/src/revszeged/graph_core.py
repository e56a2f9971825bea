"""Simple undirected graphs, BFS distances, the unique cycle of a unicyclic
graph, canonical codes and graph6 / edge-list I/O."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterable, Sequence

Edge = tuple[int, int]


class GraphError(ValueError):
    pass


class LoopError(GraphError):
    pass


class ParallelEdgeError(GraphError):
    pass


class DisconnectedError(GraphError):
    pass


class NoCycleError(GraphError):
    pass


class NotUnicyclicError(GraphError):
    pass


class TooLargeError(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    """Immutable simple connected graph on vertices ``0..n-1``.

    ``edges`` holds each edge once as ``(u, v)`` with ``u < v``, sorted.
    """

    n: int
    edges: tuple[Edge, ...]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def edge_index(self, e: Edge) -> int:
        u, v = e
        key = (u, v) if u < v else (v, u)
        lo, hi = 0, len(self.edges)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.edges[mid] < key:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(self.edges) and self.edges[lo] == key:
            return lo
        raise KeyError(e)


def _adjacency(n: int, edges: Iterable[Edge]) -> tuple[tuple[int, ...], ...]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return tuple(tuple(sorted(a)) for a in adj)


def _components(n: int, adj: Sequence[Sequence[int]]) -> list[list[int]]:
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def build_graph(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Validate an edge list and return a :class:`Graph`.

    Raises ``LoopError``, ``ParallelEdgeError`` or ``DisconnectedError``
    naming the offending edge / component, and ``GraphError`` for ids out of
    range.
    """
    if n < 1:
        raise GraphError(f"graph needs at least one vertex, got n={n}")
    seen: set[Edge] = set()
    norm: list[Edge] = []
    for pair in edges:
        u, v = int(pair[0]), int(pair[1])
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) references a vertex outside 0..{n - 1}")
        if u == v:
            raise LoopError(f"loop at vertex {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise ParallelEdgeError(f"parallel edge {key}")
        seen.add(key)
        norm.append(key)
    norm.sort()
    adj = _adjacency(n, norm)
    comps = _components(n, adj)
    if len(comps) > 1:
        raise DisconnectedError(
            f"graph has {len(comps)} components; vertex {comps[1][0]} unreachable from 0"
        )
    return Graph(n, tuple(norm), adj)


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """Return the graph with vertex ``v`` renamed ``perm[v]``."""
    return build_graph(g.n, [(perm[u], perm[v]) for u, v in g.edges])


# ---------------------------------------------------------------- distances


@dataclass(frozen=True)
class DistanceMatrix:
    dist: tuple[tuple[int, ...], ...]
    diameter: int
    transmissions: tuple[int, ...]

    def edge_vertex(self, e: Edge, w: int) -> int:
        """Distance from edge ``e`` to vertex ``w`` (closer endpoint)."""
        a, b = self.dist[e[0]][w], self.dist[e[1]][w]
        return a if a < b else b

    def edge_edge(self, e: Edge, f: Edge) -> int:
        return min(self.edge_vertex(e, f[0]), self.edge_vertex(e, f[1]))


def bfs_row(adj: Sequence[Sequence[int]], s: int) -> list[int]:
    n = len(adj)
    row = [-1] * n
    row[s] = 0
    queue = deque([s])
    while queue:
        x = queue.popleft()
        dx = row[x] + 1
        for y in adj[x]:
            if row[y] < 0:
                row[y] = dx
                queue.append(y)
    return row


def distances(g: Graph) -> DistanceMatrix:
    rows = tuple(tuple(bfs_row(g.adjacency, s)) for s in range(g.n))
    return DistanceMatrix(
        dist=rows,
        diameter=max(max(r) for r in rows),
        transmissions=tuple(sum(r) for r in rows),
    )


# ------------------------------------------------------------------ cycles


@dataclass(frozen=True)
class CycleInfo:
    cycle_vertices: tuple[int, ...]

    @property
    def g(self) -> int:
        return len(self.cycle_vertices)


def unique_cycle(g: Graph) -> CycleInfo:
    """Return the cycle of a unicyclic graph, starting at its smallest vertex.

    The direction is chosen so the second vertex is the smaller of the two
    cycle neighbours of the first.
    """
    if g.m == g.n - 1:
        raise NoCycleError("graph is a tree")
    if g.m > g.n:
        raise NotUnicyclicError(f"graph has {g.m} edges on {g.n} vertices")
    deg = [len(a) for a in g.adjacency]
    alive = [True] * g.n
    leaves = [v for v in range(g.n) if deg[v] == 1]
    while leaves:
        x = leaves.pop()
        alive[x] = False
        for y in g.adjacency[x]:
            if alive[y]:
                deg[y] -= 1
                if deg[y] == 1:
                    leaves.append(y)
    on_cycle = [v for v in range(g.n) if alive[v]]
    start = on_cycle[0]
    nbrs = sorted(y for y in g.adjacency[start] if alive[y])
    order = [start]
    prev, cur = start, nbrs[0]
    while cur != start:
        order.append(cur)
        nxt = next(y for y in g.adjacency[cur] if alive[y] and y != prev)
        prev, cur = cur, nxt
    return CycleInfo(tuple(order))


def cycle_distance(g: int, i: int, j: int) -> int:
    """Distance between positions ``i`` and ``j`` on a ``g``-cycle."""
    k = abs(i - j) % g
    return min(k, g - k)


def cycle_distance_deltas(g: int, j: int) -> tuple[int, int]:
    """``(d(v2,vj) - d(v1,vj) + 1, d(vg,vj) - d(v1,vj) + 1)`` on ``C_g``
    with 1-based vertex names ``v1..vg``."""
    if g < 3 or not 2 <= j <= g - 1:
        raise IndexError(f"need g >= 3 and 2 <= j <= g-1, got g={g}, j={j}")
    d1 = cycle_distance(g, 1, j)
    return cycle_distance(g, 2, j) - d1 + 1, cycle_distance(g, g, j) - d1 + 1


# --------------------------------------------------------- canonical codes

TREE_TAG = b"T"
UNICYCLIC_TAG = b"U"
GENERAL_TAG = b"G"
GENERAL_LIMIT = 10


def rooted_level_code(
    adj: Sequence[Sequence[int]], root: int, blocked: frozenset[int] | set[int] = frozenset()
) -> tuple[int, ...]:
    """Canonical level sequence of the tree hanging from ``root``.

    Vertices in ``blocked`` are not entered. Children are ordered by
    decreasing level sequence, which yields the lexicographically largest
    preorder depth sequence of the rooted tree.
    """
    parent = {root: -1}
    order = [root]
    stack = [root]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in parent and y not in blocked:
                parent[y] = x
                order.append(y)
                stack.append(y)
    codes: dict[int, tuple[int, ...]] = {}
    children: dict[int, list[tuple[int, ...]]] = {v: [] for v in order}
    for v in reversed(order):
        kids = children[v]
        kids.sort(reverse=True)
        code = [0]
        for c in kids:
            code.extend(x + 1 for x in c)
        codes[v] = tuple(code)
        p = parent[v]
        if p >= 0:
            children[p].append(codes[v])
    return codes[root]


def tree_centers(g: Graph) -> list[int]:
    deg = [len(a) for a in g.adjacency]
    layer = [v for v in range(g.n) if deg[v] <= 1]
    remaining = g.n
    removed = [False] * g.n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for x in layer:
            removed[x] = True
            for y in g.adjacency[x]:
                if not removed[y]:
                    deg[y] -= 1
                    if deg[y] == 1:
                        nxt.append(y)
        layer = nxt
    return sorted(v for v in range(g.n) if not removed[v])


def dihedral_min(seq: Sequence) -> tuple:
    """Lexicographically least rotation or reflection of ``seq``."""
    s = list(seq)
    k = len(s)
    best = tuple(s)
    rev = s[::-1]
    for r in range(k):
        a = tuple(s[r:] + s[:r])
        b = tuple(rev[r:] + rev[:r])
        if a < best:
            best = a
        if b < best:
            best = b
    return best


def encode_code_sequence(seqs: Sequence[Sequence[int]]) -> bytes:
    out = bytearray()
    for s in seqs:
        out.extend(s)
        out.append(0xFF)
    return bytes(out)


def _tree_code(g: Graph) -> bytes:
    codes = [rooted_level_code(g.adjacency, c) for c in tree_centers(g)]
    return TREE_TAG + encode_code_sequence([max(codes)])


def unicyclic_code_parts(g: Graph) -> tuple[int, tuple[tuple[int, ...], ...]]:
    cyc = unique_cycle(g).cycle_vertices
    blocked = set(cyc)
    seq = []
    for v in cyc:
        blocked.discard(v)
        seq.append(rooted_level_code(g.adjacency, v, blocked))
        blocked.add(v)
    return len(cyc), dihedral_min([(len(s), s) for s in seq])


def unicyclic_code_from_trees(g: int, ordered: Sequence[tuple[int, ...]]) -> bytes:
    """Code for a cycle of length ``g`` whose vertices carry, in ``ordered``
    (already dihedral-minimal by ``(size, code)``), these rooted trees."""
    return UNICYCLIC_TAG + bytes([g]) + encode_code_sequence(ordered)


def _general_code(g: Graph) -> bytes:
    if g.n > GENERAL_LIMIT:
        raise TooLargeError(f"general canonical labeling supports n <= {GENERAL_LIMIT}")
    # colour refinement, then exhaust orderings inside the final cells
    colours = [len(a) for a in g.adjacency]
    while True:
        sig = [(colours[v], tuple(sorted(colours[w] for w in g.adjacency[v]))) for v in range(g.n)]
        ranks = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [ranks[s] for s in sig]
        if len(set(new)) == len(set(colours)):
            colours = new
            break
        colours = new
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colours):
        cells.setdefault(c, []).append(v)
    ordered_cells = [cells[c] for c in sorted(cells)]
    best = None
    for choice in product(*(permutations(cell) for cell in ordered_cells)):
        order = [v for part in choice for v in part]
        pos = {v: i for i, v in enumerate(order)}
        bits = tuple(
            sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in g.edges)
        )
        if best is None or bits < best:
            best = bits
    body = bytearray([g.n])
    for u, v in best:
        body.extend((u, v))
    return GENERAL_TAG + bytes(body)


def canonical_code(g: Graph) -> bytes:
    """Isomorphism-complete code: trees via centre-rooted level sequences,
    unicyclic graphs via a dihedral-minimal sequence of rooted tree codes,
    anything else by refinement plus exhaustive ordering (``n <= 10``)."""
    if g.m == g.n - 1:
        return _tree_code(g)
    if g.m == g.n:
        cyc_len, parts = unicyclic_code_parts(g)
        return unicyclic_code_from_trees(cyc_len, [code for _, code in parts])
    return _general_code(g)


# ----------------------------------------------------------------- graph6


def _n_to_graph6(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n < 258048:
        return bytes([126, ((n >> 12) & 63) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63])
    return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])


def to_graph6(g: Graph) -> str:
    """Standard graph6 string (no ``>>graph6<<`` header)."""
    bits = []
    edge_set = set(g.edges)
    for v in range(1, g.n):
        for u in range(v):
            bits.append(1 if (u, v) in edge_set else 0)
    bits.extend([0] * (-len(bits) % 6))
    out = bytearray(_n_to_graph6(g.n))
    for i in range(0, len(bits), 6):
        val = 0
        for b in bits[i : i + 6]:
            val = (val << 1) | b
        out.append(val + 63)
    return out.decode("ascii")


def parse_graph6(s: str) -> Graph:
    data = s.strip()
    if data.startswith(">>graph6<<"):
        data = data[len(">>graph6<<") :]
    raw = [ord(c) - 63 for c in data]
    if any(not 0 <= x <= 63 for x in raw):
        raise GraphError(f"invalid graph6 character in {s!r}")
    if raw[0] != 63:
        n, pos = raw[0], 1
    elif raw[1] != 63:
        n = (raw[1] << 12) | (raw[2] << 6) | raw[3]
        pos = 4
    else:
        n = 0
        for x in raw[2:8]:
            n = (n << 6) | x
        pos = 8
    need = (n * (n - 1) // 2 + 5) // 6
    body = raw[pos:]
    if len(body) != need:
        raise GraphError(f"graph6 body has {len(body)} bytes, expected {need} for n={n}")
    edges = []
    k = 0
    for v in range(1, n):
        for u in range(v):
            if (body[k // 6] >> (5 - k % 6)) & 1:
                edges.append((u, v))
            k += 1
    return build_graph(n, edges)


# -------------------------------------------------------------- edge lists


def to_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    """Parse ``"n m"`` followed by ``m`` lines ``"u v"``."""
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise GraphError("edge list must start with an 'n m' header line")
    n, m = int(rows[0][0]), int(rows[0][1])
    body = rows[1:]
    if len(body) != m:
        raise GraphError(f"header announces {m} edges but {len(body)} follow")
    return build_graph(n, [(int(a), int(b)) for a, b in body])
