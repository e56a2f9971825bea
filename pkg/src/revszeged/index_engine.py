"""Exact Wiener / Szeged family indices and the unicyclic decomposition
identities that relate them.

Every revised quantity is a sum of products of half-integers, so values are
held as :class:`Q4` (integer count of quarters) and never as floats.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction
from functools import total_ordering
from typing import TYPE_CHECKING, Union

from .graph_core import DistanceMatrix, Edge, Graph, cycle_distance, distances

if TYPE_CHECKING:
    from .families import UnicyclicSpec


class EdgeNotFoundError(KeyError):
    pass


@total_ordering
@dataclass(frozen=True)
class Q4:
    """Exact quarter-integer ``quarters / 4``."""

    quarters: int

    @classmethod
    def of(cls, value: Union[int, Fraction, "Q4"]) -> "Q4":
        if isinstance(value, Q4):
            return value
        frac = Fraction(value) * 4
        if frac.denominator != 1:
            raise ValueError(f"{value} is not a multiple of 1/4")
        return cls(int(frac))

    @classmethod
    def parse(cls, text: str) -> "Q4":
        """Inverse of :meth:`encode` (also accepts plain integers)."""
        if "/" in text:
            num, den = text.split("/")
            return cls.of(Fraction(int(num), int(den)))
        return cls(4 * int(text))

    def encode(self) -> str:
        return f"{self.quarters}/4"

    def as_fraction(self) -> Fraction:
        return Fraction(self.quarters, 4)

    def is_integer(self) -> bool:
        return self.quarters % 4 == 0

    def __int__(self) -> int:
        if not self.is_integer():
            raise ValueError(f"{self} is not an integer")
        return self.quarters // 4

    def __float__(self) -> float:
        return self.quarters / 4

    def __add__(self, other):
        if isinstance(other, int):
            return Q4(self.quarters + 4 * other)
        if isinstance(other, Q4):
            return Q4(self.quarters + other.quarters)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            return Q4(self.quarters - 4 * other)
        if isinstance(other, Q4):
            return Q4(self.quarters - other.quarters)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return Q4(4 * other - self.quarters)
        return NotImplemented

    def __neg__(self):
        return Q4(-self.quarters)

    def __mul__(self, other):
        if isinstance(other, int):
            return Q4(self.quarters * other)
        return NotImplemented

    __rmul__ = __mul__

    def __lt__(self, other):
        if isinstance(other, Q4):
            return self.quarters < other.quarters
        if isinstance(other, int):
            return self.quarters < 4 * other
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, Q4):
            return self.quarters == other.quarters
        if isinstance(other, int):
            return self.quarters == 4 * other
        if isinstance(other, Fraction):
            return self.as_fraction() == other
        return NotImplemented

    def __hash__(self):
        return hash(self.as_fraction())

    def sign(self) -> int:
        return (self.quarters > 0) - (self.quarters < 0)

    def __str__(self) -> str:
        return str(self.as_fraction())


@dataclass(frozen=True)
class VertexPartition:
    n_u: int
    n_v: int
    n_0: int


@dataclass(frozen=True)
class EdgePartition:
    m_u: int
    m_v: int
    m_0: int


@dataclass(frozen=True)
class IndexSuite:
    W: int
    W_e_min: int
    W_e_line: int
    Sz: Q4
    Sz_star: Q4
    Sz_e: int
    Sz_e_star: Q4

    def get(self, kind: str) -> Q4:
        return Q4.of(getattr(self, INDEX_KINDS[kind]))

    def to_dict(self) -> dict:
        return {k: {"exact": self.get(k).encode(), "decimal": float(self.get(k))} for k in INDEX_KINDS}

    @classmethod
    def from_dict(cls, d: dict) -> "IndexSuite":
        vals = {k: Q4.parse(d[k]["exact"]) for k in INDEX_KINDS}
        ints = {k: int(v) for k, v in vals.items() if k not in ("Sz", "Sz_star", "Sz_e_star")}
        return cls(Sz=vals["Sz"], Sz_star=vals["Sz_star"], Sz_e_star=vals["Sz_e_star"], **ints)


# CLI / report names -> IndexSuite attributes
INDEX_KINDS = {
    "W": "W",
    "W_e_min": "W_e_min",
    "W_e_line": "W_e_line",
    "Sz": "Sz",
    "Sz_star": "Sz_star",
    "Sz_e": "Sz_e",
    "Sz_e_star": "Sz_e_star",
}


def _check_edge(g: Graph, e: Edge) -> None:
    u, v = e
    if not (0 <= u < g.n and 0 <= v < g.n) or not g.has_edge(u, v):
        raise EdgeNotFoundError(e)


def vertex_partition(g: Graph, e: Edge, dm: DistanceMatrix) -> VertexPartition:
    _check_edge(g, e)
    du, dv = dm.dist[e[0]], dm.dist[e[1]]
    nu = nv = 0
    for w in range(g.n):
        if du[w] < dv[w]:
            nu += 1
        elif dv[w] < du[w]:
            nv += 1
    return VertexPartition(nu, nv, g.n - nu - nv)


def edge_partition(g: Graph, e: Edge, dm: DistanceMatrix) -> EdgePartition:
    """Edges strictly nearer ``u``, strictly nearer ``v``, and equidistant.

    ``e`` itself is equidistant (distance 0 to both ends) and lands in
    ``m_0``.
    """
    _check_edge(g, e)
    du, dv = dm.dist[e[0]], dm.dist[e[1]]
    mu = mv = 0
    for a, b in g.edges:
        fu = du[a] if du[a] < du[b] else du[b]
        fv = dv[a] if dv[a] < dv[b] else dv[b]
        if fu < fv:
            mu += 1
        elif fv < fu:
            mv += 1
    return EdgePartition(mu, mv, g.m - mu - mv)


def index_suite(g: Graph, dm: DistanceMatrix | None = None) -> IndexSuite:
    if dm is None:
        dm = distances(g)
    d = dm.dist
    W = sum(dm.transmissions) // 2

    edges = g.edges
    m = len(edges)
    # per edge: distance from the edge to every vertex
    ev = [[min(x, y) for x, y in zip(d[a], d[b])] for a, b in edges]
    we = 0
    for i in range(m):
        row = ev[i]
        for j in range(i + 1, m):
            a, b = edges[j]
            we += row[a] if row[a] < row[b] else row[b]

    sz = sz_star = sz_e = sz_e_star = 0
    for a, b in edges:
        vp = vertex_partition(g, (a, b), dm)
        ep = edge_partition(g, (a, b), dm)
        sz += vp.n_u * vp.n_v
        sz_star += (2 * vp.n_u + vp.n_0) * (2 * vp.n_v + vp.n_0)
        sz_e += ep.m_u * ep.m_v
        sz_e_star += (2 * ep.m_u + ep.m_0) * (2 * ep.m_v + ep.m_0)
    return IndexSuite(
        W=W,
        W_e_min=we,
        W_e_line=we + m * (m - 1) // 2,
        Sz=Q4(4 * sz),
        Sz_star=Q4(sz_star),
        Sz_e=sz_e,
        Sz_e_star=Q4(sz_e_star),
    )


def sz_e_star(g: Graph, dm: DistanceMatrix | None = None) -> Q4:
    if dm is None:
        dm = distances(g)
    total = 0
    for e in g.edges:
        ep = edge_partition(g, e, dm)
        total += (2 * ep.m_u + ep.m_0) * (2 * ep.m_v + ep.m_0)
    return Q4(total)


def sz_e_star_closed_form(g: Graph, dm: DistanceMatrix | None = None) -> Q4:
    """``m^3/4 - 1/4 * sum_e (m_u - m_v)^2``; uses only the per-edge
    imbalance, never the equidistant counts."""
    if dm is None:
        dm = distances(g)
    imbalance = 0
    for e in g.edges:
        ep = edge_partition(g, e, dm)
        imbalance += (ep.m_u - ep.m_v) ** 2
    return Q4(g.m**3 - imbalance)


# ---------------------------------------------------------- decomposition


@dataclass(frozen=True)
class DecompositionReport:
    """Revised edge Szeged index of ``C_g(T_1..T_g)`` obtained along
    independent routes.

    ``direct`` comes from the definition; ``via_edge_szeged`` adds the
    correction term to the edge Szeged index; ``via_szeged`` works from the
    vertex Szeged index and root transmissions; ``via_tree_cycle_sums`` feeds
    ``s1 + s2`` (tree-edge and cycle-edge parts of the edge Szeged index,
    both in closed form) through the same correction. ``sz_e_via_szeged``
    is the edge Szeged index rebuilt from the vertex Szeged index.
    """

    direct: Q4
    via_edge_szeged: Q4
    sz_e_direct: int
    sz_e_via_szeged: int
    via_szeged: Q4
    via_tree_cycle_sums: Q4
    s1: int
    s2: int
    s1_direct: int
    s2_direct: int
    delta_g: int

    def to_dict(self) -> dict:
        out: dict = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = v.encode() if isinstance(v, Q4) else v
        out["consistent"] = self.consistent()
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "DecompositionReport":
        kw = {}
        for f in fields(cls):
            v = d[f.name]
            kw[f.name] = Q4.parse(v) if isinstance(v, str) else v
        return cls(**kw)

    def consistent(self) -> bool:
        return (
            self.direct == self.via_edge_szeged == self.via_szeged == self.via_tree_cycle_sums
            and self.sz_e_direct == self.sz_e_via_szeged
            and self.s1 == self.s1_direct
            and self.s2 == self.s2_direct
        )


def edge_szeged_correction(n: int, g: int, tree_edges: list[int]) -> Q4:
    """``Sz*_e - Sz_e`` for a unicyclic graph of order ``n`` and girth ``g``
    whose attached trees have the given edge counts."""
    q = n * (2 * n - 1) + (2 * n - 3) * g
    if g % 2:
        q += g * (5 - 4 * n) + 2 * (n * n - n) - sum(t * t for t in tree_edges)
    return Q4(q)


def sz_e_from_szeged(sz: int, n: int, g: int, root_transmissions: list[int]) -> int:
    return sz + sum(root_transmissions) - n * n + (n * g if g % 2 else g)


def sz_e_star_from_szeged(sz: int, n: int, g: int, root_transmissions: list[int], tree_edges: list[int]) -> Q4:
    q = 4 * sz + 4 * sum(root_transmissions) - (2 * n + 1) * (n - g)
    if g % 2:
        q += g + 2 * (n * n - n) - sum(t * t for t in tree_edges)
    return Q4(q)


def tree_edge_sum(n: int, tree_we: list[int], root_transmissions: list[int], tree_edges: list[int]) -> int:
    """Closed form for the edge Szeged contributions of all tree edges.

    ``tree_we`` are the edge Wiener indices of the attached trees under the
    closer-endpoint distance convention.
    """
    return (
        sum(tree_we)
        + sum((n - t) * dv for t, dv in zip(tree_edges, root_transmissions))
        - sum(t * (n - t) for t in tree_edges)
    )


def cycle_edge_sum(n: int, g: int, tree_edges: list[int]) -> int:
    """Closed form for the edge Szeged contributions of the cycle edges.

    The cross term runs over ordered pairs ``(i, j)``; the odd-girth
    correction runs over unordered pairs.
    """
    x = (g - 1) // 2  # ceil((g - 2) / 2)
    odd = g % 2
    total = g * x * x + x * g * (n - g) - odd * x * (n - g)
    for i in range(g):
        for j in range(g):
            total += tree_edges[i] * tree_edges[j] * cycle_distance(g, i, j)
    if odd:
        for i in range(g):
            for j in range(i + 1, g):
                total -= tree_edges[i] * tree_edges[j]
    return total


def decompose_unicyclic(spec: "UnicyclicSpec") -> DecompositionReport:
    from .families import assemble_with_map

    g_len = spec.g
    graph, vmap = assemble_with_map(spec)
    n = graph.n
    dm = distances(graph)
    suite = index_suite(graph, dm)
    tree_edges = [t.tree.m for t in spec.trees]
    root_tr = []
    tree_we = []
    for t in spec.trees:
        tdm = distances(t.tree)
        root_tr.append(tdm.transmissions[t.root])
        tree_we.append(index_suite(t.tree, tdm).W_e_min)

    cycle_edges = {tuple(sorted((i, (i + 1) % g_len))) for i in range(g_len)}
    s1_direct = s2_direct = 0
    for e in graph.edges:
        ep = edge_partition(graph, e, dm)
        if e in cycle_edges:
            s2_direct += ep.m_u * ep.m_v
        else:
            s1_direct += ep.m_u * ep.m_v

    sz = int(suite.Sz)
    correction = edge_szeged_correction(n, g_len, tree_edges)
    s1 = tree_edge_sum(n, tree_we, root_tr, tree_edges)
    s2 = cycle_edge_sum(n, g_len, tree_edges)
    return DecompositionReport(
        direct=suite.Sz_e_star,
        via_edge_szeged=correction + suite.Sz_e,
        sz_e_direct=suite.Sz_e,
        sz_e_via_szeged=sz_e_from_szeged(sz, n, g_len, root_tr),
        via_szeged=sz_e_star_from_szeged(sz, n, g_len, root_tr, tree_edges),
        via_tree_cycle_sums=correction + (s1 + s2),
        s1=s1,
        s2=s2,
        s1_direct=s1_direct,
        s2_direct=s2_direct,
        delta_g=g_len % 2,
    )


def index_value(g: Graph, kind: str, dm: DistanceMatrix | None = None) -> Q4:
    """One index as a :class:`Q4`, computing only what ``kind`` needs."""
    if kind not in INDEX_KINDS:
        raise ValueError(f"unknown index kind {kind!r}; expected one of {sorted(INDEX_KINDS)}")
    if dm is None:
        dm = distances(g)
    if kind == "Sz_e_star":
        return sz_e_star(g, dm)
    if kind == "Sz_e":
        return Q4(4 * sum(p.m_u * p.m_v for p in (edge_partition(g, e, dm) for e in g.edges)))
    if kind == "W":
        return Q4(2 * sum(dm.transmissions))
    return index_suite(g, dm).get(kind)
