"""Constructors for the rooted trees and unicyclic graphs used in the
extremal characterization: brooms, caterpillars, ``T(n, d, floor(d/2))``,
``C_g(T_1, ..., T_g)`` assembly, the girth-3 and girth-4 families and the
extremal graphs themselves."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from .graph_core import Graph, GraphError, build_graph, rooted_level_code


class BadParamsError(ValueError):
    pass


class InvalidSpecError(ValueError):
    pass


@dataclass(frozen=True)
class RootedTree:
    tree: Graph
    root: int
    canonical_level_code: tuple[int, ...] = field(init=False, compare=False)

    def __post_init__(self):
        if self.tree.m != self.tree.n - 1:
            raise InvalidSpecError(f"rooted tree has {self.tree.m} edges on {self.tree.n} vertices")
        if not 0 <= self.root < self.tree.n:
            raise InvalidSpecError(f"root {self.root} outside tree of order {self.tree.n}")
        object.__setattr__(self, "canonical_level_code", rooted_level_code(self.tree.adjacency, self.root))

    @property
    def order(self) -> int:
        return self.tree.n

    def same_shape(self, other: "RootedTree") -> bool:
        return self.canonical_level_code == other.canonical_level_code


def rooted(n: int, edges: Sequence[tuple[int, int]], root: int = 0) -> RootedTree:
    return RootedTree(build_graph(n, edges), root)


def from_level_sequence(levels: Sequence[int]) -> RootedTree:
    """Rooted tree whose preorder depth sequence is ``levels`` (root first)."""
    edges = []
    stack: list[int] = []
    for v, depth in enumerate(levels):
        del stack[depth:]
        if depth:
            edges.append((stack[-1], v))
        stack.append(v)
    return rooted(len(levels), edges, 0)


def star(order: int) -> RootedTree:
    """``S_order`` rooted at its centre."""
    if order < 1:
        raise BadParamsError("star needs order >= 1")
    return rooted(order, [(0, i) for i in range(1, order)], 0)


def path(order: int) -> RootedTree:
    """``P_order`` rooted at an end vertex."""
    if order < 1:
        raise BadParamsError("path needs order >= 1")
    return rooted(order, [(i, i + 1) for i in range(order - 1)], 0)


SINGLE = star(1)  # S_1, the one-vertex tree


def broom(k1: int, k2: int, i: int) -> RootedTree:
    """``P^i_{k1,k2}``: two paths of lengths ``k1`` and ``k2`` and ``i``
    pendant vertices sharing the root (vertex 0).

    Vertices ``1..k1`` form the first arm (outward), ``k1+1..k1+k2`` the
    second, the pendants come last.
    """
    if min(k1, k2, i) < 0:
        raise BadParamsError("broom parameters must be nonnegative")
    edges = []
    prev = 0
    for v in range(1, k1 + 1):
        edges.append((prev, v))
        prev = v
    prev = 0
    for v in range(k1 + 1, k1 + k2 + 1):
        edges.append((prev, v))
        prev = v
    base = k1 + k2 + 1
    edges.extend((0, base + j) for j in range(i))
    return rooted(base + i, edges, 0)


def caterpillar(a: Sequence[int]) -> RootedTree:
    """``P(a_0, ..., a_l)``: backbone ``u_0..u_l`` (vertices ``0..l``) with
    ``a_j`` pendants at ``u_j``; rooted at ``u_l``."""
    if len(a) < 1 or min(a) < 0:
        raise BadParamsError("caterpillar needs a nonempty sequence of nonnegative counts")
    l = len(a) - 1
    edges = [(j, j + 1) for j in range(l)]
    nxt = l + 1
    for j, cnt in enumerate(a):
        for _ in range(cnt):
            edges.append((j, nxt))
            nxt += 1
    return rooted(nxt, edges, l)


def t_ndd(n: int, d: int) -> RootedTree:
    """``T(n, d, floor(d/2))``: path ``u_0..u_d`` with ``n-d-1`` pendants at
    ``u_floor(d/2)``, rooted there."""
    if not (2 <= d <= n - 1):
        raise BadParamsError(f"t_ndd needs 2 <= d <= n-1, got n={n}, d={d}")
    return broom(d // 2, d - d // 2, n - d - 1)


def pendant_path(length: int, b: int, i: int) -> RootedTree:
    """Path ``w_0..w_length`` rooted at ``w_length`` with ``b`` pendants at
    ``w_i`` (vertex ``j`` is ``w_j``)."""
    if length < 0 or b < 0:
        raise BadParamsError("pendant_path needs nonnegative length and b")
    if b and not 0 <= i <= length:
        raise BadParamsError(f"pendant position i={i} outside 0..{length}")
    edges = [(j, j + 1) for j in range(length)]
    edges.extend((i, length + 1 + t) for t in range(b))
    return rooted(length + 1 + b, edges, length)


def join_at_roots(*trees: RootedTree) -> RootedTree:
    """Identify the roots of all ``trees`` into a single new root."""
    edges = []
    nxt = 1
    for t in trees:
        mapping = {t.root: 0}
        for v in range(t.order):
            if v != t.root:
                mapping[v] = nxt
                nxt += 1
        edges.extend((mapping[u], mapping[v]) for u, v in t.tree.edges)
    return rooted(nxt, edges, 0)


def add_pendants(t: RootedTree, count: int) -> RootedTree:
    return join_at_roots(t, star(count + 1))


# ------------------------------------------------------------ assembly


@dataclass(frozen=True)
class UnicyclicSpec:
    """``C_g(T_1, ..., T_g)``: the root of ``trees[i]`` is identified with
    cycle vertex ``v_{i+1}``."""

    g: int
    trees: tuple[RootedTree, ...]

    def __post_init__(self):
        object.__setattr__(self, "trees", tuple(self.trees))
        if self.g < 3:
            raise InvalidSpecError(f"cycle length must be >= 3, got {self.g}")
        if len(self.trees) != self.g:
            raise InvalidSpecError(f"need {self.g} trees, got {len(self.trees)}")

    @property
    def n(self) -> int:
        return sum(t.order for t in self.trees)

    def replace(self, index: int, tree: RootedTree) -> "UnicyclicSpec":
        trees = list(self.trees)
        trees[index] = tree
        return UnicyclicSpec(self.g, tuple(trees))


def cyc(*trees: RootedTree) -> UnicyclicSpec:
    return UnicyclicSpec(len(trees), tuple(trees))


def assemble_with_map(spec: UnicyclicSpec) -> tuple[Graph, list[dict[int, int]]]:
    """Assemble ``spec``; cycle vertex ``v_{i+1}`` becomes vertex ``i`` and
    tree vertices follow in tree order. Also returns, per tree, the map from
    tree vertex ids to graph vertex ids."""
    g = spec.g
    edges = [(i, (i + 1) % g) for i in range(g)]
    nxt = g
    maps = []
    for idx, t in enumerate(spec.trees):
        mapping = {t.root: idx}
        for v in range(t.order):
            if v != t.root:
                mapping[v] = nxt
                nxt += 1
        edges.extend((mapping[u], mapping[v]) for u, v in t.tree.edges)
        maps.append(mapping)
    try:
        graph = build_graph(nxt, edges)
    except GraphError as exc:  # only possible for malformed trees
        raise InvalidSpecError(str(exc)) from exc
    return graph, maps


def assemble(spec: UnicyclicSpec) -> Graph:
    return assemble_with_map(spec)[0]


# ----------------------------------------------------- girth-3 families

G3_VARIANTS = ("11", "12", "21", "22")


def g3_spec(variant: str, l1: int, l2: int, a: int) -> UnicyclicSpec:
    """Girth-3 graphs of order ``l1 + l2 + a + 3``:

    ``11``: ``C_3(P^a_{l1}, P_{l2+1}, S_1)``;
    ``12``: ``C_3(P_{l1+1}, P_{l2+1}, S_{a+1})``;
    ``21``: ``C_3(P^{a-1}_{l1,l2+1}, S_1, S_1)``;
    ``22``: ``C_3(P^0_{l1,l2+1}, S_a, S_1)``.
    """
    variant = str(variant).removeprefix("G3_")
    if min(l1, l2, a) < 0:
        raise BadParamsError("l1, l2, a must be nonnegative")
    if variant == "11":
        return cyc(broom(l1, 0, a), path(l2 + 1), SINGLE)
    if variant == "12":
        return cyc(path(l1 + 1), path(l2 + 1), star(a + 1))
    if a < 1:
        raise BadParamsError(f"variant {variant} needs a >= 1")
    if variant == "21":
        return cyc(broom(l1, l2 + 1, a - 1), SINGLE, SINGLE)
    if variant == "22":
        return cyc(broom(l1, l2 + 1, 0), star(a), SINGLE)
    raise BadParamsError(f"unknown girth-3 variant {variant!r}")


def g3_family(variant: str, l1: int, l2: int, a: int) -> Graph:
    return assemble(g3_spec(variant, l1, l2, a))


# ----------------------------------------------------- girth-4 families


def g4_spec(variant: str, l1: int, l2: int, a: int = 0, b: int = 0, i: int = 0) -> UnicyclicSpec:
    """Girth-4 graphs ``G^4_{jk}(l1, l2, a, b, i)`` of order
    ``l1 + l2 + a + b + 4``; ``variant`` is ``"jk"``.

    ``T*`` is the path ``w_0..w_{l2}`` rooted at ``w_{l2}`` with ``b``
    pendants at ``w_i``. Family ``1`` glues the arm ``P_{l1+1}`` and ``T*``
    at ``v_1``; family ``2`` puts the arm at ``v_1`` and ``T*`` at ``v_2``;
    family ``3`` puts ``T*`` at ``v_3``. Finally ``a`` pendants go to
    ``v_k``. With ``b = 0`` the position ``i`` is irrelevant and is
    normalised to ``0``.
    """
    variant = str(variant).removeprefix("G4_")
    if len(variant) != 2 or variant[0] not in "123" or variant[1] not in "1234":
        raise BadParamsError(f"unknown girth-4 variant {variant!r}")
    fam, k = int(variant[0]), int(variant[1])
    if min(l1, l2, a, b) < 0:
        raise BadParamsError("l1, l2, a, b must be nonnegative")
    if b == 0:
        i = 0
    elif not 1 <= i <= l2:
        raise BadParamsError(f"need 1 <= i <= l2 when b > 0, got i={i}, l2={l2}")
    arm = path(l1 + 1)
    tstar = pendant_path(l2, b, i)
    trees = [SINGLE] * 4
    if fam == 1:
        trees[0] = join_at_roots(arm, tstar)
    elif fam == 2:
        trees[0], trees[1] = arm, tstar
    else:
        trees[0], trees[2] = arm, tstar
    if a:
        trees[k - 1] = add_pendants(trees[k - 1], a)
    return cyc(*trees)


def g4_family(variant: str, l1: int, l2: int, a: int = 0, b: int = 0, i: int = 0) -> Graph:
    return assemble(g4_spec(variant, l1, l2, a, b, i))


# ------------------------------------------------------- extremal graphs

EXTREMAL_MIN_ORDER = 16


def extremal_spec(n: int, d: int, *, check_order: bool = True) -> UnicyclicSpec:
    """The claimed unique minimiser of ``Sz*_e`` over unicyclic graphs of
    order ``n > 15`` and diameter ``d``.

    ``check_order=False`` builds the same shape for smaller ``n`` (used to
    report findings below the threshold).
    """
    if check_order and n < EXTREMAL_MIN_ORDER:
        raise BadParamsError(f"extremal graphs are characterised for n > 15, got n={n}")
    if not 3 <= d <= n - 2:
        raise BadParamsError(f"need 3 <= d <= n-2, got n={n}, d={d}")
    h = d // 2
    if d == n - 2:
        return cyc(path(h + 1), path((d - 1) // 2 + 1), SINGLE)
    if d == n - 3:
        return cyc(broom(h, d - h, n - d - 3), SINGLE, SINGLE)
    if d >= 6:
        return cyc(broom(h, d - h, n - d - 4), SINGLE, SINGLE, SINGLE)
    if d >= 4:
        return cyc(broom(d - 2, 0, n - d - 2), SINGLE, SINGLE, SINGLE)
    return cyc(star(n - 3), SINGLE, SINGLE, SINGLE)


def extremal(n: int, d: int) -> Graph:
    return assemble(extremal_spec(n, d))


# ------------------------------------------------------- text parameters

FAMILY_VARIANTS = {"path", "star", "cycle", "broom", "caterpillar", "t_ndd", "g3", "g4", "extremal"}


@dataclass(frozen=True)
class FamilyParams:
    """A family name plus its integer parameters, e.g.
    ``extremal n=16 d=7`` or ``g4 variant=32 l1=0 l2=5 a=0 b=3 i=3``."""

    variant: str
    params: tuple[tuple[str, object], ...]

    @classmethod
    def parse(cls, text: str) -> "FamilyParams":
        tokens = text.split()
        if not tokens:
            raise BadParamsError("empty family spec")
        variant = tokens[0].lower()
        if variant not in FAMILY_VARIANTS:
            raise BadParamsError(f"unknown family {tokens[0]!r}")
        params = []
        for tok in tokens[1:]:
            m = re.fullmatch(r"(\w+)=([\w,]+)", tok)
            if not m:
                raise BadParamsError(f"bad parameter {tok!r}; expected key=value")
            key, raw = m.groups()
            if key == "variant":
                value: object = raw
            elif "," in raw or key == "a" and variant == "caterpillar":
                value = tuple(int(x) for x in raw.split(",") if x)
            else:
                value = int(raw)
            params.append((key, value))
        return cls(variant, tuple(params))

    def format(self) -> str:
        parts = [self.variant]
        for key, value in self.params:
            if isinstance(value, tuple):
                value = ",".join(str(x) for x in value)
            parts.append(f"{key}={value}")
        return " ".join(parts)

    def build(self) -> Graph:
        p = dict(self.params)
        try:
            if self.variant == "path":
                return path(p["n"]).tree
            if self.variant == "star":
                return star(p["n"]).tree
            if self.variant == "cycle":
                return assemble(UnicyclicSpec(p["n"], (SINGLE,) * p["n"]))
            if self.variant == "broom":
                return broom(p.get("k1", 0), p.get("k2", 0), p.get("i", 0)).tree
            if self.variant == "caterpillar":
                return caterpillar(p["a"]).tree
            if self.variant == "t_ndd":
                return t_ndd(p["n"], p["d"]).tree
            if self.variant == "g3":
                return g3_family(str(p["variant"]), p["l1"], p["l2"], p["a"])
            if self.variant == "g4":
                return g4_family(
                    str(p["variant"]), p["l1"], p["l2"], p.get("a", 0), p.get("b", 0), p.get("i", 0)
                )
            return extremal(p["n"], p["d"])
        except KeyError as exc:
            raise BadParamsError(f"family {self.variant!r} is missing parameter {exc.args[0]!r}") from None
