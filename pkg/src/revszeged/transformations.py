"""Graph rewrites that never increase the (revised) edge Szeged index, each
paired with a prediction of how much (or in which direction) the index
moves, plus named comparisons between pairs of family graphs.

``check`` runs a rewrite, recomputes the index on both sides and reports
whether the prediction held. Predictions are the closed forms as published;
nothing here is tuned to make them agree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .families import (
    SINGLE,
    BadParamsError,
    RootedTree,
    UnicyclicSpec,
    assemble,
    assemble_with_map,
    broom,
    caterpillar,
    cyc,
    g3_family,
    g4_family,
    join_at_roots,
    path,
    pendant_path,
    rooted,
    star,
    t_ndd,
)
from .graph_core import Graph, build_graph, canonical_code, cycle_distance, distances, unique_cycle
from .index_engine import INDEX_KINDS, Q4, index_value


class PreconditionViolated(ValueError):
    pass


REVISED = "Sz_e_star"
EDGE = "Sz_e"
BOTH = frozenset({REVISED, EDGE})


@dataclass(frozen=True)
class Prediction:
    """Expected ``index(before) - index(after)``.

    ``delta`` is an exact value when one is claimed; ``signs`` is the set of
    allowed signs of the difference. ``kinds`` lists the indices the claim
    covers. ``details`` holds the intermediate quantities the prediction was
    computed from.
    """

    kinds: frozenset[str]
    delta: Q4 | None = None
    signs: frozenset[int] = frozenset()
    details: Mapping[str, object] = field(default_factory=dict)

    def agrees(self, actual: Q4) -> bool:
        if self.delta is not None and actual != self.delta:
            return False
        if self.signs and actual.sign() not in self.signs:
            return False
        return True


@dataclass(frozen=True)
class Rewrite:
    name: str
    params: Mapping[str, object] = field(default_factory=dict)

    @classmethod
    def of(cls, name: str, **params) -> "Rewrite":
        return cls(name, dict(params))

    def get(self, key: str, default=None):
        return self.params.get(key, default)


@dataclass(frozen=True)
class TransformReport:
    name: str
    before: Graph
    after: Graph
    kind: str
    value_before: Q4
    value_after: Q4
    actual_delta: Q4
    prediction: Prediction
    agrees: bool

    @property
    def predicted_delta(self) -> Q4 | None:
        return self.prediction.delta

    @property
    def predicted_signs(self) -> frozenset[int]:
        return self.prediction.signs

    def to_dict(self) -> dict:
        from .graph_core import to_graph6

        def q(x: Q4 | None):
            return None if x is None else {"exact": x.encode(), "decimal": float(x)}

        return {
            "name": self.name,
            "kind": self.kind,
            "before": to_graph6(self.before),
            "after": to_graph6(self.after),
            "value_before": q(self.value_before),
            "value_after": q(self.value_after),
            "actual_delta": q(self.actual_delta),
            "predicted_delta": q(self.prediction.delta),
            "predicted_signs": sorted(self.prediction.signs),
            "covers": sorted(self.prediction.kinds),
            "details": {k: _plain(v) for k, v in self.prediction.details.items()},
            "agrees": self.agrees,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TransformReport":
        from .graph_core import parse_graph6

        def q(x):
            return None if x is None else Q4.parse(x["exact"])

        pred = Prediction(
            frozenset(d["covers"]),
            delta=q(d["predicted_delta"]),
            signs=frozenset(d["predicted_signs"]),
            details=dict(d["details"]),
        )
        return cls(
            d["name"],
            parse_graph6(d["before"]),
            parse_graph6(d["after"]),
            d["kind"],
            q(d["value_before"]),
            q(d["value_after"]),
            q(d["actual_delta"]),
            pred,
            d["agrees"],
        )


def _plain(v):
    if isinstance(v, Q4):
        return v.encode()
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, tuple):
        return list(v)
    return v


def _q(x) -> Q4:
    return Q4.of(Fraction(x))


# ------------------------------------------------------ reading tree shapes


def as_spec(subject: Graph | UnicyclicSpec) -> UnicyclicSpec:
    """Normal form ``C_g(T_1..T_g)``; cycle order as reported by
    :func:`unique_cycle`."""
    if isinstance(subject, UnicyclicSpec):
        return subject
    cyc_vertices = unique_cycle(subject).cycle_vertices
    on_cycle = set(cyc_vertices)
    trees = []
    for v in cyc_vertices:
        ids = {v: 0}
        edges = []
        stack = [v]
        while stack:
            x = stack.pop()
            for y in subject.adjacency[x]:
                if y in on_cycle or y in ids:
                    continue
                ids[y] = len(ids)
                edges.append((ids[x], ids[y]))
                stack.append(y)
        trees.append(rooted(len(ids), edges, 0))
    return UnicyclicSpec(len(trees), tuple(trees))


def _children(t: RootedTree) -> list[list[int]]:
    kids: list[list[int]] = [[] for _ in range(t.order)]
    seen = {t.root}
    stack = [t.root]
    while stack:
        x = stack.pop()
        for y in t.tree.adjacency[x]:
            if y not in seen:
                seen.add(y)
                kids[x].append(y)
                stack.append(y)
    return kids


def _depths(t: RootedTree) -> list[int]:
    return list(distances(t.tree).dist[t.root])


def _root_path(t: RootedTree) -> list[int]:
    """Path from a deepest vertex (smallest id on ties) up to the root."""
    depth = _depths(t)
    far = max(range(t.order), key=lambda v: (depth[v], -v))
    out = [far]
    while out[-1] != t.root:
        x = out[-1]
        out.append(next(y for y in t.tree.adjacency[x] if depth[y] == depth[x] - 1))
    return out


def _require_shape(t: RootedTree, model: RootedTree, what: str) -> None:
    if not t.same_shape(model):
        raise PreconditionViolated(f"tree is not {what}")


def read_star(t: RootedTree, what: str = "a star rooted at its centre") -> int:
    """Number of pendants of a star rooted at its centre."""
    _require_shape(t, star(t.order), what)
    return t.order - 1


def read_broom(t: RootedTree, arms: tuple[int, int] | None = None, max_arms: int = 2) -> tuple[int, int, int]:
    """``(k1, k2, p)`` with ``t`` isomorphic (as a rooted tree) to
    ``P^p_{k1,k2}``.

    Without ``arms`` every root branch longer than one edge is an arm and
    every leaf child of the root is a pendant.
    """
    if arms is None:
        kids = _children(t)
        lengths = []
        for c in kids[t.root]:
            length, x = 1, c
            while kids[x]:
                if len(kids[x]) != 1:
                    raise PreconditionViolated("tree is not a broom")
                x = kids[x][0]
                length += 1
            if length >= 2:
                lengths.append(length)
        if len(lengths) > max_arms:
            raise PreconditionViolated(f"broom has more than {max_arms} arms")
        lengths = sorted(lengths, reverse=True) + [0, 0]
        arms = (lengths[0], lengths[1])
    k1, k2 = arms
    p = t.order - 1 - k1 - k2
    if min(k1, k2, p) < 0:
        raise PreconditionViolated("arm lengths exceed the tree")
    _require_shape(t, broom(k1, k2, p), f"the broom P^{p}_{{{k1},{k2}}}")
    return k1, k2, p


def read_pendant_path(t: RootedTree) -> tuple[int, int, int]:
    """``(length, b, i)``: path ``w_0..w_length`` rooted at ``w_length`` with
    ``b`` pendants at ``w_i`` (``i = 0`` when ``b = 0``)."""
    spine = _root_path(t)
    length = len(spine) - 1
    on_spine = {v: j for j, v in enumerate(spine)}
    extra = [v for v in range(t.order) if v not in on_spine]
    if not extra:
        return length, 0, 0
    anchors = set()
    for v in extra:
        nbrs = t.tree.adjacency[v]
        if len(nbrs) != 1 or nbrs[0] not in on_spine:
            raise PreconditionViolated("tree is not a path with pendants at one vertex")
        anchors.add(on_spine[nbrs[0]])
    if len(anchors) != 1:
        raise PreconditionViolated("pendants sit on more than one path vertex")
    return length, len(extra), anchors.pop()


def read_caterpillar(t: RootedTree) -> tuple[list[int], list[int]]:
    """Backbone ``u_0..u_l`` (``u_l`` the root, ``u_0`` a deepest leaf) and
    pendant counts ``a_0..a_l`` of a caterpillar."""
    spine = _root_path(t)
    on_spine = {v: j for j, v in enumerate(spine)}
    counts = [0] * len(spine)
    for v in range(t.order):
        if v in on_spine:
            continue
        nbrs = t.tree.adjacency[v]
        if len(nbrs) != 1 or nbrs[0] not in on_spine:
            raise PreconditionViolated("tree is not a caterpillar on its longest root path")
        counts[on_spine[nbrs[0]]] += 1
    return spine, counts


def _tree_diameter(t: RootedTree) -> int:
    return distances(t.tree).diameter


def _position(spec: UnicyclicSpec, rw: Rewrite, key: str = "k", default: int = 1) -> int:
    k = int(rw.get(key, default))
    if not 1 <= k <= spec.g:
        raise PreconditionViolated(f"{key}={k} outside cycle positions 1..{spec.g}")
    return k - 1


def _rewire(g: Graph, remove, add) -> Graph:
    edges = set(g.edges)
    for u, v in remove:
        e = (min(u, v), max(u, v))
        if e not in edges:
            raise PreconditionViolated(f"edge {e} not present")
        edges.discard(e)
    for u, v in add:
        edges.add((min(u, v), max(u, v)))
    return build_graph(g.n, sorted(edges))


def _shape_sign(before: Graph, after: Graph) -> frozenset[int]:
    return frozenset({0}) if canonical_code(before) == canonical_code(after) else frozenset({1})


# ------------------------------------------------------------- rewrites


def _star_collapse(spec: UnicyclicSpec, rw: Rewrite):
    k = _position(spec, rw)
    t = spec.trees[k]
    new = star(t.order)
    after = spec.replace(k, new)
    signs = frozenset({0}) if t.same_shape(new) else frozenset({1})
    return assemble(after), Prediction(BOTH, signs=signs, details={"order": t.order})


def _reroot_tndd(spec: UnicyclicSpec, rw: Rewrite):
    k = _position(spec, rw)
    t = spec.trees[k]
    d = _tree_diameter(t)
    if not 2 <= d <= t.order - 1:
        raise PreconditionViolated(f"tree diameter {d} must lie in 2..{t.order - 1}")
    new = t_ndd(t.order, d)
    signs = frozenset({0}) if t.same_shape(new) else frozenset({1})
    return assemble(spec.replace(k, new)), Prediction(BOTH, signs=signs, details={"order": t.order, "diameter": d})


def _flatten_caterpillar(spec: UnicyclicSpec, rw: Rewrite):
    k = _position(spec, rw)
    t = spec.trees[k]
    spine = _root_path(t)
    l = len(spine) - 1
    on_spine = set(spine)
    # size of the branch H_j hanging at u_j, spine excluded
    kids = _children(t)
    sizes = []
    for j, u in enumerate(spine):
        total = 1
        stack = [c for c in kids[u] if c not in on_spine]
        while stack:
            x = stack.pop()
            total += 1
            stack.extend(kids[x])
        sizes.append(total)
    if sizes[0] != 1:
        raise PreconditionViolated("deepest backbone vertex must be a leaf")
    new = caterpillar([0] + [s - 1 for s in sizes[1:]])
    signs = frozenset({0}) if t.same_shape(new) else frozenset({1})
    return assemble(spec.replace(k, new)), Prediction(BOTH, signs=signs, details={"backbone_length": l})


def caterpillar_counts(spec: UnicyclicSpec, position: int, k: int) -> dict[str, int]:
    """``a_k``, ``a_{k+1}``, ``X_k`` and ``Y_k`` for the caterpillar at cycle
    position ``position`` (1-based) and backbone index ``k``.

    ``X_k - 1`` is the edge count of the component of ``G - u_k - u_{k+1}``
    holding ``u_{k-1}``; ``Y_k = |E| - X_k - a_k - a_{k+1} - 1``.
    """
    t = spec.trees[position - 1]
    spine, counts = read_caterpillar(t)
    l = len(spine) - 1
    if counts[0]:
        raise PreconditionViolated("caterpillar must have no pendants at u_0")
    if not 1 <= k <= l - 1:
        raise PreconditionViolated(f"backbone index k={k} outside 1..{l - 1}")
    graph, maps = assemble_with_map(spec)
    vid = maps[position - 1]
    removed = {vid[spine[k]], vid[spine[k + 1]]}
    start = vid[spine[k - 1]]
    comp = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in graph.adjacency[x]:
            if y not in removed and y not in comp:
                comp.add(y)
                stack.append(y)
    comp_edges = sum(1 for u, v in graph.edges if u in comp and v in comp)
    if not comp_edges and k > 1:
        raise PreconditionViolated("component of u_{k-1} is empty")
    x_k = comp_edges + 1
    y_k = graph.m - x_k - counts[k] - counts[k + 1] - 1
    return {"a_k": counts[k], "a_k1": counts[k + 1], "X_k": x_k, "Y_k": y_k}


def _shift_pendants(spec: UnicyclicSpec, rw: Rewrite):
    pos = _position(spec, rw, "position", 1)
    k = int(rw.get("k", 1))
    direction = rw.get("direction", "forward")
    info = caterpillar_counts(spec, pos + 1, k)
    t = spec.trees[pos]
    spine, _ = read_caterpillar(t)
    graph, maps = assemble_with_map(spec)
    vid = maps[pos]
    uk, uk1 = vid[spine[k]], vid[spine[k + 1]]
    backbone = {vid[v] for v in spine}
    if direction == "forward":
        if info["a_k"] <= 0:
            raise PreconditionViolated("forward shift needs a_k > 0")
        src, dst = uk, uk1
        delta = info["a_k"] * (info["Y_k"] + info["a_k1"] - info["X_k"])
    elif direction == "backward":
        if info["a_k1"] <= 0:
            raise PreconditionViolated("backward shift needs a_{k+1} > 0")
        src, dst = uk1, uk
        delta = info["a_k1"] * (info["X_k"] + info["a_k"] - info["Y_k"])
    else:
        raise PreconditionViolated(f"direction must be forward or backward, got {direction!r}")
    # pendants of the source backbone vertex inside the caterpillar
    movers = [w for w in graph.adjacency[src] if w not in backbone and len(graph.adjacency[w]) == 1 and w >= spec.g]
    after = _rewire(graph, [(src, w) for w in movers], [(dst, w) for w in movers])
    return after, Prediction(BOTH, delta=Q4(4 * delta), details=dict(info, k=k, direction=direction))


def cycle_weights(spec: UnicyclicSpec) -> list[int]:
    """``N_i = sum_{j != i} |V(T_j)| d(v_i, v_j)`` along the cycle."""
    g = spec.g
    sizes = [t.order for t in spec.trees]
    return [sum(sizes[j] * cycle_distance(g, i, j) for j in range(g) if j != i) for i in range(g)]


def _merge_stars(spec: UnicyclicSpec, rw: Rewrite):
    k = _position(spec, rw, "k", 1)
    l = _position(spec, rw, "l", 2)
    if k == l:
        raise PreconditionViolated("k and l must differ")
    k1, k2, a = read_broom(spec.trees[k], rw.get("arms_k"))
    l1, l2, b = read_broom(spec.trees[l], rw.get("arms_l"))
    if a <= 0 or b <= 0:
        raise PreconditionViolated("both brooms need at least one pendant (a, b > 0)")
    g = spec.g
    odd = g % 2
    nw = cycle_weights(spec)
    dkl = cycle_distance(g, k, l)
    vk, vl = spec.trees[k].order, spec.trees[l].order
    # everything in quarters
    weight_k = 8 * nw[k] + 2 * odd * vk
    weight_l = 8 * nw[l] + 2 * odd * vl
    # ties go to k, as the choice rule is stated with ">="
    preferred = "to_k" if weight_l >= weight_k else "to_l"
    choice = rw.get("choice", "auto")
    if choice == "auto":
        choice = preferred
    if choice == "to_k":
        moved = b
        trees = spec.replace(k, broom(k1, k2, a + b)).replace(l, broom(l1, l2, 0))
        q = b * b * (8 * dkl - 2 * odd) + b * weight_l - b * weight_k
    elif choice == "to_l":
        moved = a
        trees = spec.replace(k, broom(k1, k2, 0)).replace(l, broom(l1, l2, a + b))
        q = a * a * (8 * dkl - 2 * odd) + a * weight_k - a * weight_l
    else:
        raise PreconditionViolated(f"choice must be auto, to_k or to_l, got {choice!r}")
    details = {
        "a": a,
        "b": b,
        "N_k": nw[k],
        "N_l": nw[l],
        "d_kl": dkl,
        "choice": choice,
        "moved": moved,
    }
    # strict decrease is only claimed for the direction the rule picks
    signs = frozenset({1}) if choice == preferred else frozenset()
    return assemble(trees), Prediction(frozenset({REVISED}), delta=Q4(q), signs=signs, details=details)


def _contract_cycle(spec: UnicyclicSpec, rw: Rewrite):
    g = spec.g
    if g < 5:
        raise PreconditionViolated("cycle contraction needs g >= 5")
    case = str(rw.get("case", "i"))
    t1, t2, tg = spec.trees[0], spec.trees[1], spec.trees[g - 1]
    if case == "i":
        l1, l2, a1 = read_broom(t1, rw.get("arms"))
        a2 = read_star(t2, "T_2 a star rooted at its centre")
        if tg.order != 1:
            raise PreconditionViolated("T_g must be a single vertex")
        if max(l1, l2) < 1:
            raise PreconditionViolated("T_1 needs a path of length >= 1")
        new1 = broom(l1, l2, a1 + a2 + 2)
        details = {"l1": l1, "l2": l2, "a1": a1, "a2": a2}
    elif case == "ii":
        a1 = read_star(t1, "T_1 a star rooted at its centre")
        l1, _, a2 = read_broom(t2, rw.get("arms"), max_arms=1)
        ag = read_star(tg, "T_g a star rooted at its centre")
        if l1 < 1:
            raise PreconditionViolated("T_2 needs a path of length >= 1")
        new1 = broom(l1, 0, a1 + a2 + ag + 2)
        details = {"l1": l1, "a1": a1, "a2": a2, "ag": ag}
    elif case == "iii":
        l1, _, a1 = read_broom(t1, rw.get("arms"), max_arms=1)
        a2 = read_star(t2, "T_2 a star rooted at its centre")
        ag = read_star(tg, "T_g a star rooted at its centre")
        if l1 < 1:
            raise PreconditionViolated("T_1 needs a path of length >= 1")
        rest = sum(t.tree.m for t in spec.trees[2 : g - 1])
        if rest < l1:
            raise PreconditionViolated(f"trees at v_3..v_(g-1) have {rest} < l1={l1} edges")
        new1 = broom(l1 + 1, 0, a1 + a2 + ag + 1)
        details = {"l1": l1, "a1": a1, "a2": a2, "ag": ag, "rest_edges": rest}
    else:
        raise PreconditionViolated(f"unknown case {case!r}; expected i, ii or iii")
    after = UnicyclicSpec(g - 2, (new1,) + tuple(spec.trees[2 : g - 1]))
    return assemble(after), Prediction(BOTH, signs=frozenset({1}), details=details)


def _endblock_shift(spec: UnicyclicSpec, rw: Rewrite):
    merged = join_at_roots(*spec.trees)
    after = UnicyclicSpec(spec.g, (merged,) + (SINGLE,) * (spec.g - 1))
    nontrivial = sum(1 for t in spec.trees if t.order > 1)
    signs = frozenset({0}) if nontrivial <= 1 else frozenset({1})
    return assemble(after), Prediction(frozenset({EDGE}), signs=signs, details={"nontrivial_trees": nontrivial})


def _rotate_path(spec: UnicyclicSpec, rw: Rewrite):
    if spec.g != 3:
        raise PreconditionViolated("path rotation needs a triangle")
    t1, t2, t3 = spec.trees
    arm = rw.get("l1")
    l1, _, a = read_broom(t1, None if arm is None else (int(arm), 0), max_arms=1)
    b = read_star(t2, "T_2 a star rooted at its centre")
    l2, c, i = read_pendant_path(t3)
    if c and not 0 < i < l2:
        raise PreconditionViolated(f"pendant position must satisfy 0 < i < l2, got i={i}, l2={l2}")
    if l2 < l1 + 1:
        raise PreconditionViolated(f"need l2 >= l1 + 1, got l1={l1}, l2={l2}")
    graph, maps = assemble_with_map(spec)
    m1, m3 = maps[0], maps[2]
    spine3 = _root_path(t3)  # w_0 .. w_l2
    w_top, w_next = m3[spine3[-1]], m3[spine3[-2]]
    spine1 = _root_path(t1) if l1 else [t1.root]
    u0 = m1[spine1[0]]
    if l1:
        # the arm read above is the longest root path of T_1
        if len(spine1) - 1 != l1:
            raise PreconditionViolated("arm of T_1 is not its longest root path")
    v1, v2 = 0, 1
    after = _rewire(graph, [(w_top, w_next), (w_top, v1), (w_top, v2)], [(w_next, v1), (w_next, v2), (w_top, u0)])
    q = (4 * b + 6) * (c + l2 - l1 - 1) + 2 * a * (1 + 2 * c + 2 * l2 - 2 * l1)
    details = {"l1": l1, "a": a, "b": b, "l2": l2, "c": c, "i": i}
    signs = frozenset({0}) if (l2 == l1 + 1 and a == 0 and c == 0) else frozenset({1})
    return after, Prediction(frozenset({REVISED}), delta=Q4(q), signs=signs, details=details)


def _c4_consolidate(spec: UnicyclicSpec, rw: Rewrite):
    if spec.g != 4:
        raise PreconditionViolated("consolidation needs a 4-cycle")
    t1, t2, t3, t4 = spec.trees
    m1, m2, m3, m4 = (t.tree.m for t in spec.trees)
    case = str(rw.get("case", "i"))
    if case == "i":
        if t1.order <= 1 or max(t2.order, t3.order, t4.order) <= 1:
            raise PreconditionViolated("need |V(T_1)| > 1 and another nontrivial tree")
        after = cyc(join_at_roots(t1, t2, t3, t4), SINGLE, SINGLE, SINGLE)
        delta = 2 * ((m1 + m2) * (m3 + m4) + (m1 + m4) * (m2 + m3))
        signs = frozenset({1})
    elif case == "ii":
        if t1.order <= 1 or t2.order <= 1 or max(t3.order, t4.order) <= 1:
            raise PreconditionViolated("need |V(T_1)|, |V(T_2)| > 1 and T_3 or T_4 nontrivial")
        after = cyc(join_at_roots(t1, t3, t4), t2, SINGLE, SINGLE)
        delta = 4 * m1 * m3 + 2 * m4 * (m1 + m2 + m3)
        signs = frozenset({1})
    elif case == "iii":
        if t4.order != 1 or t2.order <= 1:
            raise PreconditionViolated("need |V(T_4)| = 1 and |V(T_2)| > 1")
        after = cyc(join_at_roots(t1, t2, t4), SINGLE, t3, SINGLE)
        delta = 2 * m2 * (m1 - m3)
        signs = frozenset({0}) if m1 == m3 else frozenset({-1}) if m1 < m3 else frozenset({1})
    else:
        raise PreconditionViolated(f"unknown case {case!r}; expected i, ii or iii")
    details = {"m1": m1, "m2": m2, "m3": m3, "m4": m4, "case": case}
    return assemble(after), Prediction(BOTH, delta=Q4(4 * delta), signs=signs, details=details)


REWRITES: dict[str, Callable[[UnicyclicSpec, Rewrite], tuple[Graph, Prediction]]] = {
    "star_collapse": _star_collapse,
    "reroot_tndd": _reroot_tndd,
    "flatten_caterpillar": _flatten_caterpillar,
    "shift_pendants": _shift_pendants,
    "merge_stars": _merge_stars,
    "contract_cycle": _contract_cycle,
    "endblock_shift": _endblock_shift,
    "rotate_path": _rotate_path,
    "c4_consolidate": _c4_consolidate,
}


def apply(subject: Graph | UnicyclicSpec, rw: Rewrite) -> tuple[Graph, Prediction]:
    """Rewrite ``subject``; returns the new graph and the prediction for
    ``index(before) - index(after)``."""
    try:
        fn = REWRITES[rw.name]
    except KeyError:
        raise PreconditionViolated(f"unknown rewrite {rw.name!r}; expected one of {sorted(REWRITES)}") from None
    spec = as_spec(subject)
    try:
        return fn(spec, rw)
    except BadParamsError as exc:
        raise PreconditionViolated(str(exc)) from exc


def _report(name: str, before: Graph, after: Graph, pred: Prediction, kind: str) -> TransformReport:
    if kind not in INDEX_KINDS:
        raise ValueError(f"unknown index kind {kind!r}")
    if kind not in pred.kinds:
        raise PreconditionViolated(f"{name} makes no claim about {kind}; covered: {sorted(pred.kinds)}")
    vb, va = index_value(before, kind), index_value(after, kind)
    delta = vb - va
    return TransformReport(name, before, after, kind, vb, va, delta, pred, pred.agrees(delta))


def check(subject: Graph | UnicyclicSpec, rw: Rewrite, kind: str = REVISED) -> TransformReport:
    after, pred = apply(subject, rw)
    before = assemble(subject) if isinstance(subject, UnicyclicSpec) else subject
    if after.n != before.n or after.m != before.m:
        raise AssertionError(f"{rw.name} changed the order or size")
    return _report(rw.name, before, after, pred, kind)


# ---------------------------------------------------------- pair checks


def _ceil_half(x: int) -> int:
    return -(-x // 2)


@dataclass(frozen=True)
class PairCheck:
    """Two family graphs built from shared parameters and the claimed
    ``Sz*_e(first) - Sz*_e(second)``."""

    name: str
    build: Callable[..., tuple[Graph, Graph]]
    predict: Callable[..., tuple[Fraction | None, frozenset[int]]]
    sample: Callable[[random.Random], dict]
    valid: Callable[..., bool]
    summary: str


def _g3_arm_transfer(l1, l2, a):
    return (
        assemble(cyc(path(l1 + 1), broom(l2, 0, a), SINGLE)),
        assemble(cyc(path(l1 + 2), broom(l2 - 1, 0, a), SINGLE)),
    )


def _g3_arm_transfer_long(l1, l2, a):
    return (
        assemble(cyc(path(l2 + 1), broom(l1, 0, a), SINGLE)),
        assemble(cyc(path(l2), broom(l1 + 1, 0, a), SINGLE)),
    )


def _d_pair(d: int) -> tuple[int, int]:
    return (d - 1) // 2, _ceil_half(d - 1)


def _sample_range(rng: random.Random, lo: int, hi: int) -> int:
    return rng.randint(lo, hi)


def _s_n(lo=16, hi=34):
    return lambda rng: {"n": rng.randint(lo, hi)}


def _s_n_d(lo_n=16, hi_n=30, lo_d=4, gap=4):
    def sample(rng):
        n = rng.randint(lo_n, hi_n)
        return {"n": n, "d": rng.randint(lo_d, n - gap)}

    return sample


def _s_c3_transfer(rng):
    l1 = rng.randint(0, 6)
    return {"l1": l1, "l2": rng.randint(l1 + 3, l1 + 10), "a": rng.randint(0, 8)}


def _s_g3(rng):
    return {"l1": rng.randint(0, 8), "l2": rng.randint(0, 8), "a": rng.randint(1, 8)}


def _s_g4_inner(lo_l1: int):
    def sample(rng):
        l1 = rng.randint(lo_l1, 6)
        l2 = rng.randint(max(l1, 2), l1 + 8)
        return {"l1": l1, "l2": l2, "a": rng.randint(0, 6), "b": rng.randint(0, 6), "i": rng.randint(1, l2 - 1)}

    return sample


def _s_g4_big(lo_l1: int, a_min: int, b_min: int, root_pendants: bool = False):
    def sample(rng):
        while True:
            l1 = rng.randint(lo_l1, 6)
            l2 = rng.randint(max(l1, 1), l1 + 8)
            a = 0 if root_pendants else rng.randint(a_min, 7)
            b = rng.randint(b_min, 7)
            if a + b + l1 + l2 + 4 >= 14:
                p = {"l1": l1, "l2": l2, "a": a, "b": b, "i": rng.randint(1, l2)}
                if root_pendants:
                    del p["a"], p["i"]
                return p

    return sample


def _q4_or_none(x):
    return None if x is None else Q4.of(x)


PAIR_CHECKS: dict[str, PairCheck] = {}


def _register(pc: PairCheck) -> None:
    PAIR_CHECKS[pc.name] = pc


_register(
    PairCheck(
        "c3_arm_transfer",
        _g3_arm_transfer,
        lambda l1, l2, a: (a * (l2 - l1 - Fraction(5, 2)) + Fraction(3, 2) * (l2 - l1 - 1), frozenset({1})),
        _s_c3_transfer,
        lambda l1, l2, a: min(l1, a) >= 0 and l2 >= l1 + 3,
        "C3(P_{l1+1}, P^a_{l2}, P_1) vs C3(P_{l1+2}, P^a_{l2-1}, P_1), l2 >= l1+3",
    )
)
_register(
    PairCheck(
        "c3_arm_transfer_long",
        _g3_arm_transfer_long,
        lambda l1, l2, a: (None, frozenset({1})),
        _s_c3_transfer,
        lambda l1, l2, a: min(l1, a) >= 0 and l2 >= l1 + 3,
        "C3(P_{l2+1}, P^a_{l1}, P_1) vs C3(P_{l2}, P^a_{l1+1}, P_1), l2 >= l1+3",
    )
)
_register(
    PairCheck(
        "g3_11_vs_12",
        lambda l1, l2, a: (g3_family("11", l1, l2, a), g3_family("12", l1, l2, a)),
        lambda l1, l2, a: (-Fraction(3, 2) * a * l1, frozenset({0}) if a * l1 == 0 else frozenset({-1})),
        _s_g3,
        lambda l1, l2, a: min(l1, l2) >= 0 and a >= 1,
        "G3_11 vs G3_12",
    )
)
_register(
    PairCheck(
        "g3_22_vs_21",
        lambda l1, l2, a: (g3_family("22", l1, l2, a), g3_family("21", l1, l2, a)),
        lambda l1, l2, a: (None, frozenset({0}) if a == 1 else frozenset({1})),
        _s_g3,
        lambda l1, l2, a: min(l1, l2) >= 0 and a >= 1,
        "G3_22 vs G3_21",
    )
)
_register(
    PairCheck(
        "g3_11_vs_21",
        lambda l1, l2, a: (g3_family("11", l1, l2, a), g3_family("21", l1, l2, a)),
        lambda l1, l2, a: (Fraction(l2 * (a + l1 - 4), 2), frozenset()),
        _s_g3,
        lambda l1, l2, a: min(l1, l2) >= 0 and a >= 1,
        "G3_11 vs G3_21",
    )
)
_register(
    PairCheck(
        "g4_21_arm_balance",
        lambda l1, l2, a, b, i: (g4_family("21", l1, l2, a, b, i), g4_family("21", l1 + 1, l2 - 1, a, b, i)),
        lambda l1, l2, a, b, i: (Fraction(a * (b + l2 + 1 - l1) + 2 * b + 2 * (l2 - l1 - 1)), frozenset()),
        _s_g4_inner(0),
        lambda l1, l2, a, b, i: l2 >= l1 >= 0 and min(a, b) >= 0 and 0 < i < l2,
        "G4_21(l1, l2, a, b, i) vs G4_21(l1+1, l2-1, a, b, i), 0 < i < l2",
    )
)
_register(
    PairCheck(
        "g4_21_vs_11",
        lambda l1, l2, a, b, i: (g4_family("21", l1, l2, a, b, i), g4_family("11", l1 + 1, l2, a - 1, b, i)),
        lambda l1, l2, a, b, i: (Fraction(l1 * (a + b + l2 - 3) + 2 * a * b + a * (l2 - l1)), frozenset({1})),
        _s_g4_big(0, 1, 0),
        lambda l1, l2, a, b, i: l2 >= l1 >= 0 and a >= 1 and b >= 0 and 1 <= i <= l2 and a + b + l1 + l2 + 4 >= 14,
        "G4_21(l1, l2, a, b, i) vs G4_11(l1+1, l2, a-1, b, i); the second arm at v_1 carries the b pendants",
    )
)
_register(
    PairCheck(
        "g4_21_root_pendants_vs_11",
        lambda l1, l2, b: (g4_family("21", l1, l2, 0, b, l2), g4_family("11", l1 + 1, l2, b - 1)),
        lambda l1, l2, b: (Fraction(l1 * (b + l2 - 3)), frozenset({1})),
        _s_g4_big(1, 0, 1, root_pendants=True),
        lambda l1, l2, b: l2 >= l1 >= 1 and b >= 1 and b + l1 + l2 + 4 >= 14,
        "G4_21(l1, l2, 0, b, l2) vs G4_11(l1+1, l2, b-1)",
    )
)
_register(
    PairCheck(
        "g4_32_arm_balance",
        lambda l1, l2, a, b, i: (g4_family("32", l1, l2, a, b, i), g4_family("32", l1 - 1, l2 + 1, a, b, i)),
        lambda l1, l2, a, b, i: (Fraction(a * (l1 - b - l2 - 1)), frozenset({0}) if a == 0 else frozenset({-1})),
        _s_g4_inner(1),
        lambda l1, l2, a, b, i: l2 >= l1 >= 1 and min(a, b) >= 0 and 0 < i < l2,
        "G4_32(l1, l2, a, b, i) vs G4_32(l1-1, l2+1, a, b, i), 0 < i < l2",
    )
)
_register(
    PairCheck(
        "g4_32_vs_21",
        lambda l1, l2, a, b, i: (g4_family("32", l1, l2, a, b, i), g4_family("21", l1 + 1, l2, a - 1, b, i)),
        lambda l1, l2, a, b, i: (Fraction(l1 * (l2 + a + b - 3)), frozenset({1})),
        _s_g4_big(1, 1, 0),
        lambda l1, l2, a, b, i: l2 >= l1 >= 1 and a >= 1 and b >= 0 and 1 <= i <= l2 and a + b + l1 + l2 + 4 >= 14,
        "G4_32(l1, l2, a, b, i) vs G4_21(l1+1, l2, a-1, b, i)",
    )
)


def _diameter_minus_three_pendant(n):
    d = n - 3
    return g4_family("32", 0, d - 2, 0, 1, _ceil_half(d + 1)), g4_family("21", *_d_pair(d), 0)


def _k_split(d: int, even, odd) -> Fraction:
    k = d // 2
    return Fraction(even(k)) if d % 2 == 0 else Fraction(odd(k))


_register(
    PairCheck(
        "g4_32_pendant_vs_21",
        _diameter_minus_three_pendant,
        lambda n: (_k_split(n - 3, lambda k: k * k - 4 * k - 1, lambda k: k * k - 3 * k - 2), frozenset({1})),
        _s_n(14, 40),
        lambda n: n >= 14,
        "d = n-3: G4_32(0, d-2, 0, 1, ceil((d+1)/2)) vs G4_21(floor((d-1)/2), ceil((d-1)/2), 0)",
    )
)
_register(
    PairCheck(
        "g4_32_balanced_vs_21",
        lambda n: (g4_family("32", (n - 5) // 2, _ceil_half(n - 5), 1), g4_family("21", *_d_pair(n - 3), 0)),
        lambda n: (_k_split(n - 3, lambda k: (k - 1) * (k - 3), lambda k: (k - 1) * (k - 2)), frozenset({1})),
        _s_n(15, 40),
        lambda n: n > 14,
        "d = n-3: G4_32(floor((d-2)/2), ceil((d-2)/2), 1) vs G4_21(floor((d-1)/2), ceil((d-1)/2), 0)",
    )
)
_register(
    PairCheck(
        "c3_two_paths_vs_g4_32",
        lambda n: (
            assemble(cyc(path(_ceil_half(n - 3) + 1), path((n - 3) // 2 + 1), SINGLE)),
            g4_family("32", 0, n - 4, 0),
        ),
        lambda n: (
            _k_split(n - 2, lambda k: Fraction(2 * k - 2 * k * k - 11, 4), lambda k: Fraction(-k * k - 6, 2)),
            frozenset({-1}),
        ),
        _s_n(16, 40),
        lambda n: n > 15,
        "d = n-2: C3(P_{ceil((d-1)/2)+1}, P_{floor((d-1)/2)+1}, S_1) vs G4_32(0, n-4, 0)",
    )
)
_register(
    PairCheck(
        "g4_21_vs_c3_broom",
        lambda n: (
            g4_family("21", *_d_pair(n - 3), 0),
            assemble(cyc(broom((n - 3) // 2, _ceil_half(n - 3), 0), SINGLE, SINGLE)),
        ),
        lambda n: (_k_split(n - 3, lambda k: Fraction(8 * k + 13, 4), lambda k: Fraction(8 * k + 11, 4)), frozenset({1})),
        _s_n(15, 40),
        lambda n: n > 14,
        "d = n-3: G4_21(floor((d-1)/2), ceil((d-1)/2), 0) vs C3(P^0_{floor(d/2), ceil(d/2)}, S_1, S_1)",
    )
)
_register(
    PairCheck(
        "c3_broom_vs_g4_11",
        lambda n, d: (
            assemble(cyc(broom(d // 2, d - d // 2, n - d - 3), SINGLE, SINGLE)),
            g4_family("11", d // 2, d - d // 2, n - d - 4),
        ),
        lambda n, d: (Fraction(n * n - 18 * n + 45, 4), frozenset({1})),
        _s_n_d(),
        lambda n, d: n > 15 and 4 <= d <= n - 4,
        "C3(P^{n-d-3}_{h, d-h}, S_1, S_1) vs G4_11(h, d-h, n-d-4), h = floor(d/2)",
    )
)


def _g4_32_vs_11_sign(n, d):
    h = d // 2
    return frozenset({-1}) if h == 2 else frozenset({1})


_register(
    PairCheck(
        "g4_32_vs_g4_11",
        lambda n, d: (
            g4_family("32", 0, d - 2, 0, n - d - 2, _ceil_half(d)),
            g4_family("11", d // 2, d - d // 2, n - d - 4),
        ),
        lambda n, d: (Fraction((2 * (d // 2) - 5) * n - 2 * (d // 2) ** 2 - 4 * (d // 2) + 18), _g4_32_vs_11_sign(n, d)),
        _s_n_d(),
        lambda n, d: n > 15 and 4 <= d <= n - 4,
        "G4_32(0, d-2, 0, n-d-2, ceil(d/2)) vs G4_11(h, d-h, n-d-4), h = floor(d/2)",
    )
)
_register(
    PairCheck(
        "g4_32_short_pendant_position",
        lambda n: (g4_family("32", 0, 2, 0, n - 6, 2), g4_family("32", 0, 2, 0, n - 6, 1)),
        lambda n: (None, frozenset({-1})),
        _s_n(16, 40),
        lambda n: n > 15,
        "G4_32(0, 2, 0, n-6, 2) vs G4_32(0, 2, 0, n-6, 1)",
    )
)
_register(
    PairCheck(
        "g4_32_pendant_position_min",
        lambda n, i: (g4_family("32", 0, 3, 0, n - 7, i), g4_family("32", 0, 3, 0, n - 7, 3)),
        lambda n, i: (None, frozenset({0, 1})),
        lambda rng: {"n": rng.randint(16, 40), "i": rng.randint(1, 3)},
        lambda n, i: n > 15 and 1 <= i <= 3,
        "G4_32(0, 3, 0, n-7, i) vs G4_32(0, 3, 0, n-7, 3)",
    )
)
_register(
    PairCheck(
        "c3_broom_vs_c4_star",
        lambda n: (assemble(cyc(broom(1, 2, n - 6), SINGLE, SINGLE)), assemble(cyc(star(n - 3), SINGLE, SINGLE, SINGLE))),
        lambda n: (None, frozenset({1})),
        _s_n(16, 40),
        lambda n: n > 15,
        "C3(P^{n-6}_{1,2}, S_1, S_1) vs C4(S_{n-3}, S_1, S_1, S_1)",
    )
)


def check_pair(name: str, params: Mapping[str, int], kind: str = REVISED) -> TransformReport:
    """Build both graphs of a named comparison and test its claim."""
    try:
        pc = PAIR_CHECKS[name]
    except KeyError:
        raise PreconditionViolated(f"unknown pair check {name!r}; expected one of {sorted(PAIR_CHECKS)}") from None
    try:
        ok = pc.valid(**params)
    except TypeError as exc:
        raise PreconditionViolated(f"bad parameters for {name}: {exc}") from None
    if not ok:
        raise PreconditionViolated(f"parameters {dict(params)} outside the range of {name}")
    first, second = pc.build(**params)
    delta, signs = pc.predict(**params)
    pred = Prediction(frozenset({REVISED}), delta=_q4_or_none(delta), signs=signs, details=dict(params))
    return _report(name, first, second, pred, kind)


def sample_pair_params(name: str, rng: random.Random) -> dict:
    return PAIR_CHECKS[name].sample(rng)
