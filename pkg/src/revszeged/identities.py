"""Exhaustive checks of the closed-form identities over small graphs.

Each suite walks every tree and/or unicyclic graph up to a given order,
evaluates one identity both ways and records the graphs where the two sides
differ. The suites are the library half of ``revszeged verify --identities``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator

from .enumerator import GenerationTask, rooted_trees, unicyclic_graphs
from .families import UnicyclicSpec
from .graph_core import Graph, canonical_code, cycle_distance_deltas, distances, to_graph6
from .index_engine import decompose_unicyclic, index_suite, sz_e_star_closed_form


@dataclass(frozen=True)
class Mismatch:
    graph6: str
    detail: str

    def to_dict(self) -> dict:
        return {"graph6": self.graph6, "detail": self.detail}

    @classmethod
    def from_dict(cls, d: dict) -> "Mismatch":
        return cls(d["graph6"], d["detail"])


@dataclass
class SuiteResult:
    name: str
    max_order: int
    checked: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.checked > 0 and not self.mismatches

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "max_order": self.max_order,
            "checked": self.checked,
            "mismatches": [m.to_dict() for m in self.mismatches],
            "pass": self.passed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SuiteResult":
        return cls(d["suite"], d["max_order"], d["checked"], [Mismatch.from_dict(m) for m in d["mismatches"]])


def trees(max_order: int, min_order: int = 1) -> Iterator[Graph]:
    """Every free tree with ``min_order..max_order`` vertices, once each."""
    for n in range(min_order, max_order + 1):
        seen: set[bytes] = set()
        for t in rooted_trees(n):
            code = canonical_code(t.tree)
            if code not in seen:
                seen.add(code)
                yield t.tree


def unicyclic(max_order: int, min_order: int = 3) -> Iterator[tuple[UnicyclicSpec, Graph]]:
    for n in range(max(3, min_order), max_order + 1):
        yield from unicyclic_graphs(GenerationTask(n))


def closed_form_suite(max_order: int = 10) -> SuiteResult:
    """``Sz*_e`` from the definition against ``m^3/4 - sum (m_u - m_v)^2 / 4``
    on every tree and unicyclic graph."""
    res = SuiteResult("closed_form", max_order)
    graphs = list(trees(max_order)) + [g for _, g in unicyclic(max_order)]
    for g in graphs:
        dm = distances(g)
        direct = index_suite(g, dm).Sz_e_star
        closed = sz_e_star_closed_form(g, dm)
        res.checked += 1
        if direct != closed:
            res.mismatches.append(Mismatch(to_graph6(g), f"direct={direct.encode()} closed={closed.encode()}"))
    return res


def decomposition_suite(max_order: int = 12) -> SuiteResult:
    """Every route of :func:`decompose_unicyclic` agrees on each unicyclic graph."""
    res = SuiteResult("decomposition", max_order)
    for spec, g in unicyclic(max_order):
        rep = decompose_unicyclic(spec)
        res.checked += 1
        if not rep.consistent():
            res.mismatches.append(Mismatch(to_graph6(g), repr(rep)))
    return res


def tree_edge_wiener_suite(max_order: int = 10) -> SuiteResult:
    """On trees the line-graph edge Wiener index is ``W - n(n-1)/2`` and the
    edge Szeged index equals the min-convention edge Wiener index; on
    unicyclic graphs the edge Szeged index is strictly larger."""
    res = SuiteResult("tree_edge_wiener", max_order)
    for g in trees(max_order, min_order=2):
        s = index_suite(g)
        res.checked += 1
        problems = []
        if s.W_e_line != s.W - g.n * (g.n - 1) // 2:
            problems.append(f"W_e_line={s.W_e_line} W={s.W}")
        if s.Sz_e != s.W_e_min:
            problems.append(f"Sz_e={s.Sz_e} W_e_min={s.W_e_min}")
        if problems:
            res.mismatches.append(Mismatch(to_graph6(g), "; ".join(problems)))
    for _, g in unicyclic(max_order):
        s = index_suite(g)
        res.checked += 1
        if not s.Sz_e > s.W_e_min:
            res.mismatches.append(Mismatch(to_graph6(g), f"Sz_e={s.Sz_e} not above W_e_min={s.W_e_min}"))
    return res


def expected_cycle_deltas(g: int, j: int) -> tuple[int, int]:
    """Tabulated ``(d(v2,vj) - d(v1,vj) + 1, d(vg,vj) - d(v1,vj) + 1)``."""
    if g % 2 == 0:
        h = g // 2
        if j <= h:
            return (0, 2)
        if j == h + 1:
            return (0, 0)
        return (2, 0)
    h = (g - 1) // 2
    if j <= h:
        return (0, 2)
    if j == h + 1:
        return (0, 1)
    if j == h + 2:
        return (1, 0)
    return (2, 0)


def cycle_distance_suite(max_order: int = 12) -> SuiteResult:
    res = SuiteResult("cycle_distances", max_order)
    for g in range(3, max_order + 1):
        for j in range(2, g):
            got, want = cycle_distance_deltas(g, j), expected_cycle_deltas(g, j)
            res.checked += 1
            if got != want:
                res.mismatches.append(Mismatch(f"C{g}", f"j={j} got={got} table={want}"))
    return res


def bipartite_suite(max_order: int = 10) -> SuiteResult:
    """``Sz* = Sz`` on trees and even-girth unicyclic graphs."""
    res = SuiteResult("bipartite_szeged", max_order)
    graphs = list(trees(max_order, min_order=2)) + [g for spec, g in unicyclic(max_order) if spec.g % 2 == 0]
    for g in graphs:
        s = index_suite(g)
        res.checked += 1
        if s.Sz_star != s.Sz:
            res.mismatches.append(Mismatch(to_graph6(g), f"Sz*={s.Sz_star.encode()} Sz={s.Sz.encode()}"))
    return res


SUITES: dict[str, Callable[[int], SuiteResult]] = {
    "closed_form": closed_form_suite,
    "decomposition": decomposition_suite,
    "tree_edge_wiener": tree_edge_wiener_suite,
    "cycle_distances": cycle_distance_suite,
    "bipartite_szeged": bipartite_suite,
}

DEFAULT_ORDERS = {
    "closed_form": 10,
    "decomposition": 12,
    "tree_edge_wiener": 10,
    "cycle_distances": 30,
    "bipartite_szeged": 10,
}


def run_suites(names: list[str] | None = None, max_order: int | None = None) -> list[SuiteResult]:
    out = []
    for name in names or list(SUITES):
        if name not in SUITES:
            raise ValueError(f"unknown identity suite {name!r}; expected one of {sorted(SUITES)}")
        out.append(SUITES[name](max_order if max_order is not None else DEFAULT_ORDERS[name]))
    return out
