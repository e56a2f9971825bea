"""Seeded random subjects for every rewrite, drawn inside its preconditions."""

from __future__ import annotations

import random
from typing import Callable

from revszeged.enumerator import catalog
from revszeged.families import (
    SINGLE,
    RootedTree,
    UnicyclicSpec,
    broom,
    caterpillar,
    cyc,
    from_level_sequence,
    pendant_path,
    star,
)
from revszeged.transformations import EDGE, REVISED, PreconditionViolated, Rewrite, TransformReport, check

CAT = catalog(8)


def random_tree(rng: random.Random, max_order: int) -> RootedTree:
    size = rng.randint(1, max_order)
    keys = CAT.by_size[size]
    return from_level_sequence(CAT.levels[rng.randrange(keys.start, keys.stop)])


def _generic(rng):
    g = rng.randint(3, 6)
    return UnicyclicSpec(g, tuple(random_tree(rng, 6) for _ in range(g))), g


def draw_star_collapse(rng):
    spec, g = _generic(rng)
    return spec, Rewrite.of("star_collapse", k=rng.randint(1, g))


def draw_reroot_tndd(rng):
    spec, g = _generic(rng)
    return spec, Rewrite.of("reroot_tndd", k=rng.randint(1, g))


def draw_flatten_caterpillar(rng):
    spec, g = _generic(rng)
    return spec, Rewrite.of("flatten_caterpillar", k=rng.randint(1, g))


def draw_shift_pendants(rng):
    g = rng.randint(3, 6)
    l = rng.randint(2, 6)
    a = [0] + [rng.randint(0, 3) for _ in range(l)]
    pos = rng.randint(1, g)
    trees = [random_tree(rng, 4) for _ in range(g)]
    trees[pos - 1] = caterpillar(a)
    rw = Rewrite.of("shift_pendants", position=pos, k=rng.randint(1, l - 1), direction=rng.choice(["forward", "backward"]))
    return UnicyclicSpec(g, tuple(trees)), rw


def draw_merge_stars(rng):
    g = rng.randint(3, 7)
    trees = [random_tree(rng, 4) for _ in range(g)]
    k, l = rng.sample(range(g), 2)
    trees[k] = broom(rng.randint(0, 3), rng.randint(0, 3), rng.randint(1, 4))
    trees[l] = broom(rng.randint(0, 3), rng.randint(0, 3), rng.randint(1, 4))
    return UnicyclicSpec(g, tuple(trees)), Rewrite.of("merge_stars", k=k + 1, l=l + 1)


def draw_contract_cycle(rng):
    g = rng.randint(5, 8)
    rest = tuple(random_tree(rng, 5) for _ in range(g - 3))
    case = rng.choice(["i", "ii", "iii"])
    if case == "i":
        trees = (broom(rng.randint(1, 3), rng.randint(0, 3), rng.randint(0, 3)), star(rng.randint(1, 4))) + rest + (SINGLE,)
    elif case == "ii":
        trees = (star(rng.randint(1, 4)), broom(rng.randint(1, 4), 0, rng.randint(0, 3))) + rest + (star(rng.randint(1, 4)),)
    else:
        trees = (broom(rng.randint(1, 3), 0, rng.randint(0, 3)), star(rng.randint(1, 4))) + rest + (star(rng.randint(1, 4)),)
    return UnicyclicSpec(g, trees), Rewrite.of("contract_cycle", case=case)


def draw_endblock_shift(rng):
    spec, _ = _generic(rng)
    return spec, Rewrite.of("endblock_shift")


def draw_rotate_path(rng):
    l1 = rng.randint(0, 4)
    l2 = rng.randint(l1 + 1, l1 + 5)
    c = rng.randint(0, 3) if l2 >= 2 else 0
    i = rng.randint(1, l2 - 1) if l2 >= 2 else 0
    spec = cyc(broom(l1, 0, rng.randint(0, 3)), star(rng.randint(1, 4)), pendant_path(l2, c, i))
    return spec, Rewrite.of("rotate_path", l1=l1)


def draw_c4_consolidate(rng):
    case = rng.choice(["i", "ii", "iii"])
    trees = [random_tree(rng, 6) for _ in range(4)]
    if case == "iii":
        trees[3] = SINGLE
    return UnicyclicSpec(4, tuple(trees)), Rewrite.of("c4_consolidate", case=case)


DRAWS: dict[str, Callable[[random.Random], tuple[UnicyclicSpec, Rewrite]]] = {
    "star_collapse": draw_star_collapse,
    "reroot_tndd": draw_reroot_tndd,
    "flatten_caterpillar": draw_flatten_caterpillar,
    "shift_pendants": draw_shift_pendants,
    "merge_stars": draw_merge_stars,
    "contract_cycle": draw_contract_cycle,
    "endblock_shift": draw_endblock_shift,
    "rotate_path": draw_rotate_path,
    "c4_consolidate": draw_c4_consolidate,
}

KINDS = {
    "star_collapse": (REVISED, EDGE),
    "reroot_tndd": (REVISED, EDGE),
    "flatten_caterpillar": (REVISED, EDGE),
    "shift_pendants": (REVISED, EDGE),
    "merge_stars": (REVISED,),
    "contract_cycle": (REVISED, EDGE),
    "endblock_shift": (EDGE,),
    "rotate_path": (REVISED,),
    "c4_consolidate": (REVISED, EDGE),
}


def valid_reports(name: str, count: int, seed: int) -> list[TransformReport]:
    """``count`` reports of rewrite ``name`` on random subjects that satisfy
    its preconditions; draws that violate them are skipped."""
    rng = random.Random(seed)
    out: list[TransformReport] = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count:
            raise RuntimeError(f"could not draw {count} valid subjects for {name}")
        spec, rw = DRAWS[name](rng)
        kind = rng.choice(KINDS[name])
        try:
            out.append(check(spec, rw, kind))
        except PreconditionViolated:
            continue
    return out
