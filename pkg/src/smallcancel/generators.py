"""Small named graphs and a seeded high-girth random regular graph sampler."""
from __future__ import annotations

import random
from typing import Sequence

from .errors import BudgetExhaustedError, ParityError
from .graphs import Graph, girth, shortest_cycle


def cycle_graph(n: int) -> Graph:
    """C_n with every edge oriented i -> i+1 (mod n)."""
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path_graph(edges: int) -> Graph:
    return Graph(edges + 1, tuple((i, i + 1) for i in range(edges)))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def lcf_graph(n: int, shifts: Sequence[int], repeats: int) -> Graph:
    """Cubic Hamiltonian graph from LCF notation ``[shifts]^repeats``."""
    edges = {tuple(sorted((i, (i + 1) % n))) for i in range(n)}
    jumps = list(shifts) * repeats
    if len(jumps) != n:
        raise ValueError("LCF code length must equal the number of vertices")
    for i, s in enumerate(jumps):
        edges.add(tuple(sorted((i, (i + s) % n))))
    return Graph(n, tuple(sorted(edges)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, tuple(outer + spokes + inner))


def heawood_graph() -> Graph:
    """The (3,6)-cage on 14 vertices."""
    return lcf_graph(14, [5, -5], 7)


def tutte_coxeter_graph() -> Graph:
    """The (3,8)-cage on 30 vertices."""
    return lcf_graph(30, [-13, -9, 7, -7, 9, 13], 5)


def tutte_12_cage() -> Graph:
    """The (3,12)-cage on 126 vertices (Benson graph)."""
    return lcf_graph(126, [17, 27, -13, -59, -35, 35, -11, 13, -53, 53, -27, 21, 57, 11, -21, -57, 59, -17], 7)


NAMED_GRAPHS = {
    "petersen": petersen_graph,
    "heawood": heawood_graph,
    "tutte-coxeter": tutte_coxeter_graph,
    "tutte12": tutte_12_cage,
}


def _pairing(n: int, degree: int, rng: random.Random):
    # configuration model: pair shuffled stubs, reject loops and multi-edges
    stubs = [v for v in range(n) for _ in range(degree)]
    rng.shuffle(stubs)
    edges = set()
    for a, b in zip(stubs[::2], stubs[1::2]):
        if a == b:
            return None
        key = (a, b) if a < b else (b, a)
        if key in edges:
            return None
        edges.add(key)
    return edges


def _repair(n: int, edges: set, g_min: int, rng: random.Random, swaps: int):
    # double-edge swaps that break a shortest cycle; degrees are preserved
    for _ in range(swaps):
        g = Graph(n, tuple(sorted(edges)))
        if girth(g) >= g_min:
            return g
        cyc = shortest_cycle(g)
        i = rng.randrange(len(cyc))
        a, b = cyc[i], cyc[(i + 1) % len(cyc)]
        others = [e for e in edges if a not in e and b not in e]
        if not others:
            return None
        c, d = rng.choice(others)
        if rng.random() < 0.5:
            c, d = d, c
        new1 = tuple(sorted((a, c)))
        new2 = tuple(sorted((b, d)))
        if new1 in edges or new2 in edges:
            continue
        edges.discard(tuple(sorted((a, b))))
        edges.discard((c, d) if c < d else (d, c))
        edges.add(new1)
        edges.add(new2)
    g = Graph(n, tuple(sorted(edges)))
    return g if girth(g) >= g_min else None


def random_regular_high_girth(
    Delta: int, n: int, g_min: int, seed: int, budget: int = 100, repair_swaps: int = 200
) -> Graph:
    """A ``Delta``-regular graph on ``n`` vertices with girth at least ``g_min``.

    Each of the ``budget`` attempts samples a pairing and then runs up to
    ``repair_swaps`` cycle-breaking edge swaps. Deterministic given ``seed``.
    Edges are written ``(min, max)``, which fixes the orientation.
    """
    if (n * Delta) % 2:
        raise ParityError(f"n*Delta = {n * Delta} is odd; no {Delta}-regular graph on {n} vertices")
    if Delta < 3:
        raise ValueError("Delta must be >= 3")
    if n <= Delta:
        raise BudgetExhaustedError(f"no simple {Delta}-regular graph on {n} vertices")
    rng = random.Random(seed)
    for _ in range(budget):
        edges = _pairing(n, Delta, rng)
        if edges is None:
            continue
        g = _repair(n, edges, g_min, rng, repair_swaps)
        if g is not None:
            return g
    raise BudgetExhaustedError(
        f"no {Delta}-regular graph on {n} vertices with girth >= {g_min} found in {budget} attempts"
    )
