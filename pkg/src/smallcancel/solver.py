"""Constructing and counting valid labellings.

:func:`label_sequence` is a randomized erase-and-retry search: edges are
labelled one at a time with uniform labels and every new label is checked
for violations that involve it. A repeated word erases the whole offending
path, a reducedness clash erases only the new edge. Nothing guarantees
termination, so step and restart budgets turn failure into an explicit,
measurable outcome.

:func:`count_valid` and :func:`backtracking_label` enumerate labellings of a
small edge set exhaustively and serve as exact oracles.
"""
from __future__ import annotations

import heapq
import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Optional

import numpy as np

from .bounds import BoundResult, alpha_bound
from .cancellation import (
    KINDS,
    NOT_REDUCED,
    Thresholds,
    ViolationScanner,
    require_admissible,
    verify_sequence,
)
from .errors import BudgetExhaustedError, UndefinedRatioError
from .graphs import Graph, SequenceSpec
from .words import Labelling, out_labels

ERASE_PATH = "erase-path"
ERASE_EDGE = "erase-edge"


@dataclass(frozen=True)
class SolverConfig:
    L: int
    seed: int = 0
    max_steps: int = 100_000
    max_restarts: int = 10
    erase_policy: str = ERASE_PATH

    def __post_init__(self):
        if self.L < 2 or self.L % 2:
            raise ValueError(f"L must be even and >= 2, got {self.L}")
        if self.max_steps < 1 or self.max_restarts < 0:
            raise ValueError("budgets must be positive")
        if self.erase_policy not in (ERASE_PATH, ERASE_EDGE):
            raise ValueError(f"unknown erase policy {self.erase_policy!r}")


@dataclass
class SolverStats:
    steps: int = 0
    restarts: int = 0
    erasures: dict = field(default_factory=lambda: {k: 0 for k in KINDS})
    erased_edges: int = 0
    graph_steps: list = field(default_factory=list)
    graph_restarts: list = field(default_factory=list)
    wall_time_s: float = 0.0

    def lines(self) -> list[str]:
        out = [f"steps={self.steps}", f"restarts={self.restarts}"]
        out.extend(f"erasures.{k}={v}" for k, v in self.erasures.items())
        out.append(f"erased_edges={self.erased_edges}")
        out.extend(f"graph.{i}.steps={s}" for i, s in enumerate(self.graph_steps))
        out.extend(f"graph.{i}.restarts={r}" for i, r in enumerate(self.graph_restarts))
        out.append(f"wall_time_s={self.wall_time_s:.3f}")
        return out

    def format(self, deterministic_only: bool = False) -> str:
        lines = self.lines()
        if deterministic_only:
            lines = [ln for ln in lines if not ln.startswith("wall_time_s=")]
        return "\n".join(lines) + "\n"


@dataclass
class SolverResult:
    labellings: list[Labelling]
    stats: SolverStats


def bfs_edge_order(g: Graph) -> list[int]:
    """Edges in the order a BFS from vertex 0 first meets them (then from the
    smallest unvisited vertex of each further component)."""
    seen_v = [False] * g.vertex_count
    seen_e = [False] * g.edge_count
    order = []
    for root in range(g.vertex_count):
        if seen_v[root]:
            continue
        seen_v[root] = True
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w, e in g.incident(u):
                if not seen_e[e]:
                    seen_e[e] = True
                    order.append(e)
                if not seen_v[w]:
                    seen_v[w] = True
                    queue.append(w)
    return order


def _rng(seed: int, graph_id: int, restart: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, graph_id, restart]))


def _label_one_graph(scanner: ViolationScanner, cfg: SolverConfig, stats: SolverStats) -> Optional[Labelling]:
    g = scanner.graph
    n = scanner.graph_id
    order = bfs_edge_order(g)
    rank = {e: i for i, e in enumerate(order)}
    steps = 0
    for restart in range(cfg.max_restarts + 1):
        if restart:
            stats.restarts += 1
        rng = _rng(cfg.seed, n, restart)
        labels: list[Optional[int]] = [None] * g.edge_count
        pending = list(range(len(order)))  # heap of ranks of unlabelled edges
        heapq.heapify(pending)
        queued = set(pending)
        for _ in range(cfg.max_steps):
            if not pending:
                stats.graph_steps.append(steps)
                stats.graph_restarts.append(restart)
                return Labelling(g, cfg.L, tuple(labels), n)
            e = order[heapq.heappop(pending)]
            queued.discard(rank[e])
            labels[e] = int(rng.integers(cfg.L))
            steps += 1
            stats.steps += 1
            current = Labelling(g, cfg.L, tuple(labels), n)
            reports = scanner.scan(current, focus=e)
            if not reports:
                continue
            clash = next((r for r in reports if r.kind == NOT_REDUCED), None)
            if clash is not None or cfg.erase_policy == ERASE_EDGE:
                kind = clash.kind if clash is not None else reports[0].kind
                erase = [e]
            else:
                r = reports[0]
                kind = r.kind
                p = next(p for p in r.paths if p.graph_id == n and e in p.edge_ids(g))
                erase = p.edge_ids(g)
            stats.erasures[kind] += 1
            for f in erase:
                if labels[f] is not None:
                    labels[f] = None
                    stats.erased_edges += 1
                    if rank[f] not in queued:
                        queued.add(rank[f])
                        heapq.heappush(pending, rank[f])
        if not pending:
            stats.graph_steps.append(steps)
            stats.graph_restarts.append(restart)
            return Labelling(g, cfg.L, tuple(labels), n)
    stats.graph_steps.append(steps)
    stats.graph_restarts.append(cfg.max_restarts)
    return None


def label_sequence(
    spec: SequenceSpec, gammas: Optional[Thresholds], cfg: SolverConfig, verify: bool = True
) -> SolverResult:
    """Label every graph of ``spec`` in order.

    Raises :class:`BudgetExhaustedError` (carrying the statistics) when some
    graph cannot be completed within ``max_steps`` on any of the
    ``max_restarts + 1`` attempts. Successful output is re-verified.
    """
    admissible = require_admissible(spec)
    if gammas is None:
        gammas = admissible
    start = time.perf_counter()
    stats = SolverStats()
    done: list[Labelling] = []
    for n in range(len(spec.graphs)):
        scanner = ViolationScanner(spec.graphs, gammas, done)
        l = _label_one_graph(scanner, cfg, stats)
        if l is None:
            stats.wall_time_s = time.perf_counter() - start
            raise BudgetExhaustedError(
                f"graph {n}: no valid labelling with L={cfg.L} after {stats.steps} steps "
                f"and {stats.restarts} restarts",
                stats,
            )
        done.append(l)
    stats.wall_time_s = time.perf_counter() - start
    if verify and gammas == admissible:
        result = verify_sequence(spec, done)
        if not result.passed:
            raise AssertionError(f"solver produced an invalid labelling: {result.reports[0].format()}")
    return SolverResult(done, stats)


def random_reduced_labelling(g: Graph, L: int, rng, graph_id: int = 0, attempts: int = 1000) -> Labelling:
    """Uniform-ish random reduced total labelling by greedy sampling with restarts.

    ``rng`` is a ``random.Random`` or ``numpy.random.Generator``.
    """
    pick = rng.choice if hasattr(rng, "choice") else None
    for _ in range(attempts):
        l = Labelling.empty(g, L, graph_id)
        labels = [None] * g.edge_count
        order = list(range(g.edge_count))
        if hasattr(rng, "shuffle"):
            rng.shuffle(order)
        ok = True
        for e in order:
            u, v = g.edges[e]
            used_u = {a for a, _ in out_labels(l, u)}
            used_v = {a for a, _ in out_labels(l, v)}
            # label a reads a from u and a^1 from v
            allowed = [a for a in range(L) if a not in used_u and (a ^ 1) not in used_v]
            if not allowed:
                ok = False
                break
            labels[e] = int(pick(allowed))
            l = Labelling(g, L, tuple(labels), graph_id)
        if ok:
            return l
    raise BudgetExhaustedError(f"no reduced labelling sampled in {attempts} attempts")


# -- exhaustive counting -----------------------------------------------------


@dataclass(frozen=True)
class CountContext:
    """Environment of a count: graphs, thresholds, and the total labellings
    of all graphs before the target graph ``len(earlier)``."""

    spec: SequenceSpec
    gammas: Thresholds
    earlier: tuple[Labelling, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "earlier", tuple(self.earlier))
        self.gammas.require_gt1()
        if len(self.gammas) < len(self.spec.graphs):
            raise ValueError("one threshold per graph is required")

    @property
    def target(self) -> int:
        return len(self.earlier)

    @property
    def graph(self) -> Graph:
        return self.spec.graphs[self.target]

    @cached_property
    def scanner(self) -> ViolationScanner:
        return ViolationScanner(self.spec.graphs, self.gammas, self.earlier)


def _valid_labellings(ctx: CountContext, F: Iterable[int], L: int) -> Iterator[Labelling]:
    # depth-first in edge-id order, labels ascending; a violation in a prefix
    # persists in every extension, so pruning is exact
    g = ctx.graph
    edges = sorted(set(F))
    for e in edges:
        if not 0 <= e < g.edge_count:
            raise ValueError(f"edge {e} is not an edge of graph {ctx.target}")
    scanner = ctx.scanner
    labels: list[Optional[int]] = [None] * g.edge_count

    def rec(i):
        if i == len(edges):
            yield Labelling(g, L, tuple(labels), ctx.target)
            return
        e = edges[i]
        for a in range(L):
            labels[e] = a
            if not scanner.scan(Labelling(g, L, tuple(labels), ctx.target), focus=e):
                yield from rec(i + 1)
        labels[e] = None

    yield from rec(0)


def backtracking_label(ctx: CountContext, F: Iterable[int], L: int) -> Optional[Labelling]:
    """Lexicographically first valid labelling of ``F`` (edge-id order), or
    ``None`` when exhaustive search finds none."""
    return next(_valid_labellings(ctx, F, L), None)


def count_valid(ctx: CountContext, F: Iterable[int], L: int, budget: int = 10**7) -> int:
    """Number of valid labellings of the subgraph spanned by ``F``; 1 for the empty set."""
    F = set(F)
    if L ** len(F) > budget:
        raise BudgetExhaustedError(f"L^|F| = {L}^{len(F)} exceeds the budget {budget}")
    return sum(1 for _ in _valid_labellings(ctx, F, L))


@dataclass
class ClaimRatio:
    ratio: Fraction
    count_with: int
    count_without: int
    alpha: BoundResult

    def format(self) -> str:
        return (
            f"c(F)={self.count_with}\nc(F-e)={self.count_without}\nratio={self.ratio}\n"
            f"ratio_float={float(self.ratio):.6g}\nalpha={self.alpha.value_str()}\n"
        )


def claim_ratio(ctx: CountContext, F: Iterable[int], e: int, L: int, budget: int = 10**7) -> ClaimRatio:
    """Exact ``c(F) / c(F - {e})`` next to ``alpha = 2(Delta-1)^(2A/lambda+2)``."""
    F = set(F)
    if e not in F:
        raise ValueError(f"edge {e} is not in F")
    with_e = count_valid(ctx, F, L, budget)
    without = count_valid(ctx, F - {e}, L, budget)
    if without == 0:
        raise UndefinedRatioError(f"c(F - {{{e}}}) = 0; ratio undefined")
    spec = ctx.spec
    return ClaimRatio(Fraction(with_e, without), with_e, without, alpha_bound(spec.Delta, spec.A, spec.lam))

