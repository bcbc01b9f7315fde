"""Thresholds, word indexes and the C'(lambda) violation detector.

A labelling of graph ``n`` is *valid* against already-labelled graphs
``0..n-1`` when

* (a) it is reduced,
* (b) no window of length ``gamma_i`` in graph ``n`` reads a word that some
  path of graph ``i < n`` reads, and
* (c) no word of length ``gamma_n`` is read on two different paths of
  graph ``n``.

Only windows of length exactly ``gamma_i`` are compared: a repeated longer
word always has a repeated window of that length (a prefix for (b), the
first differing window for (c)). :func:`verify_sequence` with ``full=True``
checks every length up to a cap as a cross-check.
"""
from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import InadmissibleSpecError, ThresholdError, UnlabelledEdgeError
from .graphs import DirectedPath, Graph, SequenceSpec, check_sequence, gamma_of, girth, iter_path_vertices
from .words import Labelling, Word, out_labels, path_word

NOT_REDUCED = "not-reduced"
CROSS_GRAPH = "cross-graph-repeat"
SAME_GRAPH = "same-graph-repeat"
KINDS = (NOT_REDUCED, CROSS_GRAPH, SAME_GRAPH)
_KIND_ORDER = {k: i for i, k in enumerate(KINDS)}


@dataclass(frozen=True)
class Thresholds:
    gamma: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "gamma", tuple(int(x) for x in self.gamma))

    def __getitem__(self, i: int) -> int:
        return self.gamma[i]

    def __len__(self) -> int:
        return len(self.gamma)

    def require_gt1(self) -> None:
        for i, g in enumerate(self.gamma):
            if g <= 1:
                raise ThresholdError(f"gamma[{i}] = {g}; window length must exceed 1")


def thresholds(spec: SequenceSpec) -> Thresholds:
    """``gamma_i = floor(lambda * girth(G_i))`` for every graph of ``spec``."""
    gammas = []
    for i, g in enumerate(spec.graphs):
        gam = gamma_of(spec.lam, girth(g))
        if gam is None or gam <= 1:
            raise ThresholdError(f"graph {i}: gamma = {gam} must exceed 1")
        if gammas and gam <= gammas[-1]:
            raise InadmissibleSpecError(f"graph {i}: gamma {gam} does not exceed previous gamma {gammas[-1]}")
        gammas.append(gam)
    return Thresholds(tuple(gammas))


def require_admissible(spec: SequenceSpec) -> Thresholds:
    report = check_sequence(spec)
    if not report.passed:
        first = "; ".join(f"{name} (graph {i}): {detail}" for name, i, detail in report.failures()[:3])
        raise InadmissibleSpecError(f"inadmissible sequence: {first}")
    return thresholds(spec)


# -- word index --------------------------------------------------------------


class WordIndex:
    """Per window length, a multimap word -> occurrences (``DirectedPath``)."""

    def __init__(self):
        self._maps: dict[int, dict[Word, list[DirectedPath]]] = {}

    @property
    def lengths(self) -> list[int]:
        return sorted(self._maps)

    def table(self, length: int) -> dict[Word, list[DirectedPath]]:
        return self._maps.get(length, {})

    def occurrences(self, length: int, word: Word) -> list[DirectedPath]:
        return self._maps.get(length, {}).get(tuple(word), [])

    def entry_count(self, length: Optional[int] = None) -> int:
        if length is None:
            return sum(self.entry_count(m) for m in self._maps)
        return sum(len(v) for v in self.table(length).values())

    def add(self, length: int, word: Word, path: DirectedPath) -> None:
        self._maps.setdefault(length, {}).setdefault(word, []).append(path)

    def repeated(self, length: int):
        for word, occ in self.table(length).items():
            if len(occ) > 1:
                yield word, occ


def _labelled_ok(l: Labelling):
    labels = l.labels
    return lambda e: labels[e] is not None


def _add_windows(index: WordIndex, l: Labelling, length: int, partial: bool) -> None:
    edge_ok = _labelled_ok(l) if partial else None
    for vs in iter_path_vertices(l.graph, length, edge_ok=edge_ok):
        index.add(length, path_word(l, vs), DirectedPath(l.graph_id, vs))


def build_index(labelled: Sequence[Labelling], lengths: Iterable[int], partial: bool = False) -> WordIndex:
    """Index the words of all directed paths at each requested length.

    Labellings must be total unless ``partial`` is set, in which case only
    fully labelled paths are indexed.
    """
    index = WordIndex()
    lengths = sorted(set(lengths))
    for l in labelled:
        if not partial and not l.is_total:
            missing = next(e for e, a in enumerate(l.labels) if a is None)
            raise UnlabelledEdgeError(missing, l.graph_id)
        for m in lengths:
            index._maps.setdefault(m, {})
            _add_windows(index, l, m, partial)
    return index


# -- violation reports -------------------------------------------------------


@dataclass(frozen=True)
class ViolationReport:
    """One witnessed violation.

    ``not-reduced``: ``vertex = (v, u, w)`` with ``u < w`` and ``word = (a,)``
    the label read from ``v`` towards both. Repeats: ``paths = (P, Q)`` with
    ``P`` in ``graph_id``; for cross-graph repeats ``Q`` lies in an earlier
    graph, for same-graph repeats ``P < Q``.
    """

    kind: str
    graph_id: int
    word: Word
    vertex: Optional[tuple[int, int, int]] = None
    paths: tuple[DirectedPath, ...] = ()

    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.graph_id, self.vertex or (), self.paths, self.word)

    def touches(self, graphs: Sequence[Graph], graph_id: int, edge: int) -> bool:
        """Whether the witness uses ``edge`` of graph ``graph_id``."""
        if self.vertex is not None:
            if graph_id != self.graph_id:
                return False
            g = graphs[graph_id]
            v, u, w = self.vertex
            return edge in (g.edge_id(v, u), g.edge_id(v, w))
        return any(p.graph_id == graph_id and edge in p.edge_ids(graphs[graph_id]) for p in self.paths)

    def format(self) -> str:
        word = ".".join(map(str, self.word))
        if self.vertex is not None:
            v, u, w = self.vertex
            return f"violation kind={self.kind} graph={self.graph_id} vertex={v} neighbors={u},{w} label={word}"
        p, q = self.paths
        return (
            f"violation kind={self.kind} graph={self.graph_id} word={word} "
            f"path={_fmt_path(p)} other={_fmt_path(q)}"
        )


def _fmt_path(p: DirectedPath) -> str:
    return f"{p.graph_id}:" + "-".join(map(str, p.vertices))


def _sorted(reports: Iterable[ViolationReport]) -> list[ViolationReport]:
    return sorted(set(reports), key=ViolationReport.sort_key)


def _same_pair(graph_id: int, word: Word, p: DirectedPath, q: DirectedPath) -> ViolationReport:
    if q < p:
        p, q = q, p
    return ViolationReport(SAME_GRAPH, graph_id, word, paths=(p, q))


def _not_reduced_at(l: Labelling, v: int, only_edge: Optional[int] = None) -> list[ViolationReport]:
    groups = defaultdict(list)
    for a, w in out_labels(l, v):
        groups[a].append(w)
    out = []
    g = l.graph
    for a, ws in groups.items():
        for i in range(len(ws)):
            for j in range(i + 1, len(ws)):
                u, w = sorted((ws[i], ws[j]))
                if only_edge is not None and only_edge not in (g.edge_id(v, u), g.edge_id(v, w)):
                    continue
                out.append(ViolationReport(NOT_REDUCED, l.graph_id, (a,), vertex=(v, u, w)))
    return out


class ViolationScanner:
    """Violation detector for the graph following ``earlier`` in ``graphs``.

    Word indexes of the earlier (total) labellings are built once, so the
    solver and the counting code can rescan cheaply after each change.
    """

    def __init__(self, graphs: Sequence[Graph], gammas: Thresholds, earlier: Sequence[Labelling] = ()):
        self.graphs = tuple(graphs)
        self.gammas = gammas
        self.earlier = tuple(earlier)
        self.graph_id = len(self.earlier)
        if self.graph_id >= len(self.graphs):
            raise ValueError("no graph left to scan after the given labellings")
        self.graph = self.graphs[self.graph_id]
        for i, l in enumerate(self.earlier):
            if l.graph != self.graphs[i] or l.graph_id != i:
                raise ValueError(f"labelling {i} does not belong to graph {i}")
        self.earlier_index = [build_index([l], [gammas[i]]) for i, l in enumerate(self.earlier)]

    def _check(self, l: Labelling) -> None:
        if l.graph != self.graph or l.graph_id != self.graph_id:
            raise ValueError(f"labelling does not belong to graph {self.graph_id}")

    def scan(self, l: Labelling, focus: Optional[int] = None) -> list[ViolationReport]:
        """All violations of ``l``; with ``focus`` only those whose witness
        uses that edge of the scanned graph."""
        self._check(l)
        if focus is None:
            return self._scan_all(l)
        return self._scan_edge(l, focus)

    def _scan_all(self, l: Labelling) -> list[ViolationReport]:
        n = self.graph_id
        reports = []
        for v in range(self.graph.vertex_count):
            reports.extend(_not_reduced_at(l, v))
        windows = WordIndex()
        lengths = {self.gammas[i] for i in range(n + 1)}
        for m in lengths:
            _add_windows(windows, l, m, partial=True)
        for i in range(n):
            m = self.gammas[i]
            for word, occ in windows.table(m).items():
                for q in self.earlier_index[i].occurrences(m, word):
                    for p in occ:
                        reports.append(ViolationReport(CROSS_GRAPH, n, word, paths=(p, q)))
        for word, occ in windows.repeated(self.gammas[n]):
            for a in range(len(occ)):
                for b in range(a + 1, len(occ)):
                    reports.append(_same_pair(n, word, occ[a], occ[b]))
        return _sorted(reports)

    def _scan_edge(self, l: Labelling, e: int) -> list[ViolationReport]:
        n = self.graph_id
        if l.labels[e] is None:
            return []
        reports = []
        x, y = self.graph.edges[e]
        reports.extend(_not_reduced_at(l, x, only_edge=e))
        reports.extend(_not_reduced_at(l, y, only_edge=e))
        edge_ok = _labelled_ok(l)
        for i in range(n):
            m = self.gammas[i]
            for vs in iter_path_vertices(self.graph, m, through=e, edge_ok=edge_ok):
                word = path_word(l, vs)
                for q in self.earlier_index[i].occurrences(m, word):
                    reports.append(ViolationReport(CROSS_GRAPH, n, word, paths=(DirectedPath(n, vs), q)))
        m = self.gammas[n]
        follow = None
        for vs in iter_path_vertices(self.graph, m, through=e, edge_ok=edge_ok):
            if follow is None:
                follow = _follow_table(l)
            word = path_word(l, vs)
            for other in _paths_reading(follow, self.graph.vertex_count, word):
                if other != vs:
                    reports.append(_same_pair(n, word, DirectedPath(n, vs), DirectedPath(n, other)))
        return _sorted(reports)


def _follow_table(l: Labelling) -> list[dict[int, list[int]]]:
    table = []
    for v in range(l.graph.vertex_count):
        d = defaultdict(list)
        for a, w in out_labels(l, v):
            d[a].append(w)
        table.append(d)
    return table


def _paths_reading(follow, vertex_count: int, word: Word):
    # label-guided DFS: every simple path whose word is `word`
    def walk(path, i):
        if i == len(word):
            yield tuple(path)
            return
        for w in follow[path[-1]].get(word[i], ()):
            if w not in path:
                path.append(w)
                yield from walk(path, i + 1)
                path.pop()

    for v in range(vertex_count):
        if word and word[0] in follow[v]:
            yield from walk([v], 0)


def find_violations(
    spec: SequenceSpec,
    gammas: Thresholds,
    labellings: Sequence[Labelling],
    focus: Optional[tuple[int, int]] = None,
) -> list[ViolationReport]:
    """Violations of conditions (a), (b), (c) for the last labelling.

    ``labellings[:-1]`` are the total labellings of the earlier graphs, the
    last one may be partial. ``focus = (graph_id, edge)`` keeps only reports
    whose witness uses that edge.
    """
    if not labellings:
        return []
    scanner = ViolationScanner(spec.graphs, gammas, labellings[:-1])
    if focus is not None and focus[0] == scanner.graph_id:
        return scanner.scan(labellings[-1], focus=focus[1])
    reports = scanner.scan(labellings[-1])
    if focus is None:
        return reports
    gid, e = focus
    return [r for r in reports if r.touches(spec.graphs, gid, e)]


# -- whole-sequence verification ---------------------------------------------


@dataclass
class VerificationResult:
    passed: bool
    reports: list[ViolationReport]
    mode: str = "exact"
    graphs: int = 0
    cap: Optional[int] = None
    counts: dict = field(default_factory=dict)

    def format(self) -> str:
        lines = [
            f"status={'pass' if self.passed else 'fail'}",
            f"mode={self.mode}",
            f"graphs={self.graphs}",
        ]
        if self.cap is not None:
            lines.append(f"cap={self.cap}")
        lines.append(f"violations={len(self.reports)}")
        lines.extend(f"{k}={self.counts.get(k, 0)}" for k in KINDS)
        lines.extend(r.format() for r in self.reports)
        return "\n".join(lines) + "\n"


def _check_labellings(spec: SequenceSpec, labellings: Sequence[Labelling]) -> None:
    if len(labellings) != len(spec.graphs):
        raise ValueError(f"{len(labellings)} labellings for {len(spec.graphs)} graphs")
    for i, l in enumerate(labellings):
        if l.graph != spec.graphs[i] or l.graph_id != i:
            raise ValueError(f"labelling {i} does not belong to graph {i}")
        if not l.is_total:
            missing = next(e for e, a in enumerate(l.labels) if a is None)
            raise UnlabelledEdgeError(missing, i)


def verify_sequence(
    spec: SequenceSpec,
    labellings: Sequence[Labelling],
    full: bool = False,
    cap: Optional[int] = None,
    threads: int = 1,
) -> VerificationResult:
    """Check the C'(lambda) property of a sequence of total labellings.

    The default compares windows of length exactly ``gamma_i``. With
    ``full=True`` every word of every length from ``gamma_i`` to ``cap`` is
    compared against all paths of all graphs at that length.
    """
    gammas = require_admissible(spec)
    _check_labellings(spec, labellings)
    if full:
        reports = _verify_full(spec, gammas, labellings, cap)
    else:
        def scan(n):
            return ViolationScanner(spec.graphs, gammas, labellings[:n]).scan(labellings[n])

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(scan, range(len(labellings))))
        else:
            parts = [scan(n) for n in range(len(labellings))]
        reports = _sorted(r for part in parts for r in part)
    counts = {k: sum(1 for r in reports if r.kind == k) for k in KINDS}
    return VerificationResult(
        passed=not reports,
        reports=reports,
        mode="full" if full else "exact",
        graphs=len(labellings),
        cap=cap if full else None,
        counts=counts,
    )


def _verify_full(spec, gammas: Thresholds, labellings, cap: Optional[int]) -> list[ViolationReport]:
    if not labellings:
        return []
    if cap is None:
        cap = max(gammas.gamma)
    if cap < max(gammas.gamma):
        raise ValueError(f"cap {cap} is below the largest threshold {max(gammas.gamma)}")
    reports = []
    for l in labellings:
        for v in range(l.graph.vertex_count):
            reports.extend(_not_reduced_at(l, v))
    for m in range(min(gammas.gamma), cap + 1):
        index = build_index(labellings, [m])
        for word, occ in index.repeated(m):
            for a in range(len(occ)):
                for b in range(a + 1, len(occ)):
                    p, q = occ[a], occ[b]
                    if min(gammas[p.graph_id], gammas[q.graph_id]) > m:
                        continue
                    if p.graph_id == q.graph_id:
                        reports.append(_same_pair(p.graph_id, word, p, q))
                    else:
                        if p.graph_id < q.graph_id:
                            p, q = q, p
                        reports.append(ViolationReport(CROSS_GRAPH, p.graph_id, word, paths=(p, q)))
    return _sorted(reports)
