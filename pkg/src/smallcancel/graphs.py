"""Oriented simple graphs, metric invariants, path enumeration and graph files.

Every :class:`Graph` carries a fixed orientation: edge ``i`` is stored as
``(tail, head)`` and that order is what the labelling code uses to decide
whether a directed pair reads a label or its formal inverse.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Iterator, Optional

from .errors import GraphFormatError

INF = math.inf


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    _adj: tuple = field(init=False, repr=False, compare=False)
    _eid: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        n = self.vertex_count
        if n < 0:
            raise ValueError("vertex_count must be nonnegative")
        eid = {}
        adj = [[] for _ in range(n)]
        for i, (u, v) in enumerate(edges):
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {i} = ({u}, {v}) has a vertex outside 0..{n - 1}")
            if u == v:
                raise ValueError(f"edge {i} is a self-loop at {u}")
            key = (u, v) if u < v else (v, u)
            if key in eid:
                raise ValueError(f"edge {i} = ({u}, {v}) duplicates edge {eid[key]}")
            eid[key] = i
            adj[u].append((v, i))
            adj[v].append((u, i))
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))
        object.__setattr__(self, "_eid", eid)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], vertex_count: Optional[int] = None) -> "Graph":
        edges = [tuple(e) for e in edges]
        if vertex_count is None:
            vertex_count = 1 + max((max(e) for e in edges), default=-1)
        return cls(vertex_count, tuple(edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def incident(self, v: int) -> tuple[tuple[int, int], ...]:
        """``(neighbor, edge_id)`` pairs at ``v``, sorted by neighbor."""
        return self._adj[v]

    def neighbors(self, v: int) -> list[int]:
        return [w for w, _ in self._adj[v]]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def edge_id(self, u: int, v: int) -> int:
        try:
            return self._eid[(u, v) if u < v else (v, u)]
        except KeyError:
            raise KeyError(f"({u}, {v}) is not an edge") from None

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._eid


@dataclass(frozen=True, order=True)
class DirectedPath:
    """A vertex-simple path read in one direction.

    A path and its reverse are different values.
    """

    graph_id: int
    vertices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if len(self.vertices) < 2:
            raise ValueError("a path needs at least one edge")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError(f"path {self.vertices} repeats a vertex")

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def reversed(self) -> "DirectedPath":
        return DirectedPath(self.graph_id, self.vertices[::-1])

    def edge_ids(self, g: Graph) -> tuple[int, ...]:
        vs = self.vertices
        return tuple(g.edge_id(vs[i], vs[i + 1]) for i in range(len(vs) - 1))

    def validate(self, g: Graph) -> None:
        vs = self.vertices
        for i in range(len(vs) - 1):
            if not g.has_edge(vs[i], vs[i + 1]):
                raise ValueError(f"({vs[i]}, {vs[i + 1]}) is not an edge of graph {self.graph_id}")


@dataclass(frozen=True)
class SequenceSpec:
    lam: Fraction
    A: Fraction
    Delta: int
    graphs: tuple[Graph, ...] = ()

    def __post_init__(self):
        lam = Fraction(self.lam)
        A = Fraction(self.A)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "graphs", tuple(self.graphs))
        if not (0 < lam <= Fraction(1, 6)):
            raise ValueError(f"lambda must lie in (0, 1/6], got {lam}")
        if A <= 0:
            raise ValueError(f"A must be positive, got {A}")
        if int(self.Delta) != self.Delta or self.Delta < 3:
            raise ValueError(f"Delta must be an integer >= 3, got {self.Delta}")


# -- metric invariants -------------------------------------------------------


def _bfs(g: Graph, root: int) -> list[int]:
    dist = [-1] * g.vertex_count
    dist[root] = 0
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w, _ in g.incident(u):
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def girth(g: Graph):
    """Length of a shortest cycle, or ``math.inf`` for a forest.

    One BFS per root; a non-tree edge ``uw`` closes a walk of length
    ``d(u) + d(w) + 1``. The minimum over all roots is exact.
    """
    best = INF
    n = g.vertex_count
    for root in range(n):
        dist = [-1] * n
        via = [-1] * n
        dist[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] >= best:
                break
            for w, e in g.incident(u):
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    via[w] = e
                    queue.append(w)
                elif e != via[u]:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def shortest_cycle(g: Graph) -> Optional[list[int]]:
    """Vertices of one shortest cycle (``None`` for forests).

    Independent of :func:`girth`: for each edge ``uv`` it searches a shortest
    ``u``-``v`` path avoiding that edge.
    """
    best = None
    for e, (u, v) in enumerate(g.edges):
        prev = {u: None}
        queue = deque([u])
        while queue and v not in prev:
            x = queue.popleft()
            for w, f in g.incident(x):
                if f != e and w not in prev:
                    prev[w] = x
                    queue.append(w)
        if v in prev:
            cyc = [v]
            while prev[cyc[-1]] is not None:
                cyc.append(prev[cyc[-1]])
            if best is None or len(cyc) < len(best):
                best = cyc
    return best


def diameter(g: Graph):
    """Largest distance between two vertices; ``math.inf`` if disconnected."""
    best = 0
    for root in range(g.vertex_count):
        dist = _bfs(g, root)
        if min(dist, default=0) < 0:
            return INF
        best = max(best, max(dist))
    return best


def is_connected(g: Graph) -> bool:
    if g.vertex_count == 0:
        return True
    return min(_bfs(g, 0)) >= 0


def gamma_of(lam: Fraction, g_girth) -> Optional[int]:
    """floor(lam * girth) in exact integer arithmetic; ``None`` for acyclic graphs."""
    if g_girth == INF:
        return None
    lam = Fraction(lam)
    return (lam.numerator * int(g_girth)) // lam.denominator


# -- paths -------------------------------------------------------------------


def _extend(g: Graph, start: int, steps: int, used: set, edge_ok) -> Iterator[list[int]]:
    # vertex-simple continuations of `steps` edges from `start` avoiding `used`
    if steps == 0:
        yield []
        return
    for w, e in g.incident(start):
        if w in used or (edge_ok is not None and not edge_ok(e)):
            continue
        used.add(w)
        for rest in _extend(g, w, steps - 1, used, edge_ok):
            yield [w] + rest
        used.discard(w)


def iter_path_vertices(
    g: Graph,
    length: int,
    through: Optional[int] = None,
    edge_ok: Optional[Callable[[int], bool]] = None,
) -> Iterator[tuple[int, ...]]:
    """Vertex tuples of all directed simple paths with ``length`` edges.

    Without ``through`` the order is lexicographic. With ``through`` the
    paths containing that edge are produced in no particular order (callers
    sort when they need to). ``edge_ok`` restricts to a subgraph given by an
    edge predicate.
    """
    if length < 1:
        raise ValueError("path length must be >= 1")
    if through is None:
        for v in range(g.vertex_count):
            for rest in _extend(g, v, length, {v}, edge_ok):
                yield (v, *rest)
        return
    if edge_ok is not None and not edge_ok(through):
        return
    a, b = g.edges[through]
    for x, y in ((a, b), (b, a)):
        for pos in range(length):
            # the path crosses x->y between positions pos and pos+1
            used = {x, y}
            for back in _extend(g, x, pos, used, edge_ok):
                used_b = used | set(back)
                for fwd in _extend(g, y, length - 1 - pos, used_b, edge_ok):
                    yield (*reversed(back), x, y, *fwd)


def enumerate_paths(
    g: Graph, length: int, through: Optional[int] = None, graph_id: int = 0
) -> list[DirectedPath]:
    """All directed paths of exactly ``length`` edges, in lexicographic order."""
    return [DirectedPath(graph_id, vs) for vs in sorted(iter_path_vertices(g, length, through=through))]


def count_paths(g: Graph, length: int) -> int:
    return sum(1 for _ in iter_path_vertices(g, length))


# -- sequence admissibility --------------------------------------------------


@dataclass
class Condition:
    name: str
    passed: bool = True
    failures: list = field(default_factory=list)  # (graph_index, detail)

    def fail(self, index, detail):
        self.passed = False
        self.failures.append((index, detail))


@dataclass
class SequenceReport:
    conditions: list[Condition]
    girths: list
    diameters: list
    gammas: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def condition(self, name: str) -> Condition:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[tuple[str, int, str]]:
        return [(c.name, i, d) for c in self.conditions for i, d in c.failures]


def check_sequence(spec: SequenceSpec) -> SequenceReport:
    """Per-graph admissibility of a finite graph sequence.

    Only finitely many graphs can be checked, so the requirement that the
    girth tends to infinity is not (and cannot be) verified here; strict
    monotonicity of the thresholds is the finite stand-in.
    """
    connected = Condition("connected")
    degree = Condition("degree")
    diam_ratio = Condition("diameter")
    gamma_gt1 = Condition("gamma>1")
    monotone = Condition("monotone")
    girths, diams, gammas = [], [], []
    for i, g in enumerate(spec.graphs):
        gi = girth(g)
        di = diameter(g)
        girths.append(gi)
        diams.append(di)
        if di == INF:
            connected.fail(i, "graph is disconnected")
        if g.max_degree > spec.Delta:
            degree.fail(i, f"max degree {g.max_degree} > Delta={spec.Delta}")
        if di == INF or gi == INF or di > spec.A * gi:
            diam_ratio.fail(i, f"diameter {di} > A*girth = {spec.A}*{gi}")
        gam = gamma_of(spec.lam, gi)
        gammas.append(gam)
        if gam is None or gam <= 1:
            gamma_gt1.fail(i, f"gamma = {gam} (girth {gi})")
        if i > 0:
            prev = gammas[i - 1]
            if prev is not None and gam is not None and gam <= prev:
                monotone.fail(i, f"gamma {gam} <= previous gamma {prev}")
    return SequenceReport([connected, degree, diam_ratio, gamma_gt1, monotone], girths, diams, gammas)


# -- graph file format -------------------------------------------------------


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def parse_graph(text: str, source: Optional[str] = None) -> Graph:
    """Parse the ``n m`` / ``u v`` text format; written order is the orientation."""
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise GraphFormatError("missing header line 'n m'", line=1, source=source) from None
    try:
        n, m = (int(t) for t in header.split())
    except ValueError:
        raise GraphFormatError(f"bad header {header!r}, expected 'n m'", lineno, source) from None
    edges = []
    seen = {}
    for lineno, line in lines:
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"expected 'u v', got {line!r}", lineno, source)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"non-integer vertex in {line!r}", lineno, source) from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex out of range 0..{n - 1} in {line!r}", lineno, source)
        if u == v:
            raise GraphFormatError(f"self-loop at {u}", lineno, source)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"edge {u} {v} repeats line {seen[key]}", lineno, source)
        seen[key] = lineno
        edges.append((u, v))
    if len(edges) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(edges)}", None, source)
    return Graph(n, tuple(edges))


def format_graph(g: Graph, comment: Optional[str] = None) -> str:
    out = []
    if comment:
        out.extend(f"# {c}" for c in comment.splitlines())
    out.append(f"{g.vertex_count} {g.edge_count}")
    out.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


def read_graph(path) -> Graph:
    path = Path(path)
    return parse_graph(path.read_text(), source=str(path))


def write_graph(g: Graph, path, comment: Optional[str] = None) -> None:
    Path(path).write_text(format_graph(g, comment))
