"""Involutive label alphabets, words, and (partial) edge labellings.

Labels are the integers ``0..L-1`` and the formal inverse of ``k`` is
``k ^ 1``, so every even ``L`` gives a fixed-point-free involution. Reading
an edge along its stored orientation gives its label; reading it backwards
gives the inverse.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import GraphFormatError, UnlabelledEdgeError
from .graphs import DirectedPath, Graph

Word = tuple[int, ...]


def inverse_letter(a: int) -> int:
    return a ^ 1


def word_inverse(w: Sequence[int]) -> Word:
    """Reverse ``w`` and invert every letter."""
    return tuple(a ^ 1 for a in reversed(w))


@dataclass(frozen=True)
class LabelAlphabet:
    size: int

    def __post_init__(self):
        if self.size < 2 or self.size % 2:
            raise ValueError(f"alphabet size must be even and >= 2, got {self.size}")

    def __iter__(self):
        return iter(range(self.size))

    def __contains__(self, a) -> bool:
        return isinstance(a, int) and 0 <= a < self.size

    def inverse(self, a: int) -> int:
        if a not in self:
            raise ValueError(f"{a} is not a label of an alphabet of size {self.size}")
        return a ^ 1

    def pairs(self) -> list[tuple[int, int]]:
        return [(k, k + 1) for k in range(0, self.size, 2)]


@dataclass(frozen=True)
class Labelling:
    """Partial map from edge ids of ``graph`` to labels in ``0..L-1``.

    ``labels[e] is None`` means edge ``e`` is outside the domain.
    """

    graph: Graph
    L: int
    labels: tuple[Optional[int], ...]
    graph_id: int = 0

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        LabelAlphabet(self.L)
        if len(labels) != self.graph.edge_count:
            raise ValueError(f"{len(labels)} labels for {self.graph.edge_count} edges")
        for e, a in enumerate(labels):
            if a is not None and not (0 <= a < self.L):
                raise ValueError(f"label {a} on edge {e} is outside 0..{self.L - 1}")

    @classmethod
    def empty(cls, graph: Graph, L: int, graph_id: int = 0) -> "Labelling":
        return cls(graph, L, (None,) * graph.edge_count, graph_id)

    @classmethod
    def from_mapping(cls, graph: Graph, L: int, mapping: Mapping[int, int], graph_id: int = 0) -> "Labelling":
        labels = [None] * graph.edge_count
        for e, a in mapping.items():
            labels[e] = a
        return cls(graph, L, tuple(labels), graph_id)

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(e for e, a in enumerate(self.labels) if a is not None)

    @property
    def is_total(self) -> bool:
        return all(a is not None for a in self.labels)

    def is_labelled(self, e: int) -> bool:
        return self.labels[e] is not None

    def directed(self, x: int, y: int) -> Optional[int]:
        """Label read from ``x`` to ``y``: the stored label along the
        orientation, its inverse against it."""
        e = self.graph.edge_id(x, y)
        a = self.labels[e]
        if a is None:
            return None
        return a if self.graph.edges[e][0] == x else a ^ 1

    def restrict(self, edges: Iterable[int]) -> "Labelling":
        keep = set(edges)
        return Labelling(
            self.graph, self.L, tuple(a if e in keep else None for e, a in enumerate(self.labels)), self.graph_id
        )

    def with_label(self, e: int, a: Optional[int]) -> "Labelling":
        labels = list(self.labels)
        labels[e] = a
        return Labelling(self.graph, self.L, tuple(labels), self.graph_id)

    def without(self, edges: Iterable[int]) -> "Labelling":
        labels = list(self.labels)
        for e in edges:
            labels[e] = None
        return Labelling(self.graph, self.L, tuple(labels), self.graph_id)


def path_word(l: Labelling, p: Union[DirectedPath, Sequence[int]]) -> Word:
    """The word read along ``p``; raises if an edge of ``p`` is unlabelled."""
    vs = p.vertices if isinstance(p, DirectedPath) else tuple(p)
    g = l.graph
    out = []
    for x, y in zip(vs, vs[1:]):
        e = g.edge_id(x, y)
        a = l.labels[e]
        if a is None:
            raise UnlabelledEdgeError(e, l.graph_id)
        out.append(a if g.edges[e][0] == x else a ^ 1)
    return tuple(out)


def out_labels(l: Labelling, v: int) -> list[tuple[int, int]]:
    """``(label, neighbor)`` for every labelled edge at ``v``, read outwards."""
    g = l.graph
    res = []
    for w, e in g.incident(v):
        a = l.labels[e]
        if a is not None:
            res.append((a if g.edges[e][0] == v else a ^ 1, w))
    return res


def is_reduced(l: Labelling) -> tuple[bool, Optional[tuple[int, int, int]]]:
    """Check that no vertex reads the same label towards two neighbors.

    Returns ``(True, None)`` or ``(False, (v, u, w))`` with ``u < w`` for the
    first offending vertex ``v``.
    """
    for v in range(l.graph.vertex_count):
        seen = {}
        for a, w in out_labels(l, v):
            if a in seen:
                return False, (v, seen[a], w)
            seen[a] = w
    return True, None


# -- labelling file format ---------------------------------------------------


def format_labelling(l: Labelling) -> str:
    lines = [f"{l.graph_id} {l.L}"]
    for e, a in enumerate(l.labels):
        if a is not None:
            u, v = l.graph.edges[e]
            lines.append(f"{u} {v} {a}")
    return "\n".join(lines) + "\n"


def parse_labelling(text: str, graph: Graph, source: Optional[str] = None) -> Labelling:
    rows = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), start=1)]
    rows = [(i, ln) for i, ln in rows if ln and not ln.startswith("#")]
    if not rows:
        raise GraphFormatError("missing header 'graph_id L'", 1, source)
    lineno, header = rows[0]
    try:
        graph_id, L = (int(t) for t in header.split())
    except ValueError:
        raise GraphFormatError(f"bad header {header!r}, expected 'graph_id L'", lineno, source) from None
    if L < 2 or L % 2:
        raise GraphFormatError(f"alphabet size {L} must be even and >= 2", lineno, source)
    labels: list[Optional[int]] = [None] * graph.edge_count
    for lineno, line in rows[1:]:
        try:
            u, v, a = (int(t) for t in line.split())
        except ValueError:
            raise GraphFormatError(f"expected 'u v label', got {line!r}", lineno, source) from None
        if not (0 <= u < graph.vertex_count and 0 <= v < graph.vertex_count) or not graph.has_edge(u, v):
            raise GraphFormatError(f"({u}, {v}) is not an edge of the graph", lineno, source)
        e = graph.edge_id(u, v)
        if graph.edges[e] != (u, v):
            raise GraphFormatError(f"edge ({u}, {v}) is stored as {graph.edges[e]}; orientation mismatch", lineno, source)
        if not (0 <= a < L):
            raise GraphFormatError(f"label {a} outside 0..{L - 1}", lineno, source)
        if labels[e] is not None:
            raise GraphFormatError(f"edge ({u}, {v}) labelled twice", lineno, source)
        labels[e] = a
    return Labelling(graph, L, tuple(labels), graph_id)


def read_labelling(path, graph: Graph) -> Labelling:
    path = Path(path)
    return parse_labelling(path.read_text(), graph, source=str(path))


def write_labelling(l: Labelling, path) -> None:
    Path(path).write_text(format_labelling(l))
