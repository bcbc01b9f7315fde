"""Structure of two distinct equal-word paths that share edges.

Given ``P = x_0..x_g`` and ``Q = y_0..y_g`` reading the same word under a
reduced labelling, :func:`analyze_overlap` classifies how they meet and
re-checks the consequences that make ``l(P)`` recoverable from the labels
outside ``E(P)``:

* same direction (``x_{p+i} = y_{q+i}``): after normalising to ``q > p``,
  the word of ``P' = x_p..x_{q+k}`` is a prefix of ``l(Q2)^omega`` where
  ``Q2 = y_p..y_q``;
* reverse direction (``x_{p+i} = y_{q-i}``): the paths never collide, and
  after normalising to ``q > p`` the part of ``Q2`` in front of the overlap
  is longer than the overlap, the overlap word is a prefix of ``l(Q2)`` and
  the segment of ``P`` aligned with the overlap on ``Q`` reads the inverse
  of the overlap word.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import PreconditionError
from .graphs import DirectedPath, girth
from .words import Labelling, Word, is_reduced, path_word, word_inverse

DISJOINT = "disjoint"
SAME_DIRECTION = "same-direction"
REVERSE_DIRECTION = "reverse-direction"
COLLISION = "collision"


@dataclass
class OverlapReport:
    classification: str
    p: Optional[int] = None
    q: Optional[int] = None
    k: int = 0
    reversed_paths: bool = False
    P_parts: dict = field(default_factory=dict)
    Q_parts: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    girth_ok: bool = True
    collision_at: Optional[int] = None
    reduced: bool = True

    @property
    def ok(self) -> bool:
        return self.classification != COLLISION and all(self.checks.values())

    def format(self) -> str:
        lines = [f"classification={self.classification}"]
        if self.p is not None:
            lines += [f"p={self.p}", f"q={self.q}", f"k={self.k}", f"reversed={int(self.reversed_paths)}"]
        lines.append(f"girth_precondition={int(self.girth_ok)}")
        lines.append(f"reduced={int(self.reduced)}")
        if self.collision_at is not None:
            lines.append(f"collision_index={self.collision_at}")
        for name, part in {**{f"P.{k}": v for k, v in self.P_parts.items()},
                           **{f"Q.{k}": v for k, v in self.Q_parts.items()}}.items():
            lines.append(f"{name}=" + "-".join(map(str, part)))
        lines.extend(f"check.{k}={'pass' if v else 'fail'}" for k, v in self.checks.items())
        return "\n".join(lines) + "\n"


def _collision(xs, ys) -> Optional[int]:
    for i in range(len(xs)):
        if xs[i] == ys[i]:
            return i
        if i + 1 < len(xs) and xs[i] == ys[i + 1] and ys[i] == xs[i + 1]:
            return i
    return None


def _concat(*parts) -> tuple:
    out = list(parts[0])
    for part in parts[1:]:
        if out[-1] != part[0]:
            return ()
        out.extend(part[1:])
    return tuple(out)


def _is_prefix_of_power(w: Word, period: Word) -> bool:
    return len(period) > 0 and all(w[i] == period[i % len(period)] for i in range(len(w)))


def _shared(xs, ys):
    # (i, j, same_direction) for P-edge i equal to Q-edge j
    q_edges = {}
    for j in range(len(ys) - 1):
        q_edges[(ys[j], ys[j + 1])] = (j, True)
        q_edges[(ys[j + 1], ys[j])] = (j, False)
    out = []
    for i in range(len(xs) - 1):
        hit = q_edges.get((xs[i], xs[i + 1]))
        if hit is not None:
            out.append((i, hit[0], hit[1]))
    return out


def analyze_overlap(l: Labelling, P: DirectedPath, Q: DirectedPath) -> OverlapReport:
    """Classify two distinct equal-word paths and check the consequences."""
    if P.length != Q.length:
        raise PreconditionError(f"paths have lengths {P.length} and {Q.length}")
    if P.vertices == Q.vertices:
        raise PreconditionError("P and Q are the same path")
    P.validate(l.graph)
    Q.validate(l.graph)
    word = path_word(l, P)
    if path_word(l, Q) != word:
        raise PreconditionError("P and Q read different words")
    gam = P.length
    reduced, _ = is_reduced(l)
    girth_ok = girth(l.graph) >= 6 * gam

    xs, ys = P.vertices, Q.vertices
    hit = _collision(xs, ys)
    if hit is not None:
        return OverlapReport(COLLISION, collision_at=hit, girth_ok=girth_ok, reduced=reduced)
    shared = _shared(xs, ys)
    if not shared:
        return OverlapReport(DISJOINT, girth_ok=girth_ok, reduced=reduced)

    same = shared[0][2]
    if same:
        p, q = shared[0][0], shared[0][1]
        subpath = all(d for _, _, d in shared) and [i for i, _, _ in shared] == list(
            range(p, p + len(shared))
        ) and all(j - i == q - p for i, j, _ in shared)
    else:
        p, q = shared[0][0], shared[0][1] + 1
        subpath = all(not d for _, _, d in shared) and [i for i, _, _ in shared] == list(
            range(p, p + len(shared))
        ) and all(j == q - 1 - (i - p) for i, j, _ in shared)
    k = len(shared)
    cls = SAME_DIRECTION if same else REVERSE_DIRECTION
    report = OverlapReport(cls, p, q, k, girth_ok=girth_ok, reduced=reduced)
    report.checks["intersection_is_subpath"] = subpath
    if not subpath:
        return report
    report.checks["p_ne_q"] = p != q

    if q < p:
        xs, ys = xs[::-1], ys[::-1]
        word = word_inverse(word)
        report.reversed_paths = True
        if same:
            p, q = gam - (p + k), gam - (q + k)
        else:
            p, q = gam - p - k, gam - q + k
        report.p, report.q = p, q

    if same:
        P1, PQ, P3, P4 = xs[: p + 1], xs[p : p + k + 1], xs[p + k : q + k + 1], xs[q + k :]
        Q1, Q2, QP, Q4 = ys[: p + 1], ys[p : q + 1], ys[q : q + k + 1], ys[q + k :]
        report.P_parts = {"P1": P1, "overlap": PQ, "P3": P3, "P4": P4}
        report.Q_parts = {"Q1": Q1, "Q2": Q2, "overlap": QP, "Q4": Q4}
        report.checks["concatenation"] = _concat(P1, PQ, P3, P4) == xs and _concat(Q1, Q2, QP, Q4) == ys
        report.checks["q2_nonempty"] = q - p > 0
        p_prime = word[p : q + k]
        report.checks["periodic_prefix"] = _is_prefix_of_power(p_prime, word[p:q])
    else:
        # overlap on P is x_p..x_{p+k}, on Q it is y_{q-k}..y_q
        P1, PQ = xs[: p + 1], xs[p : p + k + 1]
        Q1, Q2, QP, Q4 = ys[: p + 1], ys[p : q - k + 1], ys[q - k : q + 1], ys[q:]
        if q - k >= p + k:
            Pmid, P3 = xs[p + k : q - k + 1], xs[q - k : q + 1]
        else:
            Pmid, P3 = (), ()
        P4 = xs[q:]
        report.P_parts = {"P1": P1, "overlap": PQ, "Pmid": Pmid, "P3": P3, "P4": P4}
        report.Q_parts = {"Q1": Q1, "Q2": Q2, "overlap": QP, "Q4": Q4}
        report.checks["no_collision"] = True
        report.checks["q2_longer_than_overlap"] = (q - k) - p > k
        ok_concat = bool(P3) and _concat(P1, PQ, Pmid, P3, P4) == xs and _concat(Q1, Q2, QP, Q4) == ys
        report.checks["concatenation"] = ok_concat
        overlap_word = word[p : p + k]
        report.checks["overlap_prefix_of_q2"] = word[p : q - k][:k] == overlap_word and q - k - p >= k
        report.checks["p3_is_inverse_overlap"] = bool(P3) and word[q - k : q] == word_inverse(overlap_word)
    return report
